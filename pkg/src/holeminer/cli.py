"""``holeminer`` command line.

Exit codes: 0 success, 1 input or usage error, 2 search space over the
guard limit, 3 algorithms disagreed during ``bench``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import statistics
import sys
from collections import Counter

from . import __version__
from .graph import EdgeListParseError, GraphError, dump_edge_list, read_edge_list, weak_components
from .miners import Algorithm, MiningConfig, SearchSpaceTooLarge, mine
from .patterns import PatternKind
from .pruning import prune_stats
from .stock_net import DEFAULT_LAG, DEFAULT_THETA, PriceLoadError, build_stock_graph, read_prices

log = logging.getLogger("holeminer")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_GUARD = 2
EXIT_MISMATCH = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _load(path):
    g, report = read_edge_list(path)
    for msg in report.warnings():
        log.warning("%s: %s", path, msg)
    return g, report


def cmd_detect(args) -> int:
    g, load_report = _load(args.input)
    cfg = MiningConfig(
        max_size=args.max_size,
        algorithm=Algorithm(args.algorithm),
        kind=PatternKind(args.pattern),
        parallel=args.parallel,
        guard_limit=args.guard_limit,
        search=args.search,
    )
    result = mine(g, cfg)
    for i, ms in result.timings_ms.items():
        log.info("size %d: %d pattern(s) in %.1f ms", i, len(result.patterns_by_size[i]), ms)
    labelled = result.labelled()
    if args.format == "csv":
        rows = [(i, " ".join(members)) for i, sets in labelled.items() for members in sets]
        _emit(_csv_text(["size", "members"], rows), args.output)
        return EXIT_OK
    report = {
        "command": {
            "name": "detect",
            "input": args.input,
            "max_size": args.max_size,
            "algorithm": cfg.algorithm.value,
            "pattern": cfg.kind.value,
            "search": cfg.search.value,
            "parallel": cfg.parallel,
        },
        "input": {"nodes": g.node_count, "edges": g.edge_count},
        "patterns": {str(i): sets for i, sets in labelled.items()},
        "counts": {str(i): len(sets) for i, sets in labelled.items()},
        "timings_ms": {str(i): round(ms, 3) for i, ms in result.timings_ms.items()},
        "prune_stats": (
            {str(i): st.as_dict() for i, st in result.funnel.items()} if result.funnel is not None else None
        ),
        "warnings": load_report.warnings(),
        "exit_status": EXIT_OK,
    }
    _emit(_dumps(report), args.output)
    return EXIT_OK


def cmd_prune_stats(args) -> int:
    g, _ = _load(args.input)
    stats = prune_stats(g, args.size).as_dict()
    if args.format == "csv":
        _emit(_csv_text(list(stats), [list(stats.values())]), args.output)
    else:
        _emit(_dumps(stats), args.output)
    return EXIT_OK


def cmd_stock_graph(args) -> int:
    prices = read_prices(args.prices)
    for msg in prices.rejected:
        log.warning("%s: excluded %s", args.prices, msg)
    g = build_stock_graph(prices, theta=args.theta, k=args.lag, raw_prices=args.raw_prices)
    log.info("stock graph: %d nodes, %d edges", g.node_count, g.edge_count)
    _emit(dump_edge_list(g), args.output)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.repeats < 1:
        raise UsageError(f"--repeats must be >= 1, got {args.repeats}")
    names = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    if names == ["all"]:
        algorithms = list(Algorithm)
    else:
        try:
            algorithms = [Algorithm(a) for a in names]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if not algorithms:
        raise UsageError("no algorithms given")
    g, _ = _load(args.input)
    rows = []
    reference = None
    for algo in algorithms:
        cfg = MiningConfig(max_size=args.max_size, algorithm=algo, guard_limit=args.guard_limit)
        times: dict[int, list[float]] = {i: [] for i in range(1, args.max_size + 1)}
        sets = None
        for _ in range(args.repeats):
            result = mine(g, cfg)
            for i, ms in result.timings_ms.items():
                times[i].append(ms)
            sets = result.pattern_sets()
        if reference is None:
            reference = (algo, sets)
        elif sets != reference[1]:
            bad = [i for i in sets if sets[i] != reference[1].get(i)]
            log.error("correctness failure: %s and %s disagree at size(s) %s",
                      reference[0].value, algo.value, bad)
            return EXIT_MISMATCH
        for i in range(1, args.max_size + 1):
            median = statistics.median(times[i])
            rows.append((algo.value, i, f"{median:.3f}", len(sets[i])))
            log.info("%s size %d: %.1f ms", algo.value, i, median)
    _emit(_csv_text(["algorithm", "i", "wall_ms", "pattern_count"], rows), args.output)
    return EXIT_OK


def cmd_stats(args) -> int:
    g, report = _load(args.input)
    comps = weak_components(g)
    out_hist = Counter(len(g.succ[v]) for v in range(g.node_count))
    in_hist = Counter(len(g.pred[v]) for v in range(g.node_count))
    if args.format == "csv":
        rows = [("nodes", "", g.node_count), ("edges", "", g.edge_count), ("components", "", len(comps))]
        rows += [("out_degree", d, c) for d, c in sorted(out_hist.items())]
        rows += [("in_degree", d, c) for d, c in sorted(in_hist.items())]
        _emit(_csv_text(["metric", "degree", "value"], rows), args.output)
        return EXIT_OK
    payload = {
        "nodes": g.node_count,
        "edges": g.edge_count,
        "components": len(comps),
        "largest_component": max((len(c) for c in comps), default=0),
        "out_degree_histogram": {str(d): c for d, c in sorted(out_hist.items())},
        "in_degree_histogram": {str(d): c for d, c in sorted(in_hist.items())},
        "warnings": report.warnings(),
    }
    _emit(_dumps(payload), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="holeminer", description="Blackhole and volcano pattern mining in directed graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="log per-size progress")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("detect", help="mine 1..N-node blackholes or volcanoes")
    p.add_argument("--input", required=True)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--algorithm", choices=[a.value for a in Algorithm], default=Algorithm.IBLACKHOLE_DC.value)
    p.add_argument("--pattern", choices=[k.value for k in PatternKind], default=PatternKind.BLACKHOLE.value)
    p.add_argument("--search", choices=["combinations", "connected"], default="combinations",
                   help="how the pruned algorithms enumerate the final list")
    p.add_argument("--output")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--guard-limit", type=_positive_int)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("prune-stats", help="pruning funnel and final-list shape for one size")
    p.add_argument("--input", required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--output")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_prune_stats)

    p = sub.add_parser("stock-graph", help="build a lagged-correlation network from closing prices")
    p.add_argument("--prices", required=True)
    p.add_argument("--theta", type=float, default=DEFAULT_THETA)
    p.add_argument("--lag", type=_positive_int, default=DEFAULT_LAG)
    p.add_argument("--output")
    p.add_argument("--raw-prices", action="store_true",
                   help="correlate closing prices instead of up/down movements")
    p.set_defaults(func=cmd_stock_graph)

    p = sub.add_parser("bench", help="time the algorithms and cross-check their output")
    p.add_argument("--input", required=True)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--algorithms", default="all", help="comma list of brute,iblackhole,iblackhole-dc or 'all'")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--guard-limit", type=_positive_int)
    p.add_argument("--output")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("stats", help="node/edge/component counts and degree histograms")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"holeminer: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        if getattr(args, "max_size", 1) < 1:
            raise UsageError(f"--max-size must be >= 1, got {args.max_size}")
        if getattr(args, "size", 1) < 1:
            raise UsageError(f"--size must be >= 1, got {args.size}")
        return args.func(args)
    except UsageError as exc:
        print(f"holeminer: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SearchSpaceTooLarge as exc:
        print(f"holeminer: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (OSError, EdgeListParseError, PriceLoadError, GraphError, ValueError) as exc:
        print(f"holeminer: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
