"""Directed lagged-correlation networks from daily closing prices.

Each instrument's price series becomes an up/down movement vector. For an
ordered pair ``(i, j)`` the movement of ``j`` is delayed by ``k`` days and
correlated with that of ``i``; a correlation above ``theta`` adds the edge
``j -> i`` ("j follows i").
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graph import DirectedGraph

log = logging.getLogger(__name__)

DEFAULT_THETA = 0.35
DEFAULT_LAG = 1

_MISSING = {"", "na", "nan", "null", "none"}


class PriceLoadError(ValueError):
    pass


@dataclass
class PriceMatrix:
    instruments: list[str]
    prices: np.ndarray  # shape (instruments, T)
    rejected: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.prices = np.asarray(self.prices, dtype=float)
        if self.prices.ndim != 2 or self.prices.shape[0] != len(self.instruments):
            raise PriceLoadError("prices must be a 2-D array with one row per instrument")
        if len(set(self.instruments)) != len(self.instruments):
            raise PriceLoadError("tickers must be unique")
        if self.prices.shape[1] < 2:
            raise PriceLoadError(f"need at least 2 days of prices, got {self.prices.shape[1]}")
        if self.prices.size and not (self.prices > 0).all():
            raise PriceLoadError("prices must be positive")

    @property
    def days(self) -> int:
        return self.prices.shape[1]


@dataclass
class MovementMatrix:
    instruments: list[str]
    moves: np.ndarray  # bool, shape (instruments, T-1)


def load_prices(lines: Iterable[str], source: str = "<prices>") -> PriceMatrix:
    """Parse ``ticker,d1,...,dT`` CSV.

    Rows with a missing or non-positive price are left out and listed in
    ``PriceMatrix.rejected`` with the reason. Structural problems (ragged
    rows, duplicate tickers, unparseable numbers, fewer than two days) raise
    :class:`PriceLoadError` naming the row.
    """
    reader = csv.reader(lines)
    header = None
    for header in reader:
        if header and any(cell.strip() for cell in header):
            break
    if not header:
        raise PriceLoadError(f"{source}: empty file")
    width = len(header)
    if width < 3:
        raise PriceLoadError(f"{source}: header needs a ticker column and at least 2 days")
    tickers: list[str] = []
    rows: list[list[float]] = []
    rejected: list[str] = []
    seen: set[str] = set()
    for rowno, row in enumerate(reader, start=2):
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) != width:
            raise PriceLoadError(f"{source}: row {rowno} has {len(row)} cells, header has {width}")
        ticker = row[0].strip()
        if not ticker:
            raise PriceLoadError(f"{source}: row {rowno} has an empty ticker")
        if ticker in seen:
            raise PriceLoadError(f"{source}: row {rowno} repeats ticker {ticker!r}")
        seen.add(ticker)
        values = []
        problem = None
        for col, cell in enumerate(row[1:], start=2):
            cell = cell.strip()
            if cell.lower() in _MISSING:
                problem = f"missing price in column {col}"
                break
            try:
                value = float(cell)
            except ValueError:
                raise PriceLoadError(f"{source}: row {rowno} column {col}: non-numeric price {cell!r}") from None
            if not value > 0 or not np.isfinite(value):
                problem = f"non-positive price {cell} in column {col}"
                break
            values.append(value)
        if problem:
            msg = f"row {rowno} ({ticker}): {problem}"
            log.warning("excluding %s", msg)
            rejected.append(msg)
            continue
        tickers.append(ticker)
        rows.append(values)
    prices = np.array(rows, dtype=float).reshape(len(rows), width - 1)
    return PriceMatrix(tickers, prices, rejected)


def read_prices(path) -> PriceMatrix:
    with open(path, newline="", encoding="utf-8") as fh:
        return load_prices(fh, source=str(path))


def movements(p: PriceMatrix) -> MovementMatrix:
    """Day-over-day movement: True when the next close is at least today's."""
    return MovementMatrix(list(p.instruments), p.prices[:, 1:] >= p.prices[:, :-1])


def lagged_correlation(x: Sequence[float], y: Sequence[float], k: int) -> float | None:
    """Pearson correlation of ``x[t]`` with ``y[t + k]`` over the overlap.

    Returns ``None`` when either aligned slice is constant.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-D vectors of equal length")
    n = x.size
    if not 1 <= k < n:
        raise ValueError(f"lag must satisfy 1 <= k < {n}, got {k}")
    a = x[: n - k]
    b = y[k:]
    da = a - a.mean()
    db = b - b.mean()
    sa = float(np.dot(da, da))
    sb = float(np.dot(db, db))
    if sa == 0.0 or sb == 0.0:
        return None
    r = float(np.dot(da, db) / np.sqrt(sa * sb))
    return min(1.0, max(-1.0, r))


def lagged_correlation_matrix(series: np.ndarray, k: int) -> np.ndarray:
    """``R[i, j]`` = :func:`lagged_correlation` of rows ``i`` and ``j``; NaN if undefined."""
    series = np.asarray(series, dtype=float)
    n = series.shape[1]
    if not 1 <= k < n:
        raise ValueError(f"lag must satisfy 1 <= k < {n}, got {k}")
    lead = series[:, : n - k]
    follow = series[:, k:]
    lead = lead - lead.mean(axis=1, keepdims=True)
    follow = follow - follow.mean(axis=1, keepdims=True)
    na = np.sqrt((lead * lead).sum(axis=1))
    nb = np.sqrt((follow * follow).sum(axis=1))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = (lead @ follow.T) / np.outer(na, nb)
    r[(na == 0)[:, None] | (nb == 0)[None, :]] = np.nan
    return np.clip(r, -1.0, 1.0)


def build_stock_graph(p: PriceMatrix, theta: float = DEFAULT_THETA, k: int = DEFAULT_LAG,
                      raw_prices: bool = False) -> DirectedGraph:
    """Edge ``j -> i`` for every ordered pair with lagged correlation above ``theta``.

    Movement vectors are correlated by default; ``raw_prices`` correlates the
    closing prices themselves instead.
    """
    if len(p.instruments) < 2:
        raise ValueError(f"need at least 2 instruments, got {len(p.instruments)}")
    series = p.prices if raw_prices else movements(p).moves
    r = lagged_correlation_matrix(series, k)
    edges = []
    for i, j in zip(*np.nonzero(r > theta)):
        if i != j:
            edges.append((int(j), int(i), 1.0))
    edges.sort()
    return DirectedGraph(p.instruments, edges)
