"""Counting curves N(L), exponent fits, the total-length ratio and Thurston-ball estimates."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CutoffTooSmall, EmptyCensus, GridExceedsCutoff, InsufficientData
from .orbits import GUARD, Census, enumerate_simple


@dataclass(frozen=True)
class CountingCurve:
    L: tuple[float, ...]
    N: tuple[int, ...]
    total_length: tuple[float, ...]
    d: int = 2

    def at(self, L: float) -> tuple[int, float]:
        i = self.L.index(L)
        return self.N[i], self.total_length[i]

    def rows(self):
        return list(zip(self.L, self.N, self.total_length))


def default_grid(L_max: float, step: float = 1.0, start: float = 1.0) -> list[float]:
    n = int(math.floor((L_max - start) / step + 1e-9))
    return [start + k * step for k in range(n + 1)]


def counting_curve(c: Census, grid: Sequence[float], d: int = 2) -> CountingCurve:
    """Exact step-function values N(L) and Σ ℓ over entries with ℓ <= L, at each grid point."""
    grid = [float(g) for g in grid]
    if any(g > c.cutoff + GUARD for g in grid):
        raise GridExceedsCutoff(f"grid reaches {max(grid)} beyond census cutoff {c.cutoff}")
    lengths = [e.length for e in c.entries]  # already sorted
    # prefix sums in census order, so totals are reproducible sums over a fixed order
    prefix = [0.0]
    for x in lengths:
        prefix.append(prefix[-1] + x)
    Ns, Ts = [], []
    for g in grid:
        k = bisect.bisect_right(lengths, g + GUARD)
        Ns.append(k)
        Ts.append(prefix[k])
    return CountingCurve(tuple(grid), tuple(Ns), tuple(Ts), d)


def fit_exponent(cc: CountingCurve, window: tuple[float, float]) -> tuple[float, float]:
    """Least-squares slope of log N against log L over grid points in ``window``."""
    lo, hi = window
    pts = [(L, N) for L, N in zip(cc.L, cc.N) if lo - GUARD <= L <= hi + GUARD and N > 0]
    if len(pts) < 5:
        raise InsufficientData(f"{len(pts)} usable grid points in window {window}, need 5")
    x = np.log([p[0] for p in pts])
    y = np.log([float(p[1]) for p in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), r2


def lemma4_ratio(cc: CountingCurve, L: float) -> float:
    """total_length(L) / (L N(L)); tends to d/(d+1) when N grows like L^d."""
    N, total = cc.at(L)
    if N == 0:
        raise EmptyCensus(f"no curves of length <= {L}")
    return total / (L * N)


@dataclass(frozen=True)
class ThurstonBallEstimate:
    L: float
    weighted_count: int
    estimate: float
    d: int = 2


def weighted_count(simple_lengths: Sequence[float], L: float) -> int:
    """Number of pairs (k >= 1, simple class) with k·ℓ <= L, i.e. Σ_k N(L/k)."""
    lengths = sorted(simple_lengths)
    total = 0
    k = 1
    while lengths and lengths[0] * k <= L + GUARD:
        total += bisect.bisect_right(lengths, L / k + GUARD)
        k += 1
    return total


def thurston_ball(S, L: float, simple: Census | None = None) -> ThurstonBallEstimate:
    """Integer multicurves on the punctured torus are k·(simple class); count those
    of length <= L and scale by L^d."""
    if simple is None or simple.cutoff < L - GUARD:
        try:
            simple = enumerate_simple(S, L)
        except CutoffTooSmall:
            raise CutoffTooSmall(f"L = {L} is below the systole") from None
    count = weighted_count(simple.lengths, L)
    if count == 0:
        raise CutoffTooSmall(f"L = {L} is below the systole")
    return ThurstonBallEstimate(float(L), count, count / L ** S.d, S.d)


def estimate_C(cc: CountingCurve, tb: ThurstonBallEstimate, L: float) -> float:
    """(N(L)/L^d) divided by the Thurston-ball estimate."""
    N, _ = cc.at(L)
    return (N / L ** cc.d) / tb.estimate


def stats_table(S, census: Census, grid: Sequence[float], simple: Census | None = None) -> list[dict]:
    """Rows (L, N, total_length, ratio, ball_estimate, C_estimate) for CSV output."""
    cc = counting_curve(census, grid, S.d)
    if simple is None:
        simple = census if census.mode == "simple-exact" else enumerate_simple(S, max(grid))
    rows = []
    for L, N, T in cc.rows():
        row = {"L": L, "N": N, "total_length": T, "ratio": math.nan,
               "ball_estimate": math.nan, "C_estimate": math.nan}
        if N > 0:
            row["ratio"] = T / (L * N)
        count = weighted_count(simple.lengths, L)
        if count > 0:
            tb = ThurstonBallEstimate(L, count, count / L ** S.d, S.d)
            row["ball_estimate"] = tb.estimate
            row["C_estimate"] = estimate_C(cc, tb, L)
        rows.append(row)
    return rows


STATS_COLUMNS = ("L", "N", "total_length", "ratio", "ball_estimate", "C_estimate")


def stats_csv(rows: Sequence[dict]) -> str:
    lines = [",".join(STATS_COLUMNS)]
    for r in rows:
        lines.append(",".join(f"{r[k]:.17g}" if isinstance(r[k], float) else str(r[k])
                              for k in STATS_COLUMNS))
    return "\n".join(lines) + "\n"
