"""Comparing two marked structures through their length spectra on a shared census."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .errors import NotHyperbolic, PeripheralOnTarget
from .hyperbolic import length_from_trace
from .orbits import Census
from .words import CurveClass

DEFAULT_TOL = 0.005
ISOMETRIC = "isometric-within-tol"
DISTINCT = "distinct"


@dataclass(frozen=True)
class CompareRow:
    curve: CurveClass
    length_S: float
    length_T: float
    ratio: float
    xi: float


@dataclass
class CompareReport:
    labels: tuple[str, str]
    rows: list[CompareRow]
    ratio_inf: float
    ratio_sup: float
    verdict: str
    tol: float

    def to_json(self, extra: dict | None = None) -> str:
        data = {
            "labels": list(self.labels),
            "ratio_inf": self.ratio_inf,
            "ratio_sup": self.ratio_sup,
            "verdict": self.verdict,
            "tol": self.tol,
            "curves": len(self.rows),
        }
        if extra:
            data.update(extra)
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    def rows_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["word", "length_S", "length_T", "ratio", "xi"])
        for r in self.rows:
            w.writerow([str(r.curve), f"{r.length_S:.17g}", f"{r.length_T:.17g}",
                        f"{r.ratio:.17g}", f"{r.xi:.17g}"])
        return buf.getvalue()


def _length_on(S, c: CurveClass, target: bool) -> float:
    try:
        return length_from_trace(S.trace_of(c.letters))
    except NotHyperbolic:
        if target:
            raise PeripheralOnTarget(f"{c} is parabolic on {S.label}") from None
        raise


def rn_weight(S, T, c: CurveClass | str) -> float:
    """(ℓ_T(c)/ℓ_S(c))^(d+1), the same word evaluated on both structures."""
    if not isinstance(c, CurveClass):
        c = CurveClass.of(c)
    ratio = length_from_trace(T.trace_of(c.letters)) / length_from_trace(S.trace_of(c.letters))
    return ratio ** (S.d + 1)


def _rows(S, T, census: Census) -> list[CompareRow]:
    rows = []
    for e in census.entries:
        ls = _length_on(S, e.curve, target=False)
        lt = _length_on(T, e.curve, target=True)
        r = lt / ls
        rows.append(CompareRow(e.curve, ls, lt, r, r ** (S.d + 1)))
    return rows


def length_ratio_extremes(S, T, census: Census) -> tuple[float, float]:
    rows = _rows(S, T, census)
    if not rows:
        raise ValueError("census is empty")
    ratios = [r.ratio for r in rows]
    return min(ratios), max(ratios)


def compare(S, T, census: Census, tol: float = DEFAULT_TOL) -> CompareReport:
    rows = _rows(S, T, census)
    if not rows:
        raise ValueError("census is empty")
    lo = min(r.ratio for r in rows)
    hi = max(r.ratio for r in rows)
    verdict = ISOMETRIC if (hi <= 1.0 + tol and lo >= 1.0 - tol) else DISTINCT
    return CompareReport((S.label, T.label), rows, lo, hi, verdict, tol)


def isometry_test(S, T, census: Census, tol: float = DEFAULT_TOL) -> str:
    """Verdict on whether the marked length ratios are identically 1 within ``tol``.

    ``tol >= 1`` makes the lower bound vacuous, so the verdict then only bounds the
    ratios from above.
    """
    return compare(S, T, census, tol).verdict
