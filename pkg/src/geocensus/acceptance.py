"""Acceptance criteria at desk scale (modular torus, L <= 45).

Each criterion returns a ``CriterionResult``; ``run_all`` writes the supporting
artifacts through an ``ArtifactWriter`` when one is given.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass

from .compare import DISTINCT, ISOMETRIC, compare
from .crossings import GENERIC_BASEPOINT, geometric_self_intersection
from .domain import DirichletDomain
from .orbits import enumerate_all_primitive, enumerate_simple, enumerate_type
from .phase import Binning, build_histogram, tv_distance
from .stats import (
    counting_curve,
    default_grid,
    estimate_C,
    fit_exponent,
    lemma4_ratio,
    stats_csv,
    stats_table,
    thurston_ball,
    weighted_count,
)
from .surface import build_surface, modular_torus
from .words import (
    CurveClass,
    christoffel_word,
    curve_length,
    is_peripheral,
    iter_classes,
    self_intersection,
)

# pinned tolerances
SLOPE_RANGE = (1.85, 2.15)
MIN_R2 = 0.99
FIT_WINDOW = (15.0, 45.0)
RUNTIME_LIMIT = 30.0
RATIO_TARGET = 2.0 / 3.0
RATIO_TOL = 0.05
C_TARGET = 6.0 / math.pi ** 2
C_TOL = 0.05
C_DRIFT = 0.10
LATTICE_MAX_L = 25.0
TV_LS = (15.0, 25.0, 35.0, 45.0)
TV_SLACK = 0.01
TV_MAX = 0.2
ORACLE_WORD_LENGTH = 8
ORACLE_LS = (2.0, 10.0, 20.0, 30.0)
ORACLE_MARGIN = 0.5
OCCUPANCY_L = 30.0
OCCUPANCY_FACTOR = 2.0
RIGIDITY_L = 30.0
RIGIDITY_TOL = 0.005
STRADDLE = (0.99, 1.01)
DETERMINISM_WORKERS = (1, 8)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} [{self.number}] {self.name}: {self.detail}"


def lattice_weighted_count(S, L: float) -> int:
    """Brute-force count of pairs (k, slope) with k·ℓ(slope) <= L.

    A simple curve of slope (p, q) crosses b at least |p| times and a at least q
    times, and each crossing passes through a full collar of half-width w with
    sinh(w) sinh(ℓ/2) = 1, so |p|, q <= L / (2w). All slopes in that box are
    evaluated directly from their Christoffel words.
    """
    w = min(math.asinh(1.0 / math.sinh(curve_length(S, CurveClass.of(g)) / 2.0)) for g in "ab")
    bound = int(math.floor(L / (2.0 * w))) + 1
    total = 0
    for q in range(0, bound + 1):
        for p in range(-bound, bound + 1):
            if math.gcd(abs(p), q) != 1 or (q == 0 and p != 1):
                continue
            ell = curve_length(S, CurveClass.of(christoffel_word(p, q)))
            total += int(math.floor((L + 1e-9) / ell))
    return total


class Verifier:
    def __init__(self, type_seed: str = "aabAB", bowen_L: float = 8.0, delta: float = 0.05,
                 bins=(12, 12, 16), margin: float = 0.5, workers: int = 1,
                 writer=None, plot: bool = False, log=print):
        self.S = modular_torus()
        self.T = build_surface(3.0, 4.0)
        self.type_seed = type_seed
        self.bowen_L = bowen_L
        self.delta = delta
        self.binning = Binning(*bins).resolved(self.S)
        self.margin = margin
        self.workers = workers
        self.writer = writer
        self.plot = plot
        self.log = log
        self.histograms = []
        self._cache = {}

    # ------------------------------------------------------------ helpers
    def simple(self, L):
        key = ("simple", L)
        if key not in self._cache:
            self._cache[key] = enumerate_simple(self.S, L)
        return self._cache[key]

    def typed(self, L):
        key = ("type", L)
        if key not in self._cache:
            self._cache[key] = enumerate_type(self.S, self.type_seed, L, self.margin)
        return self._cache[key]

    def histogram(self, census):
        H = build_histogram(self.S, census, self.delta, self.binning, self.workers)
        self.histograms.append(H)
        return H

    def _emit_csv(self, name, body):
        if self.writer is not None:
            self.writer.csv(name, body)

    def _emit_json(self, name, data):
        if self.writer is not None:
            self.writer.json(name, data)

    def _emit_figure(self, name, render):
        if self.writer is not None and self.plot:
            self.writer.figure(name, render)

    # ------------------------------------------------------------ criteria
    def c1_exponent(self):
        t0 = time.perf_counter()
        census = self.simple(45.0)
        cc = counting_curve(census, default_grid(45.0), self.S.d)
        slope, r2 = fit_exponent(cc, FIT_WINDOW)
        elapsed = time.perf_counter() - t0
        rows = stats_table(self.S, census, default_grid(45.0))
        self._emit_csv("census_simple_L45.csv", census.to_csv())
        self._emit_csv("stats_simple_L45.csv", stats_csv(rows))
        if self.plot:
            from .plots import counting_figure

            self._emit_figure("stats_simple_L45.png",
                              lambda p, s: counting_figure(rows, FIT_WINDOW, slope, p, s))
        ok = SLOPE_RANGE[0] <= slope <= SLOPE_RANGE[1] and r2 >= MIN_R2 and elapsed < RUNTIME_LIMIT
        self._summary["c1"] = {"slope": slope, "r2": r2}
        return CriterionResult(1, "counting exponent", ok,
                               f"slope={slope:.4f} in {list(SLOPE_RANGE)}, r2={r2:.4f} >= {MIN_R2}, "
                               f"N(45)={len(census)}, runtime {elapsed:.2f}s < {RUNTIME_LIMIT}s")

    def c2_lemma4(self):
        out = {}
        for name, census in (("simple", self.simple(45.0)), (self.type_seed, self.typed(45.0))):
            cc = counting_curve(census, [45.0], self.S.d)
            out[name] = lemma4_ratio(cc, 45.0)
        self._emit_csv(f"census_type_{self.type_seed}_L45.csv", self.typed(45.0).to_csv())
        ok = all(abs(v - RATIO_TARGET) <= RATIO_TOL for v in out.values())
        self._summary["c2"] = out
        detail = ", ".join(f"{k}={v:.4f}" for k, v in out.items())
        return CriterionResult(2, "total-length ratio", ok,
                               f"{detail}; target {RATIO_TARGET:.4f} ± {RATIO_TOL}")

    def c3_thurston(self):
        census = self.simple(45.0)
        cc = counting_curve(census, default_grid(45.0), self.S.d)
        C = {L: estimate_C(cc, thurston_ball(self.S, L, census), L) for L in (30.0, 40.0, 45.0)}
        drift = abs(C[45.0] - C[30.0]) / C[30.0]
        mismatches = []
        for L in default_grid(LATTICE_MAX_L):
            fast = weighted_count(census.lengths, L)
            brute = lattice_weighted_count(self.S, L)
            if fast != brute:
                mismatches.append((L, fast, brute))
        ok = abs(C[40.0] - C_TARGET) <= C_TOL and drift < C_DRIFT and not mismatches
        self._summary["c3"] = {"C30": C[30.0], "C40": C[40.0], "C45": C[45.0], "drift": drift,
                               "lattice_mismatches": len(mismatches)}
        return CriterionResult(3, "Thurston-ball consistency", ok,
                               f"C(40)={C[40.0]:.4f} vs 6/π²={C_TARGET:.4f} ± {C_TOL}, "
                               f"drift 30→45 {drift:.2%} < {C_DRIFT:.0%}, lattice oracle mismatches "
                               f"for L <= {LATTICE_MAX_L:g}: {len(mismatches)}")

    def c4_equidistribution(self):
        tvs = []
        for L in TV_LS:
            Hs = self.histogram(self.simple(L))
            Ht = self.histogram(self.typed(L))
            tvs.append(tv_distance(Hs, Ht))
            if L == TV_LS[-1]:
                tag = f"L{L:g}"
                for name, H in (("simple", Hs), (self.type_seed, Ht)):
                    self._emit_csv(f"hist_{name}_{tag}.csv", H.to_csv())
                    self._emit_json(f"hist_{name}_{tag}.json", _json(H.sidecar()))
                    self._emit_csv(f"hist_{name}_{tag}_theta.csv", H.theta_marginal_csv())
                    self._emit_csv(f"hist_{name}_{tag}_position.csv", H.position_marginal_csv())
                    if self.plot:
                        from .plots import histogram_figure

                        self._emit_figure(f"hist_{name}_{tag}.png",
                                          lambda p, s, H=H, n=name: histogram_figure(H, p, s, n))
        self._emit_csv("tv_trend.csv", "L,tv\n" + "".join(f"{L:g},{v:.17g}\n" for L, v in zip(TV_LS, tvs)))
        if self.plot:
            from .plots import tv_figure

            self._emit_figure("tv_trend.png", lambda p, s: tv_figure(TV_LS, tvs, p, s, TV_MAX))
        trend = all(b <= a + TV_SLACK for a, b in zip(tvs, tvs[1:]))
        ok = trend and tvs[-1] < TV_MAX
        self._summary["c4"] = dict(zip((f"L{L:g}" for L in TV_LS), tvs))
        return CriterionResult(4, "equidistribution proxy", ok,
                               "tv " + ", ".join(f"L={L:g}:{v:.4f}" for L, v in zip(TV_LS, tvs))
                               + f"; non-increasing (slack {TV_SLACK}) and final < {TV_MAX}")

    def c5_flip(self):
        n = len(self.histograms)
        bad = sum(not H.is_flip_symmetric() for H in self.histograms)
        return CriterionResult(5, "flip invariance", n > 0 and bad == 0,
                               f"{n - bad}/{n} histograms exactly flip-symmetric")

    def c6_type_invariant(self):
        checked = 0
        wrong = 0
        for census in (self.typed(45.0), enumerate_type(self.S, "a", 30.0, self.margin)):
            s0 = self_intersection(census.seed)
            for e in census.entries:
                checked += 1
                wrong += e.self_intersection != s0 or self_intersection(e.curve) != s0
        dom = DirichletDomain.build(self.S, GENERIC_BASEPOINT)
        compared = 0
        disagree = []
        for c in iter_classes(ORACLE_WORD_LENGTH):
            if not c.is_primitive or is_peripheral(self.S, c):
                continue
            compared += 1
            if geometric_self_intersection(self.S, c, dom) != self_intersection(c):
                disagree.append(str(c))
        ok = wrong == 0 and not disagree
        self._summary["c6"] = {"orbit_entries": checked, "oracle_classes": compared,
                               "disagreements": disagree}
        return CriterionResult(6, "type invariant", ok,
                               f"{checked} orbit entries, {wrong} off-type; geometric oracle on "
                               f"{compared} primitive classes of word length <= {ORACLE_WORD_LENGTH}: "
                               f"{len(disagree)} disagreements")

    def c7_oracle(self):
        diffs = {}
        for L in ORACLE_LS:
            a = enumerate_type(self.S, "a", L, ORACLE_MARGIN).curve_set()
            b = self.simple(L).curve_set()
            diffs[L] = len(a ^ b)
        ok = all(v == 0 for v in diffs.values())
        return CriterionResult(7, "orbit/simple oracle equivalence", ok,
                               "symmetric differences " + ", ".join(f"L={L:g}:{v}" for L, v in diffs.items())
                               + f" at margin {ORACLE_MARGIN}")

    def c8_occupancy(self):
        Hm = self.histogram(self.simple(OCCUPANCY_L))
        bowen = enumerate_all_primitive(self.S, self.bowen_L)
        Hb = self.histogram(bowen)
        om, ob = Hm.occupied(), Hb.occupied()
        tag = f"L{self.bowen_L:g}"
        self._emit_csv(f"census_bowen_{tag}.csv", bowen.to_csv())
        self._emit_csv(f"hist_bowen_{tag}.csv", Hb.to_csv())
        self._emit_json(f"hist_bowen_{tag}.json", _json(Hb.sidecar()))
        if self.plot:
            from .plots import histogram_figure

            self._emit_figure(f"hist_bowen_{tag}.png",
                              lambda p, s: histogram_figure(Hb, p, s, f"primitive, L={self.bowen_L:g}"))
        # b_L grows with L, so occupancy at bowen_L <= 30 bounds occupancy at 30 from below
        ok = self.bowen_L <= OCCUPANCY_L and ob >= OCCUPANCY_FACTOR * om
        self._summary["c8"] = {"simple_L30": om, f"bowen_{tag}": ob, "bowen_curves": len(bowen)}
        return CriterionResult(8, "sparse-support contrast", ok,
                               f"b_L occupied cells >= {ob} (primitive census at L={self.bowen_L:g}, "
                               f"{len(bowen)} curves, lower bound for L={OCCUPANCY_L:g}) vs simple m_L "
                               f"{om}; need factor {OCCUPANCY_FACTOR}")

    def c9_rigidity(self):
        census = self.simple(RIGIDITY_L)
        same = compare(self.S, self.S, census, RIGIDITY_TOL)
        other = compare(self.S, self.T, census, RIGIDITY_TOL)
        self._emit_json("compare_modular_3_4.json", _json(other.to_json()))
        self._emit_csv("compare_modular_3_4.csv", other.rows_csv())
        if self.plot:
            from .plots import compare_figure

            self._emit_figure("compare_modular_3_4.png", lambda p, s: compare_figure(other, p, s))
        ok = (same.verdict == ISOMETRIC and other.verdict == DISTINCT
              and other.ratio_sup > STRADDLE[1] and other.ratio_inf < STRADDLE[0])
        return CriterionResult(9, "rigidity", ok,
                               f"self: {same.verdict}; (3,4): {other.verdict} with ratios "
                               f"[{other.ratio_inf:.4f}, {other.ratio_sup:.4f}] straddling "
                               f"({STRADDLE[0]}, {STRADDLE[1]})")

    def c10_determinism(self):
        census = self.simple(RIGIDITY_L)
        texts = [build_histogram(self.S, census, self.delta, self.binning, w).to_csv()
                 for w in DETERMINISM_WORKERS]
        ok = all(t == texts[0] for t in texts)
        return CriterionResult(10, "determinism", ok,
                               f"histogram bytes identical across workers {list(DETERMINISM_WORKERS)}: {ok}")

    CRITERIA = ("c1_exponent", "c2_lemma4", "c3_thurston", "c4_equidistribution", "c5_flip",
                "c6_type_invariant", "c7_oracle", "c8_occupancy", "c9_rigidity", "c10_determinism")

    def run_all(self) -> list[CriterionResult]:
        self._summary = {}
        results = []
        for name in self.CRITERIA:
            t0 = time.perf_counter()
            r = getattr(self, name)()
            self.log(f"{r.line()}  ({time.perf_counter() - t0:.1f}s)")
            results.append(r)
        self._emit_json("verify.json", {
            "criteria": [{"number": r.number, "name": r.name, "passed": r.passed} for r in results],
            "values": self._summary,
            "type_seed": self.type_seed,
            "bowen_L": self.bowen_L,
        })
        return results


def _json(text: str) -> dict:
    return json.loads(text)
