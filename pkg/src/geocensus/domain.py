"""Dirichlet polygons for punctured tori and reduction of points into them.

The polygon is computed in the Klein chart centred at the basepoint, where
bisectors are straight lines.  It is certified by Gauss-Bonnet: a once-punctured
torus has area 2π, and an incomplete set of candidate bisectors leaves a polygon
that is either unbounded or strictly larger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonTermination
from .hyperbolic import Moebius, UpperHalfPoint, compose, moving_to_i, to_hyperboloid
from .words import Word, inverse, reduced_words, to_string

AREA_TOL = 1e-6
IDEAL_TOL = 1e-8
MERGE_TOL = 1e-9
MAX_STEPS = 10_000


def _clip(poly, normal, offset, label):
    """Clip a convex polygon (list of (vertex, label of outgoing edge)) by n·k <= c."""
    out = []
    m = len(poly)
    eps = 1e-14
    for idx in range(m):
        P, lab = poly[idx]
        Q, _ = poly[(idx + 1) % m]
        fp = normal[0] * P[0] + normal[1] * P[1] - offset
        fq = normal[0] * Q[0] + normal[1] * Q[1] - offset
        p_in, q_in = fp <= eps, fq <= eps
        if p_in:
            out.append((P, lab))
            if not q_in:
                t = fp / (fp - fq)
                out.append(((P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1])), label))
        elif q_in:
            t = fp / (fp - fq)
            out.append(((P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1])), lab))
    return out


def _minkowski(x, y):
    return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2]


def _interior_angle(P, R1, R2) -> float:
    """Hyperbolic angle at the finite Klein point P between directions to R1 and R2."""

    def lift(k):
        r2 = k[0] ** 2 + k[1] ** 2
        if abs(1.0 - math.sqrt(r2)) <= IDEAL_TOL:
            return (1.0, k[0], k[1])
        s = 1.0 / math.sqrt(1.0 - r2)
        return (s, k[0] * s, k[1] * s)

    p = lift(P)
    tangents = []
    for R in (R1, R2):
        r = lift(R)
        c = _minkowski(r, p)
        tangents.append(tuple(r[i] + c * p[i] for i in range(3)))
    t1, t2 = tangents
    cosang = _minkowski(t1, t2) / math.sqrt(_minkowski(t1, t1) * _minkowski(t2, t2))
    return math.acos(max(-1.0, min(1.0, cosang)))


@dataclass(frozen=True)
class Side:
    word: Word
    element: Moebius  # the group element g; the side lies on the bisector of o and g·o


@dataclass
class DirichletDomain:
    basepoint: complex
    vertices: list  # Klein coordinates around the basepoint chart
    ideal: list
    sides: list  # Side for the edge starting at each vertex
    area: float
    candidate_length: int
    chart: Moebius  # sends basepoint to i

    @classmethod
    def build(cls, S, basepoint: complex = 1j, max_candidate_length: int = 6) -> "DirichletDomain":
        T = moving_to_i(basepoint)
        last_error = None
        for n in range(2, max_candidate_length + 1):
            try:
                return cls._build(S, basepoint, T, n)
            except DomainError as exc:
                last_error = exc
        raise DomainError(f"Dirichlet polygon not certified with words up to length "
                          f"{max_candidate_length}: {last_error}")

    @classmethod
    def _build(cls, S, basepoint, T, n):
        elements = {}
        poly = [((-2.0, -2.0), None), ((2.0, -2.0), None), ((2.0, 2.0), None), ((-2.0, 2.0), None)]
        for w in reduced_words(n):
            g = S.evaluate(w)
            q = to_hyperboloid(T(g(basepoint)))
            elements[w] = g
            poly = _clip(poly, (q[1], q[2]), q[0] - 1.0, w)
        if any(lab is None for _, lab in poly):
            raise DomainError(f"unbounded polygon with candidate length {n}")
        if max(math.hypot(*v) for v, _ in poly) > 1.0 + IDEAL_TOL:
            raise DomainError(f"polygon leaves the disk with candidate length {n}")
        # merge vertices produced by several bisectors through one ideal point
        merged = list(poly)
        changed = True
        while changed and len(merged) > 2:
            changed = False
            for idx in range(len(merged)):
                P, _ = merged[idx]
                Q, qlab = merged[(idx + 1) % len(merged)]
                if math.hypot(P[0] - Q[0], P[1] - Q[1]) < MERGE_TOL:
                    merged[idx] = (P, qlab)
                    del merged[(idx + 1) % len(merged)]
                    changed = True
                    break
        verts = [v for v, _ in merged]
        labels = [lab for _, lab in merged]
        ideal = [abs(1.0 - math.hypot(*v)) <= IDEAL_TOL for v in verts]
        m = len(verts)
        angle_sum = 0.0
        for idx in range(m):
            if ideal[idx]:
                continue
            angle_sum += _interior_angle(verts[idx], verts[idx - 1], verts[(idx + 1) % m])
        area = (m - 2) * math.pi - angle_sum
        if abs(area - 2.0 * math.pi) > AREA_TOL:
            raise DomainError(f"area {area!r} != 2π with candidate length {n}")
        words = set(labels)
        if any(inverse(w) not in words for w in words):
            raise DomainError("side labels are not closed under inversion")
        sides = [Side(w, elements[w]) for w in labels]
        return cls(basepoint, verts, ideal, sides, area, n, T)

    @property
    def side_pairings(self) -> list[Side]:
        seen = {}
        for s in self.sides:
            seen.setdefault(s.word, s)
        return [seen[w] for w in sorted(seen)]

    def klein_bbox(self) -> tuple[float, float, float, float]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return (min(xs), max(xs), min(ys), max(ys))

    def contains(self, z: complex, tol: float = 1e-12) -> bool:
        o = self.basepoint
        c0 = 1.0 + abs(z - o) ** 2 / (2.0 * z.imag * o.imag)
        for s in self.side_pairings:
            w = s.element(o)
            c = 1.0 + abs(z - w) ** 2 / (2.0 * z.imag * w.imag)
            if c < c0 * (1.0 - tol):
                return False
        return True

    def describe(self) -> str:
        parts = [f"{len(self.vertices)} vertices ({sum(self.ideal)} ideal), area {self.area:.12f}"]
        parts.append("side pairings: " + " ".join(to_string(s.word) for s in self.side_pairings))
        return "; ".join(parts)


def _moves(S, domain: DirichletDomain) -> list[tuple[Word, Moebius]]:
    """Descent moves: inverses of side pairings plus the generators, deduplicated."""
    out = {}
    for s in domain.side_pairings:
        w = inverse(s.word)
        out[w] = S.evaluate(w)
    for x in range(4):
        out[(x,)] = S.evaluate((x,))
    return [(w, out[w]) for w in sorted(out)]


def reduce_to_domain(S, p: UpperHalfPoint | complex, domain: DirichletDomain | None = None
                     ) -> tuple[UpperHalfPoint, Moebius]:
    """Greedy descent of ``p`` towards the basepoint; returns (g·p, g)."""
    if domain is None:
        domain = S.domain
    z = p.z if isinstance(p, UpperHalfPoint) else complex(p)
    o = domain.basepoint
    moves = _moves(S, domain)
    g = Moebius.identity()
    cur = 1.0 + abs(z - o) ** 2 / (2.0 * z.imag * o.imag)
    for _ in range(MAX_STEPS):
        best = None
        for _, m in moves:
            w = m(z)
            c = 1.0 + abs(w - o) ** 2 / (2.0 * w.imag * o.imag)
            if c < cur * (1.0 - 1e-13) and (best is None or c < best[0]):
                best = (c, w, m)
        if best is None:
            return UpperHalfPoint.from_complex(z), g
        cur, z, m = best
        g = compose(m, g)
    raise NonTermination(f"reduction did not settle within {MAX_STEPS} steps")


def reduce_many(S, z: np.ndarray, domain: DirichletDomain | None = None):
    """Vectorized descent for an array of points.

    Returns the reduced points and the accumulated angle change ``arg g'(z)`` of each
    point's reducing element, which rotates tangent directions.
    """
    if domain is None:
        domain = S.domain
    o = domain.basepoint
    moves = _moves(S, domain)
    mats = np.array([m.entries() for _, m in moves])
    z = np.asarray(z, dtype=complex).copy()
    rot = np.zeros(z.shape)
    active = np.arange(z.size)

    def coshd(w):
        return 1.0 + np.abs(w - o) ** 2 / (2.0 * w.imag * o.imag)

    cur = coshd(z)
    for _ in range(MAX_STEPS):
        if active.size == 0:
            return z, rot
        za = z[active]
        den = mats[:, 2, None] * za[None, :] + mats[:, 3, None]
        cand = (mats[:, 0, None] * za[None, :] + mats[:, 1, None]) / den
        cvals = coshd(cand)
        best = np.argmin(cvals, axis=0)
        cols = np.arange(active.size)
        bestc = cvals[best, cols]
        improve = bestc < cur[active] * (1.0 - 1e-13)
        idx = active[improve]
        z[idx] = cand[best[improve], cols[improve]]
        rot[idx] -= 2.0 * np.angle(den[best[improve], cols[improve]])
        cur[idx] = bestc[improve]
        active = idx
    raise NonTermination(f"reduction did not settle within {MAX_STEPS} steps")
