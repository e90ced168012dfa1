"""Geometric self-intersection count, independent of the word combinatorics.

The closed geodesic is cut into the chords it traces through a Dirichlet polygon.
In the Klein chart centred at the polygon's basepoint these chords are straight
segments, and each transverse self-crossing of the geodesic is one crossing pair.
"""

from __future__ import annotations

import math

from .domain import DirichletDomain, reduce_to_domain
from .hyperbolic import Moebius, apply_boundary, axis, axis_frame, boundary_to_klein, compose
from .words import CurveClass

GENERIC_BASEPOINT = complex(0.1234, 1.1)
MAX_CHORDS = 100_000


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _chord(dom: DirichletDomain, M: Moebius):
    """Entry point, exit point and exit side index of the axis of M inside the polygon."""
    C = dom.chart
    p, q = axis(M)
    E1 = boundary_to_klein(apply_boundary(C, p))
    E2 = boundary_to_klein(apply_boundary(C, q))
    D = (E2[0] - E1[0], E2[1] - E1[1])
    t_in, t_out, side_out = 0.0, 1.0, None
    V = dom.vertices
    n = len(V)
    for i in range(n):
        A, B = V[i], V[(i + 1) % n]
        # inward normal: the origin (basepoint) is inside
        nx, ny = -(B[1] - A[1]), B[0] - A[0]
        if nx * (0.0 - A[0]) + ny * (0.0 - A[1]) < 0:
            nx, ny = -nx, -ny
        f0 = nx * (E1[0] - A[0]) + ny * (E1[1] - A[1])
        fd = nx * D[0] + ny * D[1]
        if fd == 0.0:
            if f0 < 0:
                return None
            continue
        t = -f0 / fd
        if fd > 0:
            t_in = max(t_in, t)
        elif t < t_out:
            t_out, side_out = t, i
    if t_in >= t_out or side_out is None:
        return None
    P = (E1[0] + t_in * D[0], E1[1] + t_in * D[1])
    Q = (E1[0] + t_out * D[0], E1[1] + t_out * D[1])
    return P, Q, side_out


def develop(S, c: CurveClass | str, domain: DirichletDomain | None = None):
    """Chords (P, Q) of the closed geodesic of ``c`` through the polygon, one period."""
    if not isinstance(c, CurveClass):
        c = CurveClass.of(c)
    dom = domain or DirichletDomain.build(S, GENERIC_BASEPOINT)
    M = S.evaluate(c.letters)
    # conjugate so the axis passes through the polygon
    T = axis_frame(compose(compose(dom.chart, M), dom.chart.inverse()))
    foot = compose(dom.chart.inverse(), T)(1j)
    _, g = reduce_to_domain(S, foot, dom)
    M0 = compose(compose(g, M), g.inverse())
    chords = []
    cur = M0
    for _ in range(MAX_CHORDS):
        ch = _chord(dom, cur)
        if ch is None:
            raise ArithmeticError(f"axis of {c} missed the polygon")
        P, Q, side = ch
        chords.append((P, Q))
        h = dom.sides[side].element
        cur = compose(compose(h.inverse(), cur), h)
        if _same_axis(cur, M0):
            return chords
    raise ArithmeticError(f"development of {c} did not close after {MAX_CHORDS} chords")


def _same_axis(M1: Moebius, M2: Moebius, tol: float = 1e-7) -> bool:
    scale = max(1.0, max(abs(v) for v in M2.entries()))
    return M1.is_close(M2, tol * scale)


def _segments_cross(s1, s2, eps: float = 1e-12) -> bool:
    a, b = s1
    c, d = s2
    d1 = _cross(c, d, a)
    d2 = _cross(c, d, b)
    d3 = _cross(a, b, c)
    d4 = _cross(a, b, d)
    return ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and \
           ((d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps))


def geometric_self_intersection(S, c: CurveClass | str, domain: DirichletDomain | None = None) -> int:
    """Transverse self-crossings of the closed geodesic of a primitive class."""
    if not isinstance(c, CurveClass):
        c = CurveClass.of(c)
    if not c.is_primitive:
        raise ValueError("the chord count applies to primitive classes")
    chords = develop(S, c, domain)
    count = 0
    for i in range(len(chords)):
        for j in range(i + 1, len(chords)):
            if _segments_cross(chords[i], chords[j]):
                count += 1
    return count


def chord_length_total(chords) -> float:
    """Hyperbolic length of a list of Klein chords (checks a development covers one period)."""
    total = 0.0
    for P, Q in chords:
        p = (1.0, P[0], P[1])
        q = (1.0, Q[0], Q[1])
        num = p[0] * q[0] - p[1] * q[1] - p[2] * q[2]
        den = math.sqrt((p[0] ** 2 - p[1] ** 2 - p[2] ** 2) * (q[0] ** 2 - q[1] ** 2 - q[2] ** 2))
        total += math.acosh(max(1.0, num / den))
    return total
