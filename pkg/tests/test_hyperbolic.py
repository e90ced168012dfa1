import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from geocensus import (
    DegenerateTrace,
    Moebius,
    NonTermination,
    NoRealSolution,
    NotHyperbolic,
    UpperHalfPoint,
    axis,
    axis_frame,
    build_surface,
    compose,
    modular_torus,
    reduce_many,
    reduce_to_domain,
    translation_length,
)
from geocensus.hyperbolic import apply_boundary, boundary_to_klein, distance, length_from_trace
from geocensus.surface import SurfaceStructure, surface_by_name
from geocensus.words import parse, reduced_words

coord = st.floats(-3.0, 3.0, allow_nan=False)


@st.composite
def sl2(draw):
    """Random unit-determinant matrices with bounded entries."""
    a = draw(st.floats(0.3, 3.0))
    b = draw(coord)
    c = draw(coord)
    return Moebius.from_entries(a, b, c, (1.0 + b * c) / a)


@st.composite
def hyperbolic(draw):
    m = draw(sl2())
    if abs(m.trace) <= 2.05:
        m = compose(m, Moebius.from_entries(3.0, 0.0, 0.0, 1.0 / 3.0))
    if abs(m.trace) <= 2.05:
        m = Moebius.from_entries(2.5, 1.0, 1.0, 0.8)
    return m


def as_np(m):
    return np.array([[m.a, m.b], [m.c, m.d]])


# ---------------------------------------------------------------- Moebius


def test_compose_identity():
    m = Moebius.from_entries(2.0, 1.0, 3.0, 2.0)
    assert compose(Moebius.identity(), m) == m


def test_compose_matches_matrix_product():
    m = compose(Moebius.from_entries(1, 1, 1, 2), Moebius.from_entries(1, -1, -1, 2))
    assert m.entries() == (0.0, 1.0, -1.0, 3.0)
    oracle = np.array([[1, 1], [1, 2]]) @ np.array([[1, -1], [-1, 2]])
    assert np.allclose(as_np(m), oracle) or np.allclose(as_np(m), -oracle)


@given(sl2())
def test_compose_inverse_is_identity(m):
    assert compose(m, m.inverse()).is_close(Moebius.identity(), 1e-9 * max(1.0, m.a * m.a + m.b * m.b))


@given(sl2(), sl2())
def test_compose_against_numpy(m1, m2):
    prod = as_np(m1) @ as_np(m2)
    got = as_np(compose(m1, m2))
    assert np.allclose(got, prod, atol=1e-9) or np.allclose(got, -prod, atol=1e-9)


def test_canonical_sign():
    m = Moebius.from_entries(-2.0, -1.0, -1.0, -1.0)
    assert m.a > 0
    m = Moebius.from_entries(0.0, -1.0, 1.0, 5.0)
    assert (m.a, m.b) == (0.0, 1.0)


def test_det_renormalized_on_construction():
    m = Moebius.from_entries(2.0, 0.0, 0.0, 2.0)
    assert abs(m.det - 1.0) <= 1e-12
    with pytest.raises(ValueError):
        Moebius.from_entries(0.0, 1.0, 1.0, 0.0)


def test_det_stability_random_compositions():
    rng = random.Random(7)
    m = Moebius.identity()
    for _ in range(100_000):
        t = rng.uniform(0, 2 * math.pi)
        s = rng.uniform(0.9, 1.1)
        r = Moebius.from_entries(math.cos(t) * s, -math.sin(t) * s, math.sin(t) / s, math.cos(t) / s)
        m = compose(m, r)
        if max(abs(v) for v in m.entries()) > 1e3:
            assert abs(m.det - 1.0) <= 1e-6
            m = Moebius.identity()  # keep entries bounded
    assert abs(m.det - 1.0) <= 1e-6


@given(sl2(), sl2())
def test_trace_conjugacy_invariance(g, m):
    conj = compose(compose(g, m), g.inverse())
    assert abs(abs(conj.trace) - abs(m.trace)) <= 1e-9 * max(1.0, *[abs(v) for v in g.entries()]) ** 4


def test_upper_half_point_requires_positive_v():
    with pytest.raises(ValueError):
        UpperHalfPoint(0.0, 0.0)
    assert UpperHalfPoint(1.0, 2.0).z == complex(1, 2)


# ---------------------------------------------------------------- lengths and axes


def test_translation_length_examples():
    m = Moebius.from_entries(3.0, 1.0, -1.0, 0.0)
    assert translation_length(m) == pytest.approx(2 * math.acosh(1.5), abs=1e-12)
    assert translation_length(m) == pytest.approx(1.924847, abs=1e-6)
    assert length_from_trace(-3.0) == length_from_trace(3.0)
    with pytest.raises(NotHyperbolic):
        translation_length(Moebius.from_entries(1.0, 1.0, 0.0, 1.0))
    with pytest.raises(NotHyperbolic):
        length_from_trace(2.0)


@given(hyperbolic())
def test_length_symmetric_under_inverse(m):
    assert translation_length(m) == translation_length(m.inverse())


def test_axis_diagonal():
    assert axis(Moebius.from_entries(2.0, 0.0, 0.0, 0.5)) == (0.0, math.inf)
    assert axis(Moebius.from_entries(0.5, 0.0, 0.0, 2.0)) == (math.inf, 0.0)


def test_axis_quadratic_oracle():
    p, q = axis(Moebius.from_entries(1, 1, 1, 2))
    roots = sorted([(-1 + math.sqrt(5)) / 2, (-1 - math.sqrt(5)) / 2])
    assert sorted([p, q]) == pytest.approx(roots, abs=1e-12)
    # attracting end listed second: |c q + d| > 1 means derivative 1/(cq+d)^2 < 1
    assert abs(1 * q + 2) > 1


@given(hyperbolic(), sl2())
def test_axis_equivariance(m, g):
    p, q = axis(m)
    p2, q2 = axis(compose(compose(g, m), g.inverse()))
    for x, y in ((apply_boundary(g, p), p2), (apply_boundary(g, q), q2)):
        if math.isinf(x) or math.isinf(y) or abs(x) > 1e6 or abs(y) > 1e6:
            continue
        assert x == pytest.approx(y, rel=1e-6, abs=1e-6)


@given(hyperbolic())
def test_axis_frame_places_foot_of_i(m):
    T = axis_frame(m)
    p, q = axis(m)
    assert abs(T.det - 1.0) < 1e-9
    # compare ends on the boundary circle, where ∞ is an ordinary point
    assert boundary_to_klein(apply_boundary(T, 0.0)) == pytest.approx(boundary_to_klein(p), abs=1e-7)
    assert boundary_to_klein(apply_boundary(T, math.inf)) == pytest.approx(boundary_to_klein(q), abs=1e-7)
    foot = T(1j)
    d0 = distance(foot, 1j)
    for t in (-0.3, -0.01, 0.01, 0.3):
        assert distance(T(1j * math.exp(t)), 1j) >= d0 - 1e-9
    # the axis frame conjugates m to a diagonal element
    diag = compose(compose(T.inverse(), m), T)
    assert abs(diag.b) < 1e-6 * max(1.0, abs(diag.a)) and abs(diag.c) < 1e-6 * max(1.0, abs(diag.a))
    assert diag.a > 1.0 or diag.d > 1.0


# ---------------------------------------------------------------- surfaces


def test_build_surface_modular():
    S = build_surface(3, 3)
    assert S.z == 6.0
    assert S.commutator_trace() == pytest.approx(-2.0, abs=1e-12)
    assert 9 + 9 + 36 == 54 == 3 * 3 * 6


def test_build_surface_3_4():
    S = build_surface(3, 4)
    assert S.z == pytest.approx(6 + math.sqrt(11), abs=1e-12)
    assert S.z ** 2 - 12 * S.z + 25 == pytest.approx(0.0, abs=1e-9)


def test_build_surface_no_real_solution():
    with pytest.raises(NoRealSolution):
        build_surface(2, 2)


def test_modular_torus_fixture():
    S = modular_torus()
    assert (S.x, S.y, S.z) == (3.0, 3.0, 6.0)
    assert S.d == 2
    assert S.trace_of(parse("a")) == pytest.approx(3.0, abs=1e-9)
    assert S.trace_of(parse("b")) == pytest.approx(3.0, abs=1e-9)
    assert S.trace_of(parse("ab")) == pytest.approx(6.0, abs=1e-9)


@given(st.floats(2.05, 25.0), st.floats(2.05, 25.0))
def test_surface_invariants(x, y):
    disc = x * x * y * y - 4 * (x * x + y * y)
    if disc < 0:
        with pytest.raises(NoRealSolution):
            build_surface(x, y)
        return
    S = build_surface(x, y)
    # whenever z is real, all three traces exceed 2, so DegenerateTrace never fires here
    assert min(abs(S.x), abs(S.y), abs(S.z)) > 2
    assert abs(S.commutator_trace() + 2.0) <= 1e-6
    for w, t in (("a", x), ("b", y), ("ab", S.z)):
        assert S.trace_of(parse(w)) == pytest.approx(t, abs=1e-9 * max(1.0, t))
    assert S.x ** 2 + S.y ** 2 + S.z ** 2 == pytest.approx(S.x * S.y * S.z, rel=1e-12)


def test_degenerate_trace_is_an_error_type():
    assert issubclass(DegenerateTrace, Exception)


def test_surface_json_roundtrip():
    S = build_surface(3, 4, label="t34")
    S2 = SurfaceStructure.from_json(S.to_json())
    assert (S2.label, S2.x, S2.y, S2.z) == (S.label, S.x, S.y, S.z)


def test_surface_by_name():
    assert surface_by_name("modular").label == "modular"
    assert surface_by_name("3,4").z == pytest.approx(6 + math.sqrt(11))
    with pytest.raises(ValueError):
        surface_by_name("nonsense")


# ---------------------------------------------------------------- Dirichlet domain and reduction


def test_domain_certified(S, T):
    for X in (S, T):
        dom = X.domain
        assert dom.area == pytest.approx(2 * math.pi, abs=1e-6)
        assert sum(dom.ideal) == 1  # one cusp


def test_reduce_fixed_point(S):
    p = UpperHalfPoint(0.05, 1.1)
    q, g = reduce_to_domain(S, p)
    assert q == p
    assert g.is_close(Moebius.identity(), 0.0)


def test_reduce_single_step(S):
    p = UpperHalfPoint(-0.2, 1.05)
    A = S.evaluate(parse("a"))
    q, g = reduce_to_domain(S, A(p.z))
    assert q.z == pytest.approx(p.z, abs=1e-9)
    assert g.is_close(A.inverse(), 1e-9)


words6 = st.lists(st.integers(0, 3), min_size=1, max_size=6)
base_points = st.tuples(st.floats(-0.4, 0.4), st.floats(0.7, 1.4))


@given(words6, base_points)
def test_reduce_idempotent_and_equivariant(S, w, uv):
    p = complex(*uv)
    g = S.evaluate(w)
    q1, h1 = reduce_to_domain(S, p)
    q2, h2 = reduce_to_domain(S, g(p))
    assert q2.z == pytest.approx(q1.z, abs=1e-7)
    q3, h3 = reduce_to_domain(S, q1)
    assert q3 == q1 and h3.is_close(Moebius.identity(), 0.0)
    assert compose(h2, g)(p) == pytest.approx(q2.z, abs=1e-7)


def test_reduce_deep_point_against_short_words(S):
    rng = random.Random(3)
    shorts = [S.evaluate(w) for w in reduced_words(3)]
    for _ in range(40):
        w = [rng.randrange(4) for _ in range(rng.randrange(5, 15))]
        z = S.evaluate(w)(complex(rng.uniform(-0.5, 0.5), rng.uniform(0.6, 1.5)))
        q, _ = reduce_to_domain(S, z)
        d0 = distance(q.z, 1j)
        assert all(d0 <= distance(m(q.z), 1j) + 1e-9 for m in shorts)
        assert S.domain.contains(q.z, 1e-9)


def test_reduce_many_matches_scalar(S):
    rng = random.Random(5)
    pts = []
    for _ in range(50):
        w = [rng.randrange(4) for _ in range(rng.randrange(0, 10))]
        pts.append(S.evaluate(w)(complex(rng.uniform(-0.5, 0.5), rng.uniform(0.6, 1.5))))
    zr, rot = reduce_many(S, np.array(pts))
    for z, r in zip(pts, zr):
        assert reduce_to_domain(S, z)[0].z == pytest.approx(r, abs=1e-9)


def test_reduce_many_rotation_is_derivative_angle(S):
    # the accumulated rotation is arg g'(z) of the reducing element
    z = S.evaluate(parse("abAbb"))(complex(0.1, 1.2))
    q, g = reduce_to_domain(S, z)
    _, rot = reduce_many(S, np.array([z]))
    deriv = 1.0 / (g.c * z + g.d) ** 2
    assert math.remainder(rot[0] - np.angle(deriv), 2 * math.pi) == pytest.approx(0.0, abs=1e-9)


def test_reduce_nontermination_guard(S, monkeypatch):
    import geocensus.domain as dom

    monkeypatch.setattr(dom, "MAX_STEPS", 1)
    z = S.evaluate(parse("abababab"))(1j)
    with pytest.raises(NonTermination):
        reduce_to_domain(S, z)
