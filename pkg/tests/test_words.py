import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geocensus import (
    CurveClass,
    NotHyperbolic,
    Slope,
    TrivialWord,
    canonicalize,
    curve_length,
    is_peripheral,
    self_intersection,
    simple_from_slope,
    unoriented,
)
from geocensus.crossings import (
    GENERIC_BASEPOINT,
    chord_length_total,
    develop,
    geometric_self_intersection,
)
from geocensus.domain import DirichletDomain
from geocensus.orbits import MOVES
from geocensus.words import (
    christoffel_word,
    cyclic_reduce,
    free_reduce,
    inverse,
    iter_classes,
    parse,
    to_string,
)

raw_words = st.lists(st.integers(0, 3), min_size=1, max_size=12)


def nonempty_cyclic(w):
    return len(cyclic_reduce(w)) > 0


# ---------------------------------------------------------------- parsing and canonical forms


def test_parse_forms():
    assert parse("aAbB") == (0, 1, 2, 3)
    assert parse("a b⁻¹") == (0, 3)
    assert parse([0, 2]) == (0, 2)
    with pytest.raises(ValueError):
        parse("ax")


def test_canonicalize_examples():
    assert str(canonicalize("a b b⁻¹ a")) == "aa"
    assert str(canonicalize("b a")) == "ab"
    with pytest.raises(TrivialWord):
        canonicalize("a⁻¹ b a a⁻¹ b⁻¹ a")


def test_unoriented_examples():
    assert CurveClass.of("a") == CurveClass.of("A")
    assert CurveClass.of("ab") == CurveClass.of("b⁻¹ a⁻¹")
    assert CurveClass.of("aab") == CurveClass.of("aba")


@given(raw_words)
def test_canonicalize_idempotent(w):
    if not nonempty_cyclic(w):
        return
    c = canonicalize(w)
    assert canonicalize(c.letters) == c
    assert c.letters == cyclic_reduce(c.letters)


@given(raw_words)
def test_unoriented_ignores_inversion_and_rotation(w):
    if not nonempty_cyclic(w):
        return
    c = canonicalize(w)
    assert unoriented(c) == unoriented(canonicalize(inverse(w)))
    r = cyclic_reduce(w)
    k = len(r) // 2
    assert unoriented(canonicalize(r[k:] + r[:k])) == unoriented(c)


def test_order_convention():
    # a < A < b < B
    assert str(CurveClass.of("B")) == "b"
    # Ab is the inverse of Ba, a rotation of aB
    assert str(CurveClass.of("Ab")) == "aB"
    assert str(CurveClass.of("BA")) == "ab"


# ---------------------------------------------------------------- slopes


def test_slope_normalization():
    assert Slope.of(-2, -3) == Slope(2, 3)
    assert Slope.of(-1, 0) == Slope(1, 0)
    with pytest.raises(ValueError):
        Slope(2, 4)
    with pytest.raises(ValueError):
        Slope(1, -2)


def test_simple_from_slope_examples():
    assert str(simple_from_slope(Slope(1, 0))) == "a"
    assert str(simple_from_slope(Slope(0, 1))) == "b"
    ab = simple_from_slope(Slope(1, 1))
    assert str(ab) == "ab"
    assert self_intersection(ab) == 0
    assert ab.abelianization() == (1, 1)


def test_simple_from_slope_all_small_slopes():
    for q in range(0, 31):
        for p in range(-30, 31):
            if math.gcd(abs(p), q) != 1 or (q == 0 and p != 1):
                continue
            c = simple_from_slope(Slope(p, q))
            assert self_intersection(c) == 0, (p, q)
            h = c.abelianization()
            assert h in ((p, q), (-p, -q)), (p, q, h)


# ---------------------------------------------------------------- self-intersection


def test_self_intersection_examples(S):
    assert self_intersection("a") == 0
    assert self_intersection("abAB") == 0
    assert is_peripheral(S, CurveClass.of("abAB"))
    assert self_intersection("aabAB") == 1
    assert self_intersection("aabb") == 1


def test_aab_is_simple(S):
    # aab is the Christoffel word of slope (2, 1); both counts agree it is embedded
    c = CurveClass.of("aab")
    assert self_intersection(c) == 0
    assert geometric_self_intersection(S, c) == 0
    assert c == simple_from_slope(Slope(2, 1))


def test_proper_powers():
    for k in range(1, 5):
        assert self_intersection("a" * k) == k - 1
        assert self_intersection("aabAB" * k) == k * k + k - 1


@given(st.lists(st.integers(0, 3), min_size=1, max_size=9), st.sampled_from(MOVES))
def test_self_intersection_is_a_type_invariant(w, move):
    if not nonempty_cyclic(w):
        return
    c = CurveClass.of(w)
    assert self_intersection(move.act(c)) == self_intersection(c)


def test_geometric_oracle_word_length_8(S):
    dom = DirichletDomain.build(S, GENERIC_BASEPOINT)
    n = 0
    for c in iter_classes(8):
        if not c.is_primitive or is_peripheral(S, c):
            continue
        n += 1
        assert geometric_self_intersection(S, c, dom) == self_intersection(c), str(c)
    assert n > 600


def test_geometric_oracle_on_other_structure(T):
    dom = DirichletDomain.build(T, GENERIC_BASEPOINT)
    for c in iter_classes(6):
        if c.is_primitive and not is_peripheral(T, c):
            assert geometric_self_intersection(T, c, dom) == self_intersection(c), str(c)


@pytest.mark.parametrize("word", ["a", "ab", "aabAB", "aaabbb", "abAbbaB"])
def test_development_covers_one_period(S, word):
    chords = develop(S, word)
    assert chord_length_total(chords) == pytest.approx(curve_length(S, CurveClass.of(word)), rel=1e-8)


# ---------------------------------------------------------------- peripheral and lengths


def test_is_peripheral_examples(S):
    assert is_peripheral(S, CurveClass.of("abAB"))
    assert not is_peripheral(S, CurveClass.of("a"))
    assert not is_peripheral(S, CurveClass.of("aB"))


def test_curve_length_examples(S):
    sys_len = 2 * math.acosh(1.5)
    assert curve_length(S, CurveClass.of("a")) == pytest.approx(sys_len, abs=1e-12)
    assert curve_length(S, CurveClass.of("aB")) == pytest.approx(sys_len, abs=1e-12)
    assert curve_length(S, CurveClass.of("a")) == pytest.approx(1.924847, abs=1e-6)
    # under the normal form tr AB = z = 6
    assert curve_length(S, CurveClass.of("ab")) == pytest.approx(2 * math.acosh(3.0), abs=1e-12)
    assert curve_length(S, CurveClass.of("a")) == curve_length(S, CurveClass.of("A"))
    with pytest.raises(NotHyperbolic):
        curve_length(S, CurveClass.of("abAB"))


@given(raw_words)
def test_curve_length_rotation_invariance(S, w):
    r = cyclic_reduce(free_reduce(w))
    if not r:
        return
    c = CurveClass.of(r)
    t_canon = abs(S.trace_of(c.letters))
    if t_canon <= 2.0 + 1e-9:
        return
    k = len(r) // 3
    rotated = r[k:] + r[:k]
    t_rot = abs(S.trace_of(rotated))
    t_inv = abs(S.trace_of(inverse(rotated)))
    for t in (t_rot, t_inv):
        assert 2 * math.acosh(t / 2) == pytest.approx(curve_length(S, c), rel=1e-9)


def test_to_string_roundtrip():
    for c in iter_classes(4):
        assert CurveClass.of(to_string(c.letters)) == c


def test_christoffel_primitive():
    for p, q in ((3, 5), (-4, 7), (1, 0), (0, 1), (8, 3)):
        c = CurveClass.of(christoffel_word(p, q))
        assert c.is_primitive
