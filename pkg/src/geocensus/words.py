"""Cyclic words in the free group F(a, b) and free homotopy classes on the punctured torus.

Letters are small ints: ``a=0, A=1, b=2, B=3`` (``A`` is a⁻¹, ``B`` is b⁻¹), so the
inverse of a letter is ``x ^ 1`` and integer order is the fixed order a < A < b < B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import TrivialWord

LETTERS = "aAbB"
_CODE = {ch: i for i, ch in enumerate(LETTERS)}
# ribbon structure at the single vertex of the one-holed torus spine
_ROTATION = (0, 2, 1, 3)
_ROT_POS = {h: i for i, h in enumerate(_ROTATION)}

Word = tuple[int, ...]


def parse(text: str | Sequence[int]) -> Word:
    """Accept ``"aabB"``, ``"a a b b⁻¹"`` or a sequence of letter codes."""
    if not isinstance(text, str):
        return tuple(int(x) for x in text)
    s = text.replace("⁻¹", "^-1").replace(" ", "")
    out = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch not in _CODE:
            raise ValueError(f"bad letter {ch!r} in {text!r}")
        code = _CODE[ch]
        i += 1
        if s.startswith("^-1", i):
            code ^= 1
            i += 3
        out.append(code)
    return tuple(out)


def to_string(word: Sequence[int]) -> str:
    return "".join(LETTERS[x] for x in word)


def inverse(word: Sequence[int]) -> Word:
    return tuple(x ^ 1 for x in reversed(word))


def free_reduce(word: Sequence[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Sequence[int]) -> Word:
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == w[j - 1] ^ 1:
        i += 1
        j -= 1
    return w[i:j]


def min_rotation(word: Word) -> Word:
    n = len(word)
    if n <= 1:
        return word
    doubled = word + word
    return min(doubled[i:i + n] for i in range(n))


def period(word: Word) -> int:
    """Smallest p dividing len(word) with word = (word[:p])^(n/p)."""
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:n - p] == word[p:]:
            return p
    return n


def reduced_words(max_length: int, min_length: int = 1) -> Iterator[Word]:
    """All freely reduced words with lengths in [min_length, max_length], by length."""
    layer: list[Word] = [()]
    for n in range(1, max_length + 1):
        layer = [w + (x,) for w in layer for x in range(4) if not w or w[-1] != x ^ 1]
        if n >= min_length:
            yield from layer


@dataclass(frozen=True, order=True)
class CyclicWord:
    """A nonempty cyclically reduced word stored in its lexicographically minimal rotation."""

    letters: Word

    def __str__(self) -> str:
        return to_string(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def inverse(self) -> "CyclicWord":
        return canonicalize(inverse(self.letters))


@dataclass(frozen=True, order=True)
class CurveClass:
    """An unoriented free homotopy class: the smaller of canon(w) and canon(w⁻¹)."""

    rep: CyclicWord

    @property
    def letters(self) -> Word:
        return self.rep.letters

    def __str__(self) -> str:
        return str(self.rep)

    def __len__(self) -> int:
        return len(self.rep)

    @classmethod
    def of(cls, word: str | Sequence[int] | CyclicWord) -> "CurveClass":
        if isinstance(word, CyclicWord):
            return unoriented(word)
        return unoriented(canonicalize(parse(word)))

    @property
    def is_primitive(self) -> bool:
        return period(self.letters) == len(self.letters)

    def abelianization(self) -> tuple[int, int]:
        w = self.letters
        return (w.count(0) - w.count(1), w.count(2) - w.count(3))


def canonicalize(letters: str | Sequence[int]) -> CyclicWord:
    w = cyclic_reduce(parse(letters))
    if not w:
        raise TrivialWord(f"{letters!r} reduces to the empty word")
    return CyclicWord(min_rotation(w))


def unoriented(w: CyclicWord) -> CurveClass:
    inv = CyclicWord(min_rotation(inverse(w.letters)))
    return CurveClass(min(w, inv))


def canonical_class(letters: Sequence[int]) -> CurveClass:
    """Fast path from raw letter codes straight to the unoriented class."""
    w = cyclic_reduce(letters)
    if not w:
        raise TrivialWord("word reduces to the empty word")
    return CurveClass(min(CyclicWord(min_rotation(w)), CyclicWord(min_rotation(inverse(w)))))


@dataclass(frozen=True)
class Slope:
    """Primitive homology class (p, q) up to sign: q > 0, or (1, 0)."""

    p: int
    q: int

    def __post_init__(self):
        if math.gcd(abs(self.p), abs(self.q)) != 1:
            raise ValueError(f"slope ({self.p}, {self.q}) is not primitive")
        if self.q < 0 or (self.q == 0 and self.p != 1):
            raise ValueError(f"slope ({self.p}, {self.q}) is not normalized; use Slope.of")

    @classmethod
    def of(cls, p: int, q: int) -> "Slope":
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return cls(p, q)


def christoffel_word(p: int, q: int) -> Word:
    """Lower Christoffel word with |p| letters a^{sign p} and q letters b, for q >= 0."""
    if q < 0:
        raise ValueError("christoffel_word expects q >= 0")
    x = 0 if p >= 0 else 1
    n = abs(p) + q
    out = []
    for k in range(1, n + 1):
        if (k * q) // n > ((k - 1) * q) // n:
            out.append(2)
        else:
            out.append(x)
    return tuple(out)


def simple_from_slope(s: Slope) -> CurveClass:
    return canonical_class(christoffel_word(s.p, s.q))


def _rel(h: int, start: int) -> int:
    """Position of half-edge h in the vertex rotation, counted from just after ``start``."""
    return (_ROT_POS[h] - _ROT_POS[start]) % 4


def _primitive_self_intersection(w: Word) -> int:
    n = len(w)
    if n == 1:
        return 0
    v = inverse(w)
    ww = w + w + w
    vv = v + v + v
    cap = 2 * n + 2
    twice = 0

    def common(x: Word, i: int, y: Word, j: int) -> int:
        k = 0
        while x[(i + k) % n] == y[(j + k) % n]:
            k += 1
            if k > cap:
                raise ValueError("word is not primitive")
        return k

    def crossing(x1: int, y1: int, x2: int, y2: int, s0: int, t: int) -> bool:
        return (_rel(x1, s0) < _rel(x2, s0)) == (_rel(y1, t) < _rel(y2, t))

    for i in range(n):
        x1 = w[i - 1] ^ 1
        # same direction: both lifts read w
        for j in range(n):
            if j == i or w[j - 1] == w[i - 1]:
                continue
            x2 = w[j - 1] ^ 1
            k = common(ww, i, ww, j)
            if k == 0:
                y1, y2 = w[i], w[j]
                if x1 != y2 and y1 != x2 and (_rel(y1, x1) == 2) and (_rel(y2, x2) == 2):
                    twice += 1
            else:
                s0 = w[i]
                t = w[(i + k - 1) % n] ^ 1
                if crossing(x1, w[(i + k) % n], x2, w[(j + k) % n], s0, t):
                    twice += 1
        # opposite direction: second lift read backwards, i.e. along w⁻¹
        for j in range(n):
            if v[j - 1] == w[i - 1]:
                continue
            k = common(ww, i, vv, j)
            if k == 0:
                continue
            x2 = v[j - 1] ^ 1
            s0 = w[i]
            t = w[(i + k - 1) % n] ^ 1
            if crossing(x1, w[(i + k) % n], x2, v[(j + k) % n], s0, t):
                twice += 1
    if twice % 2:
        raise AssertionError(f"odd crossing count for {to_string(w)}")
    return twice // 2


def self_intersection(c: CurveClass | str | Sequence[int]) -> int:
    """Minimal self-intersection number, by counting linked pairs of lifts in the
    ribbon-graph tree. A k-th power u^k has k²·i(u) + k - 1."""
    if not isinstance(c, CurveClass):
        c = CurveClass.of(c)
    w = c.letters
    p = period(w)
    m = len(w) // p
    base = _primitive_self_intersection(w[:p])
    return m * m * base + m - 1


def is_peripheral(S, c: CurveClass) -> bool:
    return abs(S.trace_of(c.letters)) <= 2.0 + 1e-9


def curve_length(S, c: CurveClass) -> float:
    from .hyperbolic import length_from_trace

    return length_from_trace(S.trace_of(c.letters))


def apply_substitution(word: Sequence[int], images: Sequence[Word]) -> Word:
    """Image of ``word`` under the endomorphism sending letter code x to images[x]."""
    out: list[int] = []
    for x in word:
        out.extend(images[x])
    return tuple(out)


def iter_classes(max_length: int) -> Iterable[CurveClass]:
    """Every unoriented class with a cyclically reduced representative of length <= max_length."""
    seen: set[CurveClass] = set()
    for w in reduced_words(max_length):
        if w[0] == w[-1] ^ 1 and len(w) > 1:
            continue
        c = canonical_class(w)
        if c not in seen:
            seen.add(c)
            yield c
