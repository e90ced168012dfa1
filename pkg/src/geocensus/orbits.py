"""Censuses of closed geodesics: simple curves, mapping-class orbits, all primitive classes."""

from __future__ import annotations

import csv
import io
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .domain import DirichletDomain
from .errors import BudgetExceeded, CutoffTooSmall, SeedPeripheral
from .hyperbolic import (
    axis,
    axis_frame,
    distance,
    length_from_trace,
    mat_mul,
    moving_to_i,
    trace_from_length,
)
from .words import (
    CurveClass,
    Slope,
    Word,
    apply_substitution,
    canonical_class,
    christoffel_word,
    free_reduce,
    parse,
    self_intersection,
)

GUARD = 1e-9
DEFAULT_MARGIN = 0.5
DEFAULT_VISITED_CAP = 10_000_000

MODES = ("simple-exact", "orbit-bfs", "all-primitive")


@dataclass(frozen=True)
class CensusEntry:
    curve: CurveClass
    length: float
    self_intersection: int


@dataclass
class Census:
    surface_label: str
    seed: CurveClass | None
    cutoff: float
    entries: tuple[CensusEntry, ...]
    mode: str
    margin: float | None = None
    # orbit mode only: class -> (parent class, move name)
    audit: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def curves(self) -> list[CurveClass]:
        return [e.curve for e in self.entries]

    @property
    def lengths(self) -> list[float]:
        return [e.length for e in self.entries]

    def curve_set(self) -> set[CurveClass]:
        return {e.curve for e in self.entries}

    def truncate(self, L: float) -> "Census":
        """Sub-census of entries with length <= L (censuses are nested in L)."""
        kept = tuple(e for e in self.entries if e.length <= L + GUARD)
        return Census(self.surface_label, self.seed, L, kept, self.mode, self.margin, self.audit)

    def header(self) -> dict:
        return {
            "surface": self.surface_label,
            "seed": str(self.seed) if self.seed is not None else "",
            "L": repr(float(self.cutoff)),
            "mode": self.mode,
            "margin": "" if self.margin is None else repr(float(self.margin)),
        }

    def to_csv(self, extra: dict | None = None) -> str:
        meta = self.header()
        if extra:
            meta.update(extra)
        buf = io.StringIO()
        buf.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["word", "length", "self_intersection"])
        for e in self.entries:
            writer.writerow([str(e.curve), f"{e.length:.17g}", e.self_intersection])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Census":
        lines = text.splitlines()
        meta: dict[str, str] = {}
        while lines and lines[0].startswith("#"):
            head = lines.pop(0)
            meta.update(item.split("=", 1) for item in head[1:].split() if "=" in item)
        rows = list(csv.DictReader(lines))
        entries = tuple(
            CensusEntry(CurveClass.of(r["word"]), float(r["length"]), int(r["self_intersection"]))
            for r in rows
        )
        seed = CurveClass.of(meta["seed"]) if meta.get("seed") else None
        margin = float(meta["margin"]) if meta.get("margin") else None
        return cls(meta["surface"], seed, float(meta["L"]), entries, meta["mode"], margin)


def _sorted_entries(items: Iterable[CensusEntry]) -> tuple[CensusEntry, ...]:
    return tuple(sorted(items, key=lambda e: (e.length, e.curve)))


def _entry(S, c: CurveClass, si: int | None = None) -> CensusEntry:
    length = length_from_trace(S.trace_of(c.letters))
    if si is None:
        si = self_intersection(c)
    return CensusEntry(c, length, si)


# --------------------------------------------------------------------------- simple

def simple_slopes(S, L: float) -> list[tuple[Slope, float]]:
    """Slopes of simple classes with length <= L, with traces from the Fricke recursion.

    Traces are propagated through the Farey tree with t(α+β) = t(α)t(β) - t(α-β).
    Once a new slope carries the largest trace of its triangle, every slope below it
    is larger still, so such a subtree is dropped as soon as it exceeds the cutoff.
    """
    x, y, z = abs(S.x), abs(S.y), abs(S.z)
    w = x * y - z  # trace of a b^-1
    bound = trace_from_length(L + GUARD)
    found: list[tuple[Slope, float]] = []
    for slope, t in (((1, 0), x), ((0, 1), y)):
        if t <= bound:
            found.append((Slope.of(*slope), t))
    # edges (alpha, beta, t_alpha, t_beta, t_diff, monotone)
    stack = [
        ((1, 0), (0, 1), x, y, w, False),
        ((-1, 0), (0, 1), x, y, z, False),
    ]
    while stack:
        al, be, ta, tb, td, mono = stack.pop()
        ga = (al[0] + be[0], al[1] + be[1])
        tg = ta * tb - td
        grows = tg >= max(ta, tb)
        if mono and not grows:
            raise AssertionError(f"trace growth failed below slope {ga}")
        if tg <= bound:
            found.append((Slope.of(*ga), tg))
        elif grows:
            continue
        stack.append((al, ga, ta, tg, tb, grows))
        stack.append((ga, be, tg, tb, ta, grows))
    return found


def enumerate_simple(S, L: float) -> Census:
    if L <= 0:
        raise ValueError("cutoff must be positive")
    entries = []
    for slope, t in simple_slopes(S, L):
        c = canonical_class(christoffel_word(slope.p, slope.q))
        e = _entry(S, c)
        if e.self_intersection != 0:
            raise AssertionError(f"Christoffel word {c} for {slope} is not simple")
        if abs(trace_from_length(e.length) - t) > 1e-8 * t:
            raise AssertionError(f"recursion trace {t} disagrees with matrix trace for {c}")
        if e.length <= L + GUARD:
            entries.append(e)
    if not entries:
        raise CutoffTooSmall(f"no simple closed geodesic of length <= {L}")
    return Census(S.label, CurveClass.of("a"), float(L), _sorted_entries(entries), "simple-exact")


# --------------------------------------------------------------------------- orbits

@dataclass(frozen=True)
class MCGMove:
    """An automorphism of F(a, b) given by the images of a and b."""

    name: str
    image_a: Word
    image_b: Word

    @property
    def images(self) -> tuple[Word, Word, Word, Word]:
        ia, ib = self.image_a, self.image_b
        inv = lambda w: tuple(x ^ 1 for x in reversed(w))  # noqa: E731
        return (ia, inv(ia), ib, inv(ib))

    def __call__(self, word: Sequence[int]) -> Word:
        return free_reduce(apply_substitution(word, self.images))

    def act(self, c: CurveClass) -> CurveClass:
        return canonical_class(self(c.letters))


MOVES: tuple[MCGMove, ...] = (
    MCGMove("a->ab", parse("ab"), parse("b")),
    MCGMove("a->aB", parse("aB"), parse("b")),
    MCGMove("b->ba", parse("a"), parse("ba")),
    MCGMove("b->bA", parse("a"), parse("bA")),
    MCGMove("swap", parse("b"), parse("a")),
    MCGMove("inv-a", parse("A"), parse("b")),
    MCGMove("inv-b", parse("a"), parse("B")),
)
MOVES_BY_NAME = {m.name: m for m in MOVES}


def enumerate_type(S, seed: CurveClass | str, L: float, margin: float = DEFAULT_MARGIN,
                   visited_cap: int = DEFAULT_VISITED_CAP) -> Census:
    """Breadth-first search of the mapping class group orbit of ``seed``.

    The frontier is expanded through classes of length <= L(1+margin); the result keeps
    the classes of length <= L. Completeness relies on the margin.
    """
    if not isinstance(seed, CurveClass):
        seed = CurveClass.of(seed)
    if abs(S.trace_of(seed.letters)) <= 2.0 + 1e-9:
        raise SeedPeripheral(f"seed {seed} is peripheral")
    seed_len = length_from_trace(S.trace_of(seed.letters))
    if seed_len > L + GUARD:
        raise CutoffTooSmall(f"seed length {seed_len:.6f} exceeds cutoff {L}")
    expand_bound = trace_from_length(L * (1.0 + margin) + GUARD)
    keep_bound = trace_from_length(L + GUARD)

    audit: dict[CurveClass, tuple[CurveClass | None, str | None]] = {seed: (None, None)}
    traces = {seed: abs(S.trace_of(seed.letters))}
    rejected: set[CurveClass] = set()
    queue = deque([seed])
    while queue:
        c = queue.popleft()
        for move in MOVES:
            img = move.act(c)
            if img in audit or img in rejected:
                continue
            t = abs(S.trace_of(img.letters))
            if t > expand_bound:
                rejected.add(img)
                continue
            audit[img] = (c, move.name)
            traces[img] = t
            if len(audit) > visited_cap:
                raise BudgetExceeded(f"visited set exceeded {visited_cap} classes")
            queue.append(img)

    si_seed = self_intersection(seed)
    entries = []
    for c, t in traces.items():
        if t <= keep_bound:
            e = _entry(S, c)
            if e.self_intersection != si_seed:
                raise AssertionError(
                    f"orbit element {c} has self-intersection {e.self_intersection}, seed has {si_seed}")
            entries.append(e)
    return Census(S.label, seed, float(L), _sorted_entries(entries), "orbit-bfs", float(margin),
                  audit)


def audit_path(census: Census, c: CurveClass) -> list[str]:
    """Move names leading from the seed to ``c``."""
    path = []
    while True:
        parent, move = census.audit[c]
        if parent is None:
            return path[::-1]
        path.append(move)
        c = parent


def replay(seed: CurveClass, moves: Sequence[str]) -> CurveClass:
    c = seed
    for name in moves:
        c = MOVES_BY_NAME[name].act(c)
    return c


# --------------------------------------------------------------------------- all primitive

def _axes_crossing(S) -> complex | None:
    """Intersection point of the axes of A and B, if they cross."""
    pa = axis(S.A)
    pb = axis(S.B)
    if any(math.isinf(v) for v in pa + pb):
        return None
    ca, ra = (pa[0] + pa[1]) / 2, abs(pa[1] - pa[0]) / 2
    cb, rb = (pb[0] + pb[1]) / 2, abs(pb[1] - pb[0]) / 2
    if ca == cb:
        return None
    u = (ra * ra - rb * rb - ca * ca + cb * cb) / (2 * (cb - ca))
    h2 = ra * ra - (u - ca) ** 2
    if h2 <= 0:
        return None
    return complex(u, math.sqrt(h2))


def _core_radius(S, o: complex) -> float:
    """Radius about ``o`` containing a fundamental segment of the axes of A and B.

    Every non-peripheral closed geodesic other than a and b crosses a ∪ b, so each
    class has a representative whose axis meets one of these segments.
    """
    C = moving_to_i(o)
    rho = 0.0
    for X in (S.A, S.B):
        # in the chart where o = i, the foot of i on the axis is T(i)
        T = axis_frame(C @ X @ C.inverse())
        h = distance(T(1j), 1j)
        half = length_from_trace(X.trace) / 2.0
        rho = max(rho, math.acosh(math.cosh(h) * math.cosh(half)))
    return rho


def enumerate_all_primitive(S, L: float, return_stats: bool = False):
    """All primitive non-peripheral classes of length <= L.

    Searches the orbit ball {g : d(o, g·o) <= L + 2ρ} by breadth-first search over
    the Dirichlet side pairings at o; that ball is connected through those pairings,
    and by the radius choice it holds a representative of every class.
    """
    if L <= 0:
        raise ValueError("cutoff must be positive")
    o = _axes_crossing(S) or 1j
    dom = DirichletDomain.build(S, o)
    rho = _core_radius(S, o)
    R = L + 2.0 * rho + GUARD
    cosh_R = math.cosh(R)
    bound = trace_from_length(L + GUARD)
    pairings = [(s.word, s.element.entries()) for s in dom.side_pairings]

    def cosh_disp(m):
        a, b, c, d = m
        num = (a * o + b)
        den = (c * o + d)
        w = num / den
        return 1.0 + abs(w - o) ** 2 / (2.0 * w.imag * o.imag)

    found: dict[CurveClass, None] = {}
    visited = {(): (1.0, 0.0, 0.0, 1.0)}
    layer = [()]
    while layer:
        nxt = []
        for w in layer:
            m = visited[w]
            for sw, sm in pairings:
                nw = free_reduce(w + sw)
                if nw in visited:
                    continue
                nm = mat_mul(m, sm)
                if cosh_disp(nm) > cosh_R:
                    continue
                visited[nw] = nm
                nxt.append(nw)
                t = abs(nm[0] + nm[3])
                if 2.0 + 1e-9 < t <= bound * (1 + 1e-9):
                    c = canonical_class(nw)
                    if c.is_primitive:
                        found[c] = None
        layer = nxt
    entries = []
    for c in found:
        t = abs(S.trace_of(c.letters))
        if t <= 2.0 + 1e-9 or t > bound:
            continue
        entries.append(_entry(S, c))
    if not entries:
        raise CutoffTooSmall(f"no closed geodesic of length <= {L}")
    census = Census(S.label, None, float(L), _sorted_entries(entries), "all-primitive")
    if return_stats:
        return census, {"basepoint": o, "radius": R, "ball_size": len(visited),
                        "side_pairings": len(pairings)}
    return census
