"""Once-punctured hyperbolic tori given by Fricke trace coordinates."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .errors import DegenerateTrace, NoRealSolution
from .hyperbolic import Moebius, mat_mul

# letter codes: a, a^-1, b, b^-1
LETTER_A, LETTER_AI, LETTER_B, LETTER_BI = 0, 1, 2, 3


@dataclass(frozen=True)
class SurfaceStructure:
    """A marked cusped torus: tr A = x, tr B = y, tr AB = z with x²+y²+z² = xyz."""

    label: str
    x: float
    y: float
    z: float
    A: Moebius = field(repr=False, compare=False)
    B: Moebius = field(repr=False, compare=False)
    genus: int = 1
    cusps: int = 1

    @property
    def d(self) -> int:
        """Complexity 6g-6+2r, the polynomial growth exponent of type counts."""
        return 6 * self.genus - 6 + 2 * self.cusps

    @cached_property
    def generators(self) -> tuple[tuple[float, float, float, float], ...]:
        """SL(2,R) entry tuples indexed by letter code, signed so tr A = x and tr B = y."""
        out = []
        for m, t in ((self.A, self.x), (self.B, self.y)):
            e = m.entries()
            if (e[0] + e[3]) * t < 0:
                e = tuple(-v for v in e)
            a, b, c, d = e
            out.extend([e, (d, -b, -c, a)])
        return tuple(out)

    def evaluate(self, letters: Sequence[int]) -> Moebius:
        """Matrix of a word, read left to right."""
        gens = self.generators
        m = (1.0, 0.0, 0.0, 1.0)
        for x in letters:
            m = mat_mul(m, gens[x])
        return Moebius.from_product(*m)

    def trace_of(self, letters: Sequence[int]) -> float:
        gens = self.generators
        m = (1.0, 0.0, 0.0, 1.0)
        for x in letters:
            m = mat_mul(m, gens[x])
        return m[0] + m[3]

    def commutator_trace(self) -> float:
        return self.trace_of((LETTER_A, LETTER_B, LETTER_AI, LETTER_BI))

    @cached_property
    def domain(self):
        from .domain import DirichletDomain

        return DirichletDomain.build(self, 1j)

    def to_json(self) -> str:
        return json.dumps({"label": self.label, "x": self.x, "y": self.y, "z": self.z})

    @classmethod
    def from_json(cls, text: str) -> "SurfaceStructure":
        data = json.loads(text)
        s = build_surface(data["x"], data["y"], label=data.get("label"))
        if "z" in data and abs(s.z - data["z"]) > 1e-9 * max(1.0, abs(s.z)):
            raise ValueError(f"stored z={data['z']!r} disagrees with recomputed z={s.z!r}")
        return s


def build_surface(x: float, y: float, label: str | None = None) -> SurfaceStructure:
    x, y = float(x), float(y)
    disc = x * x * y * y - 4.0 * (x * x + y * y)
    if disc < 0:
        raise NoRealSolution(f"no real z with x²+y²+z² = xyz for (x, y) = ({x}, {y})")
    z = (x * y + math.sqrt(disc)) / 2.0
    if abs(x) <= 2.0 or abs(y) <= 2.0 or abs(z) <= 2.0:
        raise DegenerateTrace(f"traces ({x}, {y}, {z}) must all exceed 2 in absolute value")
    eta = (-z - math.sqrt(z * z - 4.0)) / 2.0
    A = Moebius.from_entries(x, 1.0, -1.0, 0.0)
    B = Moebius.from_entries(0.0, eta, -1.0 / eta, y)
    if label is None:
        label = f"torus({x:g},{y:g})"
    return SurfaceStructure(label=label, x=x, y=y, z=z, A=A, B=B)


def modular_torus() -> SurfaceStructure:
    return build_surface(3.0, 3.0, label="modular")


def surface_by_name(name: str) -> SurfaceStructure:
    """Resolve a CLI surface spec: ``modular`` or ``x,y``."""
    if name == "modular":
        return modular_torus()
    try:
        xs, ys = name.split(",")
        return build_surface(float(xs), float(ys))
    except ValueError as exc:
        raise ValueError(f"surface spec must be 'modular' or 'x,y', got {name!r}") from exc
