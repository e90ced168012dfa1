"""Isometries of the upper half plane as unit-determinant 2x2 matrices.

Matrices are stored up to sign (PSL(2,R)); the canonical representative has
``a > 0``, or ``a == 0`` and ``b > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NotHyperbolic

DET_TOL = 1e-9
RENORM_TOL = 1e-12
HYPERBOLIC_TOL = 1e-12


@dataclass(frozen=True)
class Moebius:
    a: float
    b: float
    c: float
    d: float

    @classmethod
    def from_entries(cls, a: float, b: float, c: float, d: float) -> "Moebius":
        """Build a canonical element, renormalizing the determinant if it drifted."""
        det = a * d - b * c
        if det <= 0:
            raise ValueError(f"determinant must be positive, got {det!r}")
        if abs(det - 1.0) > RENORM_TOL:
            s = math.sqrt(det)
            a, b, c, d = a / s, b / s, c / s, d / s
        if a < 0 or (a == 0 and b < 0):
            a, b, c, d = -a, -b, -c, -d
        return cls(float(a), float(b), float(c), float(d))

    @classmethod
    def from_product(cls, a: float, b: float, c: float, d: float) -> "Moebius":
        """Canonical element for a product of unit-determinant factors.

        The determinant recomputed from entries of size s carries rounding of order
        s² · eps, so only drift beyond that scale triggers renormalization.
        """
        det = a * d - b * c
        scale = max(1.0, abs(a), abs(b), abs(c), abs(d)) ** 2
        if abs(det - 1.0) > RENORM_TOL * scale:
            if det <= 0:
                raise ValueError(f"determinant must be positive, got {det!r}")
            s = math.sqrt(det)
            a, b, c, d = a / s, b / s, c / s, d / s
        if a < 0 or (a == 0 and b < 0):
            a, b, c, d = -a, -b, -c, -d
        return cls(float(a), float(b), float(c), float(d))

    @classmethod
    def identity(cls) -> "Moebius":
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> float:
        return self.a + self.d

    def entries(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def inverse(self) -> "Moebius":
        return Moebius.from_entries(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "Moebius") -> "Moebius":
        return compose(self, other)

    def __call__(self, z: complex) -> complex:
        return apply(self, z)

    def is_close(self, other: "Moebius", tol: float = 1e-9) -> bool:
        """Equality in PSL(2,R) up to ``tol`` entrywise."""
        e1 = self.entries()
        e2 = other.entries()
        same = max(abs(x - y) for x, y in zip(e1, e2))
        flip = max(abs(x + y) for x, y in zip(e1, e2))
        return min(same, flip) <= tol


@dataclass(frozen=True)
class UpperHalfPoint:
    u: float
    v: float

    def __post_init__(self):
        if not self.v > 0:
            raise ValueError(f"upper half plane point needs v > 0, got {self.v!r}")

    @property
    def z(self) -> complex:
        return complex(self.u, self.v)

    @classmethod
    def from_complex(cls, z: complex) -> "UpperHalfPoint":
        return cls(z.real, z.imag)


I = Moebius.identity()


def compose(m1: Moebius, m2: Moebius) -> Moebius:
    a1, b1, c1, d1 = m1.a, m1.b, m1.c, m1.d
    a2, b2, c2, d2 = m2.a, m2.b, m2.c, m2.d
    return Moebius.from_product(
        a1 * a2 + b1 * c2,
        a1 * b2 + b1 * d2,
        c1 * a2 + d1 * c2,
        c1 * b2 + d1 * d2,
    )


def mat_mul(m1: tuple, m2: tuple) -> tuple:
    """Raw product of entry 4-tuples, no normalization (hot loops)."""
    a1, b1, c1, d1 = m1
    a2, b2, c2, d2 = m2
    return (a1 * a2 + b1 * c2, a1 * b2 + b1 * d2, c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)


def apply(m: Moebius, z: complex) -> complex:
    if z == math.inf:
        return math.inf if m.c == 0 else m.a / m.c
    den = m.c * z + m.d
    if den == 0:
        return math.inf
    return (m.a * z + m.b) / den


def apply_boundary(m: Moebius, x: float) -> float:
    """Action on the boundary circle R ∪ {∞}."""
    if math.isinf(x):
        return math.inf if m.c == 0 else m.a / m.c
    den = m.c * x + m.d
    if den == 0:
        return math.inf
    return (m.a * x + m.b) / den


def _check_hyperbolic(m: Moebius) -> float:
    t = abs(m.trace)
    if t <= 2.0 + HYPERBOLIC_TOL:
        raise NotHyperbolic(f"|trace| = {t!r} is not > 2")
    return t


def length_from_trace(t: float) -> float:
    t = abs(t)
    if t <= 2.0 + HYPERBOLIC_TOL:
        raise NotHyperbolic(f"|trace| = {t!r} is not > 2")
    return 2.0 * math.acosh(t / 2.0)


def trace_from_length(length: float) -> float:
    return 2.0 * math.cosh(length / 2.0)


def translation_length(m: Moebius) -> float:
    return length_from_trace(_check_hyperbolic(m))


def axis(m: Moebius) -> tuple[float, float]:
    """Fixed points (repelling, attracting) of a hyperbolic element; ∞ is ``math.inf``."""
    _check_hyperbolic(m)
    a, b, c, d = m.entries()
    if c == 0:
        # z -> a^2 z + ab ; finite fixed point ab/(1 - a^2)
        finite = a * b / (1.0 - a * a)
        if a * a > 1.0:
            return (finite, math.inf)
        return (math.inf, finite)
    # c z^2 + (d - a) z - b = 0, discriminant tr^2 - 4
    bb = d - a
    root = math.sqrt((a + d) ** 2 - 4.0)
    q = -0.5 * (bb + math.copysign(root, bb))
    z1 = q / c
    z2 = -b / q
    # attracting fixed point has |c z + d| > 1; c·z1 = q avoids overflow in z1
    if abs(q + d) > abs(d - b * c / q):
        return (z2, z1)
    return (z1, z2)


def cosh_distance(z: complex, w: complex) -> float:
    return 1.0 + abs(z - w) ** 2 / (2.0 * z.imag * w.imag)


def distance(z: complex, w: complex) -> float:
    return math.acosh(max(1.0, cosh_distance(z, w)))


def to_hyperboloid(z: complex) -> tuple[float, float, float]:
    """Upper half plane -> hyperboloid, with i sent to (1, 0, 0)."""
    u, v = z.real, z.imag
    s = u * u + v * v
    return ((s + 1.0) / (2.0 * v), (s - 1.0) / (2.0 * v), u / v)


def to_klein(z: complex) -> tuple[float, float]:
    x0, x1, x2 = to_hyperboloid(z)
    return (x1 / x0, x2 / x0)


def boundary_to_klein(x: float) -> tuple[float, float]:
    """Ideal point of the real line (or ∞) on the unit circle of the Klein chart."""
    if math.isinf(x):
        return (1.0, 0.0)
    if abs(x) > 1.0:
        r = 1.0 / x
        r2 = r * r
        return ((1.0 - r2) / (1.0 + r2), 2.0 * r / (1.0 + r2))
    s = x * x
    return ((s - 1.0) / (s + 1.0), 2.0 * x / (s + 1.0))


def klein_to_uhp(k: tuple[float, float]) -> complex:
    k1, k2 = k
    r2 = k1 * k1 + k2 * k2
    x0 = 1.0 / math.sqrt(1.0 - r2)
    x1, x2 = k1 * x0, k2 * x0
    # invert to_hyperboloid: v = 1/(x0 - x1), u = x2 v
    v = 1.0 / (x0 - x1)
    return complex(x2 * v, v)


def moving_to_i(z: complex) -> Moebius:
    """The affine element sending ``z`` to i."""
    s = math.sqrt(z.imag)
    return Moebius.from_entries(1.0 / s, -z.real / s, 0.0, s)


def _eigenvector(m: tuple, lam: float) -> tuple[float, float]:
    a, b, c, d = m
    v1 = (b, lam - a)
    v2 = (lam - d, c)
    return v1 if math.hypot(*v1) >= math.hypot(*v2) else v2


def axis_frame(m: Moebius) -> Moebius:
    """Isometry T with T(0), T(∞) the repelling/attracting ends of the axis of ``m``
    and T(i) the point of the axis closest to i.

    The columns of T are eigenvectors of m (attracting first), scaled to equal norm,
    which is exactly the condition |T⁻¹(i)| = 1 putting T(i) at the foot of i.
    """
    t = _check_hyperbolic(m)
    e = m.entries() if m.trace > 0 else tuple(-v for v in m.entries())
    root = math.sqrt((t - 2.0) * (t + 2.0))
    lam = (t + root) / 2.0
    u = _eigenvector(e, lam)
    v = _eigenvector(e, 1.0 / lam)
    nu, nv = math.hypot(*u), math.hypot(*v)
    u = (u[0] / nu, u[1] / nu)
    v = (v[0] / nv, v[1] / nv)
    det = u[0] * v[1] - u[1] * v[0]
    if det < 0:
        v = (-v[0], -v[1])
        det = -det
    r = 1.0 / math.sqrt(det)
    return Moebius.from_entries(u[0] * r, v[0] * r, u[1] * r, v[1] * r)
