"""Empirical flip- and flow-invariant measures on the unit tangent bundle.

Each closed geodesic is sampled by arc length along the axis of its matrix, the
samples are pulled back into the Dirichlet polygon at i, and the mass is binned by
position (Klein chart centred at i) and direction angle (upper half plane chart).
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .domain import reduce_many
from .errors import BinningMismatch
from .hyperbolic import axis_frame, length_from_trace
from .orbits import Census
from .surface import build_surface
from .words import CurveClass

CHUNK = 64
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PhaseSample:
    u: float
    v: float
    theta: float
    weight: float

    def __post_init__(self):
        if not self.v > 0:
            raise ValueError("sample position must lie in the upper half plane")
        if not self.weight > 0:
            raise ValueError("sample weight must be positive")


@dataclass(frozen=True)
class Binning:
    nx: int = 12
    ny: int = 12
    ntheta: int = 16
    bbox: tuple[float, float, float, float] | None = None  # Klein (xmin, xmax, ymin, ymax)

    def __post_init__(self):
        if self.ntheta % 2:
            raise ValueError("the number of angle bins must be even for the flip pairing")
        if min(self.nx, self.ny, self.ntheta) < 1:
            raise ValueError("bin counts must be positive")

    def resolved(self, S) -> "Binning":
        if self.bbox is not None:
            return self
        return Binning(self.nx, self.ny, self.ntheta, tuple(S.domain.klein_bbox()))

    def with_resolution(self, nx: int, ny: int, ntheta: int) -> "Binning":
        return Binning(nx, ny, ntheta, self.bbox)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.nx, self.ny, self.ntheta)


def _axis_points(S, c: CurveClass, delta: float):
    """Arc-length samples along the axis: points, tangent angles, weights."""
    M = S.evaluate(c.letters)
    ell = length_from_trace(M.trace)
    n = math.ceil(ell / delta - 1e-12)
    t = -ell / 2.0 + delta * np.arange(n)
    w = np.full(n, delta)
    w[-1] = ell - delta * (n - 1)
    T = axis_frame(M)
    zeta = 1j * np.exp(t)
    den = T.c * zeta + T.d
    z = (T.a * zeta + T.b) / den
    theta = math.pi / 2.0 - 2.0 * np.angle(den)
    return z, theta, w, ell


def sample_orbit(S, c: CurveClass | str, delta: float) -> list[PhaseSample]:
    """Samples of the flip-symmetrized orbit measure of ``c``, reduced into the domain."""
    if not isinstance(c, CurveClass):
        c = CurveClass.of(c)
    if not 0 < delta <= 0.1:
        raise ValueError("step must satisfy 0 < delta <= 0.1")
    z, theta, w, _ = _axis_points(S, c, delta)
    zr, rot = reduce_many(S, z)
    theta = np.mod(theta + rot, TWO_PI)
    out = []
    for zz, th, ww in zip(zr, theta, w):
        out.append(PhaseSample(zz.real, zz.imag, float(th), ww / 2.0))
        out.append(PhaseSample(zz.real, zz.imag, float((th + math.pi) % TWO_PI), ww / 2.0))
    return out


def _klein(z: np.ndarray):
    u, v = z.real, z.imag
    s = u * u + v * v
    x0 = (s + 1.0) / (2.0 * v)
    return ((s - 1.0) / (2.0 * v)) / x0, (u / v) / x0


def _bin_indices(z, theta, binning: Binning):
    kx, ky = _klein(z)
    x0, x1, y0, y1 = binning.bbox
    ix = np.clip(((kx - x0) / (x1 - x0) * binning.nx).astype(int), 0, binning.nx - 1)
    iy = np.clip(((ky - y0) / (y1 - y0) * binning.ny).astype(int), 0, binning.ny - 1)
    it = np.clip((theta / TWO_PI * binning.ntheta).astype(int), 0, binning.ntheta - 1)
    return ix, iy, it


def _chunk_mass(args) -> np.ndarray:
    """Unsymmetrized mass array for one chunk of curves (worker entry point)."""
    x, y, label, words, delta, binning = args
    S = build_surface(x, y, label=label)
    H = np.zeros(binning.shape)
    for word in words:
        z, theta, w, _ = _axis_points(S, CurveClass.of(word), delta)
        zr, rot = reduce_many(S, z)
        theta = np.mod(theta + rot, TWO_PI)
        ix, iy, it = _bin_indices(zr, theta, binning)
        np.add.at(H, (ix, iy, it), w)
    return H


def _flip_symmetrize(H0: np.ndarray) -> np.ndarray:
    half = H0.shape[2] // 2
    rolled = np.roll(H0, -half, axis=2)
    # the same two summands meet at k and at k + half, so the pairing is exact
    return (H0 + rolled) / 2.0


@dataclass
class PhaseHistogram:
    bins: np.ndarray
    binning: Binning
    provenance: dict = field(default_factory=dict)

    @property
    def total_mass(self) -> float:
        return float(self.bins.sum())

    def normalized(self) -> np.ndarray:
        total = self.total_mass
        return self.bins / total if total > 0 else self.bins.copy()

    def is_flip_symmetric(self) -> bool:
        half = self.binning.ntheta // 2
        return bool(np.array_equal(self.bins, np.roll(self.bins, -half, axis=2)))

    def occupied(self) -> int:
        return int(np.count_nonzero(self.bins > 0))

    def __add__(self, other: "PhaseHistogram") -> "PhaseHistogram":
        _check_compatible(self, other)
        prov = {"merged": [self.provenance, other.provenance]}
        return PhaseHistogram(self.bins + other.bins, self.binning, prov)

    # ----------------------------------------------------------------- output
    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["u_bin", "v_bin", "theta_bin", "mass"])
        for (i, j, k), m in np.ndenumerate(self.bins):
            if m != 0.0:
                writer.writerow([i, j, k, f"{m:.17g}"])
        return buf.getvalue()

    def sidecar(self, extra: dict | None = None) -> str:
        data = {
            "binning": asdict(self.binning),
            "coordinates": "position bins over the Klein chart centred at i; angle in the upper half plane",
            "total_mass": self.total_mass,
            "occupied_cells": self.occupied(),
            "provenance": self.provenance,
        }
        if extra:
            data.update(extra)
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    def theta_marginal_csv(self) -> str:
        m = self.bins.sum(axis=(0, 1))
        buf = io.StringIO()
        buf.write("theta_bin,theta_mid,mass\n")
        for k, val in enumerate(m):
            mid = (k + 0.5) * TWO_PI / self.binning.ntheta
            buf.write(f"{k},{mid:.17g},{val:.17g}\n")
        return buf.getvalue()

    def position_marginal_csv(self) -> str:
        m = self.bins.sum(axis=2)
        x0, x1, y0, y1 = self.binning.bbox
        buf = io.StringIO()
        buf.write("u_bin,v_bin,x_mid,y_mid,mass\n")
        for (i, j), val in np.ndenumerate(m):
            xm = x0 + (i + 0.5) * (x1 - x0) / self.binning.nx
            ym = y0 + (j + 0.5) * (y1 - y0) / self.binning.ny
            buf.write(f"{i},{j},{xm:.17g},{ym:.17g},{val:.17g}\n")
        return buf.getvalue()


def build_histogram(S, census: Census | Sequence[CurveClass], delta: float = 0.05,
                    binning: Binning | None = None, workers: int = 1) -> PhaseHistogram:
    """Flip-symmetrized histogram of the orbit measures of every census entry.

    Curves are split into fixed chunks in census order and the chunk arrays are summed
    in that order, so the result does not depend on ``workers``.
    """
    if not 0 < delta <= 0.1:
        raise ValueError("step must satisfy 0 < delta <= 0.1")
    binning = (binning or Binning()).resolved(S)
    if isinstance(census, Census):
        words = [str(e.curve) for e in census.entries]
        prov = {"surface": census.surface_label, "mode": census.mode,
                "seed": str(census.seed) if census.seed is not None else "",
                "L": census.cutoff, "curves": len(words)}
    else:
        words = [str(c) for c in census]
        prov = {"surface": S.label, "curves": len(words)}
    prov["delta"] = delta
    jobs = [(S.x, S.y, S.label, words[i:i + CHUNK], delta, binning)
            for i in range(0, len(words), CHUNK)]
    H0 = np.zeros(binning.shape)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk_mass, jobs))
    else:
        parts = [_chunk_mass(j) for j in jobs]
    for part in parts:
        H0 += part
    return PhaseHistogram(_flip_symmetrize(H0), binning, prov)


def _check_compatible(H1: PhaseHistogram, H2: PhaseHistogram) -> None:
    if H1.binning != H2.binning:
        raise BinningMismatch(f"{H1.binning} != {H2.binning}")


def tv_distance(H1: PhaseHistogram, H2: PhaseHistogram) -> float:
    """Half the L1 distance between the normalized histograms."""
    _check_compatible(H1, H2)
    return float(0.5 * np.abs(H1.normalized() - H2.normalized()).sum())


def occupancy_profile(hists: Sequence[PhaseHistogram]) -> list[int]:
    """Occupied-cell counts of histograms of the same samples at increasing resolution."""
    return [h.occupied() for h in hists]


def histograms_at_resolutions(S, census, delta: float,
                              resolutions: Sequence[tuple[int, int, int]],
                              workers: int = 1) -> list[PhaseHistogram]:
    base = Binning().resolved(S)
    return [build_histogram(S, census, delta, base.with_resolution(*r), workers)
            for r in resolutions]
