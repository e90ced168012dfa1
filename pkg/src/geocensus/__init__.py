"""Censuses of closed geodesics on cusped hyperbolic tori."""

from .compare import CompareReport, compare, isometry_test, length_ratio_extremes, rn_weight
from .domain import DirichletDomain, reduce_many, reduce_to_domain
from .errors import *  # noqa: F401,F403
from .hyperbolic import (
    Moebius,
    UpperHalfPoint,
    axis,
    axis_frame,
    compose,
    length_from_trace,
    translation_length,
)
from .orbits import (
    MOVES,
    Census,
    CensusEntry,
    MCGMove,
    enumerate_all_primitive,
    enumerate_simple,
    enumerate_type,
)
from .phase import (
    Binning,
    PhaseHistogram,
    PhaseSample,
    build_histogram,
    occupancy_profile,
    sample_orbit,
    tv_distance,
)
from .stats import (
    CountingCurve,
    ThurstonBallEstimate,
    counting_curve,
    estimate_C,
    fit_exponent,
    lemma4_ratio,
    thurston_ball,
)
from .surface import SurfaceStructure, build_surface, modular_torus, surface_by_name
from .words import (
    CurveClass,
    CyclicWord,
    Slope,
    canonicalize,
    curve_length,
    is_peripheral,
    self_intersection,
    simple_from_slope,
    unoriented,
)

__version__ = "0.1.0"
