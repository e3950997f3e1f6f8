"""Collapse and revival of Jaynes-Cummings Rabi oscillations, three ways.

The atomic inversion of a two-level atom coupled to a coherent field is
computed by (1) direct summation of the truncated Jaynes-Cummings sum,
(2) numerical quadrature of its Hankel-contour integral representation,
and (3) multi-branch Lambert-W saddle-point asymptotics, together with the
closed-form collapse and revival envelope formulas.  The three routes
cross-validate each other; ``jcsum.acceptance`` runs the full check suite.
"""

from .contour import (
    HankelPath,
    PhaseFunction,
    build_cosine_path,
    build_default_path,
    cos_via_hankel,
    inversion_contour_detuned,
    inversion_contour_resonant,
)
from .envelopes import (
    EnvelopeDescriptor,
    collapse_detuned,
    collapse_resonant,
    revival_descriptor,
    revival_detuned,
    revival_resonant,
)
from .exact import (
    ModelParams,
    PhotonDistribution,
    inversion_exact,
    inversion_exact_grid,
    inversion_exact_resonant,
    inversion_exact_resonant_grid,
    make_poisson,
    static_part,
    static_part_estimate,
)
from .exceptions import (
    BranchJumpError,
    DomainError,
    InvalidParameterError,
    JcsumError,
    NumericalFailureError,
    WrongBranchError,
)
from .lambert import (
    NU_CRITICAL,
    BranchIndex,
    BranchPointResult,
    GeneralizedLambertQuery,
    branch_point_w0,
    branch_points_generalized,
    generalized_lambert,
    generalized_residual,
    generalized_series,
    generalized_series_coefficients,
    lambert_series,
    lambert_w,
)
from .saddle import (
    CrossingTime,
    InversionSeries,
    SaddleTrajectory,
    branch_envelope,
    crossing_times,
    curvature_factor,
    inversion_saddle,
    inversion_saddle_grid,
    phi_detuned,
    phi_resonant,
    revival_times,
    saddle_residual,
    trace_trajectory,
)

__version__ = "1.0.0"
