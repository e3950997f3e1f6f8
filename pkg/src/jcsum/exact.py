"""Ground-truth Jaynes-Cummings sum by direct truncated summation.

The atomic inversion for an atom starting in its ground state and a field
with photon-number weights W_n is

    <sigma3(t)> = -sum_n W_n (mu + n cos(2 sqrt(mu + n) t)) / (mu + n),

with mu the squared detuning in units of the coupling.  Everything here is
evaluated by plain summation over a truncated distribution so it can serve
as the oracle for the contour and saddle-point routes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidParameterError

__all__ = [
    "PhotonDistribution",
    "ModelParams",
    "make_poisson",
    "inversion_exact",
    "inversion_exact_grid",
    "inversion_exact_resonant",
    "inversion_exact_resonant_grid",
    "static_part",
    "static_part_estimate",
]

_MAX_TERMS = 100_000

TIME_UNITS = ("lambda-t", "t-over-alpha", "t-over-T")


@dataclass(frozen=True)
class PhotonDistribution:
    """Truncated photon-number distribution.

    ``weights[n]`` is the probability of n photons; the truncation index is
    the last retained n.  Weights must be non-negative and sum to 1 up to the
    truncation tail.
    """

    weights: np.ndarray
    mean: float = field(init=False)
    truncation_index: int = field(init=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or len(w) == 0:
            raise InvalidParameterError("weights must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise InvalidParameterError("weights must be finite and non-negative")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "mean", float(np.sum(np.arange(len(w)) * w)))
        object.__setattr__(self, "truncation_index", len(w) - 1)

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))


@dataclass(frozen=True)
class ModelParams:
    """Coherent amplitude and detuning parameters.

    ``mu`` is the absolute detuning (Delta/2 lambda)^2, ``nu = mu/alpha^2``
    the detuning relative to the mean photon number.  Either may be given;
    the other is derived.  ``time_unit`` only tags reporting conventions.
    """

    alpha: float
    mu: float | None = None
    nu: float | None = None
    time_unit: str = "lambda-t"

    def __post_init__(self):
        a = float(self.alpha)
        if not math.isfinite(a) or a < 0:
            raise InvalidParameterError(f"alpha must be finite and >= 0, got {self.alpha}")
        object.__setattr__(self, "alpha", a)
        mu, nu = self.mu, self.nu
        if mu is None and nu is None:
            mu = nu = 0.0
        elif mu is None:
            nu = float(nu)
            mu = nu * a * a
        elif nu is None:
            mu = float(mu)
            if a > 0:
                nu = mu / (a * a)
            elif mu == 0.0:
                nu = 0.0
            else:
                raise InvalidParameterError("nu is undefined for alpha = 0, mu > 0")
        else:
            mu, nu = float(mu), float(nu)
            if abs(nu * a * a - mu) > 1e-12 * max(1.0, abs(mu)):
                raise InvalidParameterError(
                    f"inconsistent detuning: nu*alpha^2 = {nu * a * a} != mu = {mu}"
                )
        if mu < 0 or nu < 0:
            raise InvalidParameterError("detuning parameters must be >= 0")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)
        if self.time_unit not in TIME_UNITS:
            raise InvalidParameterError(
                f"time_unit must be one of {TIME_UNITS}, got {self.time_unit!r}"
            )

    @property
    def resonant(self) -> bool:
        return self.mu == 0.0


def make_poisson(alpha: float, tail_tolerance: float = 1e-14) -> PhotonDistribution:
    """Poisson weights W_n = |alpha|^{2n} e^{-|alpha|^2}/n!, truncated.

    The truncation index is the smallest n whose omitted tail mass is below
    ``tail_tolerance``.  Weights are built by the stable forward recursion
    W_{n+1} = W_n |alpha|^2/(n+1), which stays in linear space for
    |alpha|^2 up to several hundred.
    """
    if not (isinstance(alpha, (int, float)) and math.isfinite(alpha)):
        raise InvalidParameterError(f"alpha must be a finite real, got {alpha!r}")
    if alpha < 0:
        raise InvalidParameterError("alpha must be >= 0")
    if not (0.0 < tail_tolerance < 1.0):
        raise InvalidParameterError("tail_tolerance must lie in (0, 1)")
    a2 = alpha * alpha
    if a2 == 0.0:
        return PhotonDistribution(weights=np.array([1.0]))
    weights = [math.exp(-a2)]
    cumulative = weights[0]
    n = 0
    while 1.0 - cumulative >= tail_tolerance and n < _MAX_TERMS:
        weights.append(weights[-1] * a2 / (n + 1))
        cumulative += weights[-1]
        n += 1
        # past the mode, stop once further weights cannot move the total
        # at double precision (the 1 - cumulative test can stall there)
        if n > a2 and weights[-1] < 0.25 * np.finfo(float).eps:
            break
    return PhotonDistribution(weights=np.array(weights))


def _summand_ratio(mu: float, n: np.ndarray, t: float) -> np.ndarray:
    """(mu + n cos(2 sqrt(mu+n) t))/(mu + n) with the n=0, mu=0 limit = 1."""
    denom = mu + n
    num = mu + n * np.cos(2.0 * np.sqrt(denom) * t)
    out = np.ones_like(denom, dtype=float)
    nz = denom > 0
    out[nz] = num[nz] / denom[nz]
    return out


def inversion_exact(dist: PhotonDistribution, params: ModelParams, t: float) -> float:
    """Atomic inversion from the truncated sum at one time (lambda-t units)."""
    if t < 0:
        raise InvalidParameterError("t must be >= 0")
    n = np.arange(len(dist.weights), dtype=float)
    return float(-np.sum(dist.weights * _summand_ratio(params.mu, n, float(t))))


def inversion_exact_grid(dist: PhotonDistribution, params: ModelParams, t) -> np.ndarray:
    """Vectorized :func:`inversion_exact` over a caller-supplied time grid."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise InvalidParameterError("t must be >= 0")
    n = np.arange(len(dist.weights), dtype=float)
    mu = params.mu
    denom = mu + n
    freq = 2.0 * np.sqrt(denom)
    # cos table: one row per photon number, one column per time
    cos_table = np.cos(np.outer(freq, t))
    ratio = np.empty_like(cos_table)
    nz = denom > 0
    ratio[nz] = (mu + n[nz, None] * cos_table[nz]) / denom[nz, None]
    ratio[~nz] = 1.0
    return -(dist.weights @ ratio)


def inversion_exact_resonant(dist: PhotonDistribution, t: float) -> float:
    """Resonant sum -sum_n W_n cos(2 sqrt(n) t); mu = 0 case of the above."""
    if t < 0:
        raise InvalidParameterError("t must be >= 0")
    n = np.arange(len(dist.weights), dtype=float)
    return float(-np.sum(dist.weights * np.cos(2.0 * np.sqrt(n) * float(t))))


def inversion_exact_resonant_grid(dist: PhotonDistribution, t) -> np.ndarray:
    """Vectorized resonant sum over a time grid."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise InvalidParameterError("t must be >= 0")
    n = np.arange(len(dist.weights), dtype=float)
    return -(dist.weights @ np.cos(np.outer(2.0 * np.sqrt(n), t)))


def static_part(alpha: float, mu: float, n_terms: int | None = None) -> float:
    """Time-independent part of the detuned sum, by direct summation.

    Returns -e^{-|alpha|^2} sum_n (|alpha|^{2n}/n!) mu/(mu + n).  At mu = 0
    the whole n = 0 term is assigned to the time-dependent remainder (the
    resonant-limit convention), so the static part is exactly 0.
    """
    if alpha <= 0:
        raise InvalidParameterError("alpha must be > 0")
    if mu < 0:
        raise InvalidParameterError("mu must be >= 0")
    if mu == 0.0:
        return 0.0
    if n_terms is None:
        dist = make_poisson(alpha, 1e-16)
        weights = dist.weights
    else:
        a2 = alpha * alpha
        weights = [math.exp(-a2)]
        for n in range(n_terms - 1):
            weights.append(weights[-1] * a2 / (n + 1))
        weights = np.array(weights)
    n = np.arange(len(weights), dtype=float)
    return float(-np.sum(weights * mu / (mu + n)))


def static_part_estimate(alpha: float, mu: float) -> float:
    """Large-|alpha|^2 estimate of the static part: -nu = -mu/|alpha|^2."""
    if alpha <= 0:
        raise InvalidParameterError("alpha must be > 0")
    return -mu / (alpha * alpha)
