"""Closed-form collapse and revival formulas, resonant and detuned.

These are the leading-order expansions of the saddle-point phase near its
maxima: a Gaussian collapse around t = 0 and Gaussian revival bursts around
t_n = 2 pi n |alpha| (1+nu)^{1/2}.  They are cheap to evaluate and serve as
analytic cross-checks on the trajectory-based route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import InvalidParameterError

__all__ = [
    "EnvelopeDescriptor",
    "collapse_resonant",
    "collapse_detuned",
    "revival_resonant",
    "revival_detuned",
    "revival_descriptor",
]


@dataclass(frozen=True)
class EnvelopeDescriptor:
    """Gaussian burst: center, width (std in lambda-t), prefactor and the
    cosine-argument coefficients (constant, linear, quadratic) in t."""

    center_time: float
    width: float
    prefactor: float
    phase_coefficients: tuple[float, float, float]

    def __post_init__(self):
        if self.width <= 0:
            raise InvalidParameterError("width must be positive")
        if not (0.0 < self.prefactor <= 1.0):
            raise InvalidParameterError("prefactor must lie in (0, 1]")


def collapse_resonant(alpha: float, t: float) -> float:
    """Cummings collapse -e^{-t^2/2} cos(2 |alpha| t)."""
    return -math.exp(-t * t / 2.0) * math.cos(2.0 * alpha * t)


def collapse_detuned(alpha: float, nu: float, t: float) -> float:
    """Detuned collapse -e^{-t^2/2(1+nu)} cos(2 |alpha| t (1+nu)^{1/2})."""
    return -math.exp(-t * t / (2.0 * (1.0 + nu))) * math.cos(
        2.0 * alpha * t * math.sqrt(1.0 + nu)
    )


def revival_resonant(alpha: float, n: int, t: float, simplified: bool = False) -> float:
    """Resonant revival burst n (full form by default).

    -(1+pi^2 n^2)^{-1/4} exp(-(t-t_n)^2/2(1+pi^2 n^2))
        cos(t^2/(2 pi n) - (t-t_n)^2/(2 pi n (1+pi^2 n^2)) - pi/4)

    ``simplified`` drops the small second cosine term.
    """
    if n < 1:
        raise InvalidParameterError("revival index n must be >= 1")
    tn = 2.0 * math.pi * n * alpha
    s2 = 1.0 + math.pi**2 * n**2
    dt2 = (t - tn) ** 2
    phase = t * t / (2.0 * math.pi * n) - math.pi / 4.0
    if not simplified:
        phase -= dt2 / (2.0 * math.pi * n * s2)
    return -(s2**-0.25) * math.exp(-dt2 / (2.0 * s2)) * math.cos(phase)


def revival_detuned(alpha: float, nu: float, n: int, t: float) -> float:
    """Detuned revival burst n from the expanded phase near t_n.

    Amplitude exponent -(1+nu)(t-t_n)^2 / 2(pi^2 n^2 + (1+nu)^2), phase
    2 pi n mu + t^2/(2 pi n) (quadratic correction dropped near t_n),
    curvature magnitude (1 + pi^2 n^2/(1+nu)^2)^{1/2} with arg ~ pi/2.
    """
    if n < 1:
        raise InvalidParameterError("revival index n must be >= 1")
    one = 1.0 + nu
    tn = 2.0 * math.pi * n * alpha * math.sqrt(one)
    mu = nu * alpha * alpha
    denom = math.pi**2 * n**2 + one * one
    log_amp = -0.5 * one * (t - tn) ** 2 / denom
    f_mag = math.sqrt(1.0 + math.pi**2 * n**2 / (one * one))
    # the constant 2 pi n mu is folded in mod 2 pi to keep the cosine
    # argument small when mu is large
    phase = math.fmod(2.0 * math.pi * n * mu, 2.0 * math.pi) + t * t / (2.0 * math.pi * n)
    return -(f_mag**-0.5) * math.exp(log_amp) * math.cos(phase - math.pi / 4.0)


def revival_descriptor(alpha: float, nu: float, n: int) -> EnvelopeDescriptor:
    """Envelope metadata of revival burst n."""
    if n < 1:
        raise InvalidParameterError("revival index n must be >= 1")
    one = 1.0 + nu
    tn = 2.0 * math.pi * n * alpha * math.sqrt(one)
    denom = math.pi**2 * n**2 + one * one
    width = math.sqrt(denom / one)
    f_mag = math.sqrt(1.0 + math.pi**2 * n**2 / (one * one))
    const = math.fmod(2.0 * math.pi * n * nu * alpha * alpha, 2.0 * math.pi) - math.pi / 4.0
    return EnvelopeDescriptor(
        center_time=tn,
        width=width,
        prefactor=f_mag**-0.5,
        phase_coefficients=(const, 0.0, 1.0 / (2.0 * math.pi * n)),
    )
