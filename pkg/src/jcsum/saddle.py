"""Saddle-point trajectories on Lambert branches and the asymptotic inversion.

Each trajectory label k picks the saddle curve that crosses the imaginary
axis at i*pi*k (k = 0 is the collapse trajectory starting at the origin).
Internally that curve lives on a standard Lambert branch evaluated on one of
the two imaginary half-axes of u; the mapping is worked out in
``_axis_sign_and_std_branch``.  Phase function phi controls each
contribution: Re phi <= 0 sets the envelope, Im phi the oscillation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .exact import ModelParams
from .exceptions import BranchJumpError, DomainError, InvalidParameterError
from .lambert import (
    BranchIndex,
    GeneralizedLambertQuery,
    _newton_squared,
    generalized_lambert,
    lambert_w,
)

__all__ = [
    "SaddleTrajectory",
    "InversionSeries",
    "CrossingTime",
    "trace_trajectory",
    "phi_resonant",
    "phi_detuned",
    "curvature_factor",
    "saddle_residual",
    "inversion_saddle",
    "inversion_saddle_grid",
    "branch_envelope",
    "revival_times",
    "crossing_times",
]

#: contributions with Re phi below -RE_PHI_CUTOFF/alpha^2 are dropped by the
#: "sum" superposition policy
RE_PHI_CUTOFF = 30.0


def _axis_sign_and_std_branch(k: int) -> tuple[float, int]:
    """Map trajectory label k to (sign of Im u, standard Lambert branch).

    The curve through +i*pi*k satisfies w e^w = i*pi*k*(-1)^k at the
    crossing, which fixes the half-axis of u; the asymptote
    ln u + 2*pi*i*m then fixes the standard branch index m.
    """
    if k == 0:
        return 1.0, 0
    n = abs(k)
    sign = 1.0 if n % 2 == 0 else -1.0
    m = n // 2 if n % 2 == 0 else (n + 1) // 2
    if k < 0:
        sign, m = -sign, -m
    return sign, m


@dataclass(frozen=True)
class SaddleTrajectory:
    """Sampled saddle curve F(tau) with phase and curvature values."""

    branch: BranchIndex
    nu: float
    tau: np.ndarray
    F: np.ndarray
    phi: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.tau) <= 0):
            raise InvalidParameterError("tau samples must be strictly increasing")

    def phi_interpolators(self):
        """Monotone-cubic interpolants of Re phi and Im phi in tau."""
        return (
            PchipInterpolator(self.tau, self.phi.real),
            PchipInterpolator(self.tau, self.phi.imag),
        )


@dataclass
class InversionSeries:
    """Aligned time grid with per-method values and per-branch breakdown."""

    time_grid: np.ndarray
    values: dict
    branch_contributions: dict


@dataclass(frozen=True)
class CrossingTime:
    """Where Re phi of trajectories n and n+1 intersect (lambda-t units)."""

    n: int
    formula: float
    refined: float


def phi_resonant(F, tau: float) -> complex:
    """Resonant phase phi(F) = -tau/(2F) + e^{2F} - 1."""
    F = complex(F)
    if F == 0:
        raise DomainError("phi is singular at F = 0")
    return -tau / (2.0 * F) + cmath.exp(2.0 * F) - 1.0


def phi_detuned(F, tau: float, nu: float) -> complex:
    """Detuned phase phi_nu = -tau/(2F) + 2 F nu + e^{2F} - 1."""
    F = complex(F)
    if F == 0:
        raise DomainError("phi is singular at F = 0")
    return -tau / (2.0 * F) + 2.0 * F * nu + cmath.exp(2.0 * F) - 1.0


def curvature_factor(F, tau: float, nu: float = 0.0) -> complex:
    """Gaussian curvature factor f_nu = 1 + F + 4 F^3 nu / tau.

    At resonance the nu term drops and f = 1 + F for any tau.
    """
    F = complex(F)
    if nu == 0.0:
        return 1.0 + F
    if tau <= 0:
        raise DomainError("tau must be positive for nu > 0")
    return 1.0 + F + 4.0 * F**3 * nu / tau


def saddle_residual(F, tau: float, nu: float = 0.0) -> float:
    """|tau/4 + F^2 (nu + e^{2F})|, zero on an exact saddle."""
    F = complex(F)
    return abs(tau / 4.0 + F * F * (nu + cmath.exp(2.0 * F)))


def _solve_point(k: int, nu: float, tau: float, seed: complex | None) -> complex:
    sign, m = _axis_sign_and_std_branch(k)
    u = sign * 0.5j * math.sqrt(tau)
    if nu == 0.0:
        return lambert_w(m, u)
    if seed is None:
        return generalized_lambert(GeneralizedLambertQuery(u=u, nu=nu, branch=BranchIndex(m)))
    return _newton_squared(seed, u, nu, 1e-13, 100)


def _march(k: int, nu: float, s_from: float, F_from: complex, s_targets) -> list[complex]:
    """Continuation in s = sqrt(tau) from a known point to each target.

    Steps are bisected whenever the iterate moves too far for one step,
    which is how branch jumps are caught.
    """
    out = []
    s_prev, F_prev = s_from, F_from
    for s_t in s_targets:
        while s_prev != s_t:
            step = s_t - s_prev
            while True:
                s_next = s_prev + step
                F_next = _solve_point(k, nu, s_next * s_next, F_prev)
                limit = max(10.0 * abs(step), 1e-9)
                if abs(F_next - F_prev) <= limit or abs(step) < 1e-8:
                    break
                step *= 0.5
            if abs(step) < 1e-8 and abs(F_next - F_prev) > 1e-4:
                raise BranchJumpError(
                    f"trajectory {k} lost continuity near tau = {s_next * s_next:.6g}",
                    tau=s_next * s_next,
                    last_iterate=F_next,
                )
            s_prev, F_prev = s_next, F_next
        out.append(F_prev)
    return out


def trace_trajectory(branch, nu: float, tau_grid) -> SaddleTrajectory:
    """Solve the saddle equation along a tau grid on one trajectory.

    At resonance each point is an independent Lambert evaluation; for
    nu > 0 the curve is continued from an exact anchor (F = i*pi*k at
    tau_k = 4 pi^2 k^2 (1+nu), or the series start for k = 0).
    """
    if not isinstance(branch, BranchIndex):
        branch = BranchIndex(int(branch))
    if branch.conjugate_copy:
        inner = trace_trajectory(BranchIndex(-branch.k), nu, tau_grid)
        return SaddleTrajectory(
            branch=branch,
            nu=nu,
            tau=inner.tau,
            F=np.conj(inner.F),
            phi=np.conj(inner.phi),
            f=np.conj(inner.f),
        )
    k = branch.k
    tau = np.asarray(tau_grid, dtype=float)
    if len(tau) == 0:
        raise InvalidParameterError("tau_grid must be non-empty")
    if np.any(tau <= 0) or np.any(np.diff(tau) <= 0):
        raise InvalidParameterError("tau_grid must be positive and strictly increasing")

    s = np.sqrt(tau)
    if nu == 0.0:
        F = np.array([_solve_point(k, 0.0, t, None) for t in tau])
    elif k == 0:
        F0 = _solve_point(0, nu, tau[0], None)
        F = np.array([F0] + _march(0, nu, s[0], F0, s[1:]))
    else:
        s_anchor = 2.0 * math.pi * abs(k) * math.sqrt(1.0 + nu)
        F_anchor = 1j * math.pi * k
        below = s[s < s_anchor]
        above = s[s >= s_anchor]
        F_below = _march(k, nu, s_anchor, F_anchor, below[::-1])[::-1]
        F_above = _march(k, nu, s_anchor, F_anchor, above)
        F = np.array(list(F_below) + list(F_above))

    phi = np.array([phi_detuned(Fi, ti, nu) for Fi, ti in zip(F, tau)])
    f = np.array([curvature_factor(Fi, ti, nu) for Fi, ti in zip(F, tau)])
    return SaddleTrajectory(branch=branch, nu=nu, tau=tau, F=F, phi=phi, f=f)


def _branch_contribution(alpha2: float, phi: np.ndarray, f: np.ndarray, cutoff: float):
    """Cosine-form steepest-descent contribution with the amplitude cutoff applied."""
    re = phi.real
    live = re > -cutoff / alpha2
    amp = np.zeros_like(re)
    contrib = np.zeros_like(re)
    amp[live] = np.abs(f[live]) ** -0.5 * np.exp(alpha2 * re[live])
    contrib[live] = -amp[live] * np.cos(alpha2 * phi.imag[live] - 0.5 * np.angle(f[live]))
    return contrib, amp


def inversion_saddle_grid(
    params: ModelParams,
    t,
    branches,
    policy: str = "sum",
    cutoff: float = RE_PHI_CUTOFF,
) -> InversionSeries:
    """Saddle-point inversion over a time grid with per-branch breakdown.

    ``policy`` is "sum" (add every requested branch whose amplitude clears
    the cutoff) or "max" (keep only the branch whose Re phi is largest at
    each time).
    """
    if policy not in ("sum", "max"):
        raise InvalidParameterError(f"unknown superposition policy {policy!r}")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0):
        raise InvalidParameterError("t must be >= 0")
    branches = [b if isinstance(b, BranchIndex) else BranchIndex(int(b)) for b in branches]
    if not branches:
        raise InvalidParameterError("at least one branch is required")
    alpha2 = params.alpha**2
    if alpha2 == 0:
        raise InvalidParameterError("alpha must be > 0 for the saddle route")
    tau = t * t / alpha2
    positive = tau > 0
    order = np.argsort(tau[positive])
    tau_sorted = np.unique(tau[positive][order])

    contribs = {}
    rephis = {}
    for b in branches:
        n_rows = len(t)
        contrib = np.zeros(n_rows)
        rephi = np.full(n_rows, -np.inf)
        if len(tau_sorted):
            traj = trace_trajectory(b, params.nu, tau_sorted)
            c_s, _ = _branch_contribution(alpha2, traj.phi, traj.f, cutoff)
            idx = np.searchsorted(tau_sorted, tau[positive])
            contrib[positive] = c_s[idx]
            rephi[positive] = traj.phi.real[idx]
        if np.any(~positive):
            # tau = 0: the collapse trajectory contributes exactly -1
            contrib[~positive] = -1.0 if b.k == 0 and not b.conjugate_copy else 0.0
            rephi[~positive] = 0.0 if b.k == 0 and not b.conjugate_copy else -np.inf
        contribs[b.k] = contrib
        rephis[b.k] = rephi

    if policy == "sum":
        total = np.sum(list(contribs.values()), axis=0)
    else:
        stack_phi = np.vstack([rephis[b.k] for b in branches])
        stack_c = np.vstack([contribs[b.k] for b in branches])
        total = stack_c[np.argmax(stack_phi, axis=0), np.arange(len(t))]
    return InversionSeries(
        time_grid=t, values={"saddle": total}, branch_contributions=contribs
    )


def inversion_saddle(
    params: ModelParams,
    t: float,
    branches,
    policy: str = "sum",
    cutoff: float = RE_PHI_CUTOFF,
):
    """Single-time saddle inversion; returns (total, per-branch breakdown)."""
    series = inversion_saddle_grid(params, [t], branches, policy=policy, cutoff=cutoff)
    breakdown = {k: float(v[0]) for k, v in series.branch_contributions.items()}
    return float(series.values["saddle"][0]), breakdown


def branch_envelope(params: ModelParams, t: float, branch) -> float:
    """|f|^{-1/2} e^{alpha^2 Re phi} for one branch at one time."""
    b = branch if isinstance(branch, BranchIndex) else BranchIndex(int(branch))
    alpha2 = params.alpha**2
    tau = t * t / alpha2
    if tau == 0:
        return 1.0 if b.k == 0 else 0.0
    traj = trace_trajectory(b, params.nu, [tau])
    return float(np.abs(traj.f[0]) ** -0.5 * math.exp(alpha2 * traj.phi.real[0]))


def revival_times(alpha: float, nu: float, n_max: int) -> np.ndarray:
    """Revival centers t_n = 2 pi n |alpha| (1+nu)^{1/2}, n = 1..n_max."""
    if alpha <= 0:
        raise InvalidParameterError("alpha must be > 0")
    n = np.arange(1, n_max + 1, dtype=float)
    return 2.0 * math.pi * n * alpha * math.sqrt(1.0 + nu)


def crossing_times(alpha: float, n_max: int) -> list[CrossingTime]:
    """Resonant crossings of adjacent Re phi curves, formula and refined.

    The closed form is t = 4 pi |alpha| n(n+1)/(2n+1); the refined value
    solves Re phi_n(tau) = Re phi_{n+1}(tau) between the two maxima.
    """
    if alpha <= 0:
        raise InvalidParameterError("alpha must be > 0")
    out = []
    for n in range(1, n_max + 1):
        formula = 4.0 * math.pi * alpha * n * (n + 1) / (2 * n + 1)

        def gap(tau, n=n):
            Fa = _solve_point(n, 0.0, tau, None)
            Fb = _solve_point(n + 1, 0.0, tau, None)
            return phi_resonant(Fa, tau).real - phi_resonant(Fb, tau).real

        tau_lo = 4.0 * math.pi**2 * n**2 * 1.001
        tau_hi = 4.0 * math.pi**2 * (n + 1) ** 2 * 0.999
        tau_c = brentq(gap, tau_lo, tau_hi, xtol=1e-10)
        out.append(CrossingTime(n=n, formula=formula, refined=alpha * math.sqrt(tau_c)))
    return out
