"""Multi-branch complex Lambert W function and its off-resonant generalization.

The resonant saddle condition reduces to ``u = w exp(w)``, whose multi-valued
inverse is the Lambert W function.  With detuning the condition becomes
``u = w (nu + exp(2w))**0.5``; this module solves both, keeps track of branch
indices, and provides the Lagrange-reversion series used near the origin.

Branch-cut convention: values on cuts are continuous from above
(counterclockwise), which for negative real arguments means ``arg u = +pi``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import (
    DomainError,
    NumericalFailureError,
    WrongBranchError,
)

__all__ = [
    "NU_CRITICAL",
    "BranchIndex",
    "GeneralizedLambertQuery",
    "BranchPointResult",
    "lambert_w",
    "lambert_series",
    "generalized_lambert",
    "generalized_residual",
    "generalized_series",
    "generalized_series_coefficients",
    "branch_point_w0",
    "branch_points_generalized",
]

#: Detuning value nu0 = 1/(2 e^3) above which the real branch point w0 loses
#: its series representation (derivative singularity).
NU_CRITICAL = 1.0 / (2.0 * math.e**3)

_INV_E = 1.0 / math.e


@dataclass(frozen=True)
class BranchIndex:
    """Integer label of a Lambert branch.

    ``conjugate_copy`` selects the mirrored instance of the w-plane: solving
    with conjugated input on that copy yields the conjugate value.
    """

    k: int
    conjugate_copy: bool = False


@dataclass(frozen=True)
class GeneralizedLambertQuery:
    """One evaluation request for ``u = w (nu + exp(2w))**0.5``."""

    u: complex
    nu: float
    branch: BranchIndex = BranchIndex(0)

    def __post_init__(self):
        if self.nu < 0:
            raise DomainError("nu must be non-negative")


@dataclass(frozen=True)
class BranchPointResult:
    """Branch point w0(nu) with metadata.

    ``value`` is real below the critical detuning and complex above it,
    where the pair of real roots has merged and left the axis.
    """

    value: complex
    above_critical: bool
    from_series: bool


def _branch_int(k) -> int:
    if isinstance(k, BranchIndex):
        return k.k
    return int(k)


def _normalize(u) -> complex:
    u = complex(u)
    if u.imag == 0.0:
        # continuous-from-above convention on the negative real axis
        return complex(u.real, 0.0)
    return u


def _near_branch_point_seed(u: complex, sign: float) -> complex:
    # expansion about u = -1/e in powers of p = sqrt(2(e u + 1))
    p = sign * cmath.sqrt(2.0 * (math.e * u + 1.0))
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3


def _initial_guess(k: int, u: complex) -> complex:
    if k == 0:
        if abs(u + _INV_E) < 0.3:
            return _near_branch_point_seed(u, +1.0)
        if abs(u) < 0.25:
            # few series terms are plenty for a seed
            return u * (1.0 + u * (-1.0 + u * (1.5 - u * 8.0 / 3.0)))
        # log(1+u) tracks W0 from the origin out to the asymptotic regime
        return cmath.log(1.0 + u)
    if k == -1:
        # the square-root expansion about -1/e feeds W_{-1} only from the
        # closed upper half-plane; from below, W_{-1} is far from -1 and the
        # asymptotic seed is the right one
        if abs(u + _INV_E) < 0.3 and u.imag >= 0.0:
            return _near_branch_point_seed(u, -1.0)
        if u.real < 0 and u.imag == 0.0 and -_INV_E < u.real < 0:
            # real branch: w = ln(-u) - ln(-ln(-u))
            t = math.log(-u.real)
            return complex(t - math.log(-t), 0.0)
    if k == 1 and abs(u + _INV_E) < 0.3 and u.imag < 0.0:
        # mirror of the k = -1 case (conjugate symmetry of the branches)
        return _near_branch_point_seed(u, -1.0)
    el = cmath.log(u) + 2.0j * math.pi * k
    return el - cmath.log(el)


def _strip_ok(k: int, w: complex, slack: float = 0.15) -> bool:
    """Lenient containment check for the branch-k region.

    The strips ``Im w in ((2k-1)pi, (2k+1)pi)`` hold only asymptotically; the
    regions of W_{+-1} reach down to the real axis, so one extra pi of margin
    is allowed on the side facing the principal branch.
    """
    im = w.imag
    if k == 0:
        return -math.pi - slack < im < math.pi + slack
    if k > 0:
        return (2 * k - 2) * math.pi - slack < im < (2 * k + 1) * math.pi + slack
    return (2 * k - 1) * math.pi - slack < im < (2 * k + 2) * math.pi + slack


def lambert_w(k, u, tol: float = 1e-13, max_iter: int = 100) -> complex:
    """Branch-k Lambert W: the solution of ``w exp(w) = u``.

    Halley iteration from a branch-aware seed; converges to residual
    ``|w e^w - u| <= tol * max(1, |u|)``.
    """
    k = _branch_int(k)
    u = _normalize(u)
    if u == 0:
        if k == 0:
            return 0.0 + 0.0j
        raise DomainError("u = 0 lies on no branch except k = 0")
    if abs(u + _INV_E) < 1e-15 and k in (0, -1):
        return complex(-1.0, 0.0)

    w = _initial_guess(k, u)
    target = tol * max(1.0, abs(u))
    for _ in range(max_iter):
        ew = cmath.exp(w)
        f = w * ew - u
        if abs(f) <= 0.25 * target:
            break
        wp1 = w + 1.0
        if abs(wp1) < 1e-8:
            # Halley denominator degenerates at the branch point; restart
            # from the square-root expansion on the appropriate side.
            w = _near_branch_point_seed(u, +1.0 if k == 0 else -1.0)
            continue
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w = w - dw
        if abs(dw) < 1e-16 * (2.0 + abs(w)):
            break
    resid = abs(w * cmath.exp(w) - u)
    if resid > target:
        raise NumericalFailureError(
            f"Lambert W_{k}({u}) did not converge (residual {resid:.3e})",
            estimate=resid,
            last_iterate=w,
        )
    if not _strip_ok(k, w):
        raise WrongBranchError(
            f"Lambert iterate {w} escaped the branch-{k} strip", last_iterate=w
        )
    return w


@lru_cache(maxsize=8)
def _series_coefficients(n_terms: int):
    # c_n = (-n)^(n-1)/n!, evaluated through logs to dodge overflow
    n = np.arange(1, n_terms + 1, dtype=float)
    mag = np.exp((n - 1.0) * np.log(n) - [math.lgamma(m + 1.0) for m in n])
    mag[0] = 1.0  # n = 1 term: 0*log(1) handled explicitly
    sign = (-1.0) ** (n - 1.0)
    return sign * mag


def lambert_series(u, n_terms: int = 40) -> complex:
    """Principal-branch W by Lagrange reversion: sum of c_n u^n.

    Valid strictly inside the convergence disc |u| < 1/e.
    """
    u = complex(u)
    if abs(u) >= _INV_E:
        raise DomainError(
            f"|u| = {abs(u):.6f} is outside the convergence disc of radius 1/e"
        )
    if n_terms < 1:
        raise DomainError("n_terms must be positive")
    c = _series_coefficients(n_terms)
    powers = u ** np.arange(1, n_terms + 1)
    return complex(np.sum(c * powers))


def _newton_squared(w: complex, u: complex, nu: float, tol: float, max_iter: int):
    """Newton on G(w) = w^2 (nu + e^{2w}) - u^2 (square of the mapping)."""
    u2 = u * u
    target = tol * max(1.0, abs(u2))
    for _ in range(max_iter):
        e2w = cmath.exp(2.0 * w)
        g = w * w * (nu + e2w) - u2
        if abs(g) <= target:
            return w
        dg = 2.0 * w * (nu + e2w) + 2.0 * w * w * e2w
        if dg == 0:
            break
        step = g / dg
        # damp absurd steps so a good seed is not thrown away
        if abs(step) > 1.0:
            step /= abs(step)
        w = w - step
    raise NumericalFailureError(
        f"generalized Lambert iteration stalled at {w}", last_iterate=w
    )


def generalized_lambert(query, seed=None, tol: float = 1e-13, max_iter: int = 100) -> complex:
    """Solve ``u = w (nu + exp(2w))**0.5`` on the requested branch.

    Without a seed, the solver starts from the resonant value W_k(u) and
    follows a short homotopy in nu.  The square-root branch is the one
    continuous along that path, so the returned w satisfies the squared
    relation ``w^2 (nu + e^{2w}) = u^2`` to the stated tolerance.
    """
    if not isinstance(query, GeneralizedLambertQuery):
        raise DomainError("query must be a GeneralizedLambertQuery")
    k = query.branch.k
    u = _normalize(query.u)
    nu = float(query.nu)
    if query.branch.conjugate_copy:
        # mirrored copy: conjugate in, conjugate out, same branch label
        inner = GeneralizedLambertQuery(
            u=complex(u).conjugate(), nu=nu, branch=BranchIndex(k)
        )
        inner_seed = None if seed is None else complex(seed).conjugate()
        return generalized_lambert(inner, seed=inner_seed, tol=tol, max_iter=max_iter).conjugate()

    if nu == 0.0:
        return lambert_w(k, u, tol=tol, max_iter=max_iter)
    if seed is not None:
        w = _newton_squared(complex(seed), u, nu, tol, max_iter)
    else:
        w = lambert_w(k, u, tol=tol, max_iter=max_iter)
        for nu_step in np.linspace(nu / 10.0, nu, 10):
            w = _newton_squared(w, u, float(nu_step), tol, max_iter)
    if not _strip_ok(k, w, slack=0.8):
        raise WrongBranchError(
            f"generalized Lambert iterate {w} escaped the branch-{k} strip",
            last_iterate=w,
        )
    return w


def generalized_residual(w: complex, u: complex, nu: float) -> float:
    """Residual of the unsquared mapping, square-root branch by continuity.

    The continuous branch of the root flips sign across its cuts, so the
    residual is the smaller of the two sign choices.
    """
    s = w * cmath.sqrt(nu + cmath.exp(2.0 * w))
    return min(abs(s - u), abs(s + u))


def generalized_series_coefficients(nu: float, n_terms: int) -> np.ndarray:
    """Lagrange coefficients c_n(nu) of the detuned reversion series.

    c_n(nu) = (1/n!) d^{n-1}/dw^{n-1} (nu + e^{2w})^{-n/2} at w = 0, computed
    with the power recurrence on Taylor coefficients (no symbolics needed).
    At nu = 0 these reduce to the resonant (-n)^{n-1}/n!.
    """
    if nu < 0:
        raise DomainError("nu must be non-negative")
    if n_terms < 1:
        raise DomainError("n_terms must be positive")
    # Taylor coefficients of A(w) = nu + e^{2w}: a_0 = 1 + nu, a_j = 2^j/j!
    j = np.arange(0, n_terms, dtype=float)
    a = np.exp(j * math.log(2.0) - np.array([math.lgamma(m + 1.0) for m in j]))
    a[0] = 1.0 + nu
    c = np.empty(n_terms, dtype=float)
    for n in range(1, n_terms + 1):
        p = -0.5 * n
        b = np.empty(n, dtype=float)
        b[0] = a[0] ** p
        for m in range(1, n):
            acc = 0.0
            for i in range(1, m + 1):
                acc += (i * (p + 1.0) - m) * a[i] * b[m - i]
            b[m] = acc / (m * a[0])
        c[n - 1] = b[n - 1] / n
    return c


def generalized_series(tau: float, nu: float, n_terms: int = 30) -> complex:
    """Principal-branch detuned trajectory by series: sum c_n(nu) (i sqrt(tau)/2)^n.

    Divergence is detected by monitoring term ratios; tau must be small
    enough for the tail to decay.
    """
    if tau < 0:
        raise DomainError("tau must be non-negative")
    c = generalized_series_coefficients(nu, n_terms)
    x = 0.5j * math.sqrt(tau)
    terms = c * x ** np.arange(1, n_terms + 1)
    mags = np.abs(terms)
    # ignore exact zeros (even/odd structure) when checking growth
    nz = mags[mags > 0]
    if len(nz) >= 6 and np.all(np.diff(nz[-4:]) > 0):
        raise DomainError(
            f"series terms growing at tau = {tau}; outside empirical radius"
        )
    return complex(np.sum(terms))


def branch_point_w0(nu: float, n_terms: int = 200) -> BranchPointResult:
    """Branch point w0(nu): root of nu + e^{2w}(1 + w) = 0 near -1.

    Uses the Lagrange series in (2 e^2 nu) when it converges, then polishes
    with Newton so the residual reaches full double precision; falls back to
    direct root-finding outside the series radius.
    """
    if nu < 0:
        raise DomainError("nu must be non-negative")
    if nu == 0.0:
        return BranchPointResult(value=-1.0, above_critical=False, from_series=True)
    x = 2.0 * math.e**2 * nu
    from_series = x < 0.999 * _INV_E
    if from_series:
        n = np.arange(1, n_terms + 1, dtype=float)
        coef = np.exp((n - 1.0) * np.log(n) - np.array([math.lgamma(m + 1.0) for m in n]))
        w = complex(-1.0 - 0.5 * float(np.sum(coef * x**n)))
    else:
        # the two real roots merge at w = -3/2 when nu = NU_CRITICAL and
        # move off the axis above it; seed from the local square-root law
        # nu - NU_CRITICAL ~ -e^{-3} (w + 3/2)^2
        d2 = (nu - NU_CRITICAL) * math.e**3
        w = complex(-1.5, math.sqrt(d2)) if d2 > 0 else complex(-1.5 + math.sqrt(-d2))
    for _ in range(100):
        e2w = cmath.exp(2.0 * w)
        g = nu + e2w * (1.0 + w)
        dg = e2w * (3.0 + 2.0 * w)
        if dg == 0:
            break
        step = g / dg
        w -= step
        if abs(step) < 1e-16 * (1.0 + abs(w)):
            break
    resid = abs(nu + cmath.exp(2.0 * w) * (1.0 + w))
    if resid > 1e-12:
        raise NumericalFailureError(
            f"branch point solve stalled at w0 = {w}", estimate=resid, last_iterate=w
        )
    if w.imag == 0.0:
        w = w.real
    return BranchPointResult(value=w, above_critical=nu > NU_CRITICAL, from_series=from_series)


def branch_points_generalized(nu: float, n_range) -> list[complex]:
    """Square-root branch points (1/2) ln nu + i pi (n + 1/2) for n in range.

    At nu = 0 the points recede to Re w -> -inf, hence the domain error.
    """
    if nu <= 0:
        raise DomainError("branch points recede to -infinity as nu -> 0")
    half_log = 0.5 * math.log(nu)
    return [complex(half_log, math.pi * (n + 0.5)) for n in n_range]
