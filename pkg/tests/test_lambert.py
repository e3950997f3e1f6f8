"""Lambert-W unit tests against independent oracles.

Golden constants were frozen from a 40-digit mpmath evaluation; the grid
tests use scipy.special.lambertw as a second, independent implementation.
"""

import cmath
import math

import numpy as np
import pytest
import scipy.special

from jcsum import (
    NU_CRITICAL,
    BranchIndex,
    GeneralizedLambertQuery,
    DomainError,
    branch_point_w0,
    branch_points_generalized,
    generalized_lambert,
    generalized_residual,
    generalized_series,
    generalized_series_coefficients,
    lambert_series,
    lambert_w,
)

# [DERIVED] mpmath.lambertw at 40 digits
GOLDEN = [
    (0, 1.0, 0.567143290409783873 + 0.0j),
    (0, -0.2 + 0.1j, -0.22693377251575794653 + 0.16498647002015459513j),
    (-1, -0.25, -2.1532923641103496492 + 0.0j),
    (2, 3 + 4j, -0.86554679943333993562 + 11.849956798331992027j),
    (-3, 0.5 - 0.5j, -3.2467245083086947106 - 17.884575791480784108j),
]


@pytest.mark.parametrize("k,u,expected", GOLDEN)
def test_golden_values(k, u, expected):
    assert lambert_w(k, u) == pytest.approx(expected, abs=1e-13)


def test_residual_contract_on_grid():
    rng = np.random.default_rng(42)
    for k in range(-5, 6):
        r = np.exp(rng.uniform(math.log(0.05), math.log(50.0), 40))
        th = rng.uniform(-math.pi + 1e-6, math.pi - 1e-6, 40)
        for u in r * np.exp(1j * th):
            w = lambert_w(k, u)
            assert abs(w * cmath.exp(w) - u) <= 1e-12 * max(1.0, abs(u))


def test_agrees_with_scipy_on_grid():
    rng = np.random.default_rng(7)
    for k in (-2, -1, 0, 1, 3):
        u = rng.uniform(-3, 3, 25) + 1j * rng.uniform(-3, 3, 25)
        u = u[np.abs(u) > 0.05]
        for ui in u:
            if ui.imag == 0 and ui.real <= 0:
                continue
            assert lambert_w(k, ui) == pytest.approx(
                complex(scipy.special.lambertw(ui, k)), rel=1e-10, abs=1e-10
            )


def test_branch_point_value():
    assert lambert_w(0, -1.0 / math.e) == pytest.approx(-1.0, abs=1e-6)
    assert lambert_w(-1, -1.0 / math.e) == pytest.approx(-1.0, abs=1e-6)


@pytest.mark.parametrize("k", [-1, 1])
@pytest.mark.parametrize(
    "du", [0.1, 0.1j, -0.1j, 0.05 + 0.05j, 0.05 - 0.05j, -0.05 + 0.02j, -0.05 - 0.02j]
)
def test_near_branch_point_both_half_planes(k, du):
    # regression: for u just below the axis, W_{-1} is far from -1 and the
    # square-root seed must not be used there (mirrored for W_{+1} above)
    u = -1.0 / math.e + du
    assert lambert_w(k, u) == pytest.approx(
        complex(scipy.special.lambertw(u, k)), rel=1e-10, abs=1e-10
    )


def test_conjugation_symmetry():
    rng = np.random.default_rng(3)
    for _ in range(30):
        u = complex(rng.uniform(-2, 2), rng.uniform(0.01, 2))
        for k in (-2, -1, 0, 1, 2):
            assert lambert_w(-k, u.conjugate()) == pytest.approx(
                lambert_w(k, u).conjugate(), rel=1e-11, abs=1e-11
            )


def test_zero_argument():
    assert lambert_w(0, 0.0) == 0.0
    with pytest.raises(DomainError):
        lambert_w(-1, 0.0)


def test_series_small_argument():
    rng = np.random.default_rng(11)
    for _ in range(40):
        u = complex(rng.uniform(-0.07, 0.07), rng.uniform(-0.07, 0.07))
        assert lambert_series(u) == pytest.approx(lambert_w(0, u), abs=1e-13)


def test_series_outside_disc_raises():
    with pytest.raises(DomainError):
        lambert_series(0.4)
    with pytest.raises(DomainError):
        lambert_series(1.0 / math.e)


def test_series_coefficients_leading():
    # c_1 = 1, c_2 = -1, c_3 = 3/2, c_4 = -8/3
    assert lambert_series(1e-300) / 1e-300 == pytest.approx(1.0)
    u = 0.01
    resid = lambert_series(u, 4) - (u - u**2 + 1.5 * u**3 - 8.0 / 3.0 * u**4)
    assert abs(resid) < 1e-16


def test_generalized_reduces_to_resonant():
    q = GeneralizedLambertQuery(u=0.3 + 0.2j, nu=0.0, branch=BranchIndex(1))
    assert generalized_lambert(q) == pytest.approx(lambert_w(1, 0.3 + 0.2j), abs=1e-13)


def test_generalized_residual_contract():
    rng = np.random.default_rng(5)
    for _ in range(25):
        u = complex(rng.uniform(-2, 2), rng.uniform(0.05, 2))
        nu = rng.uniform(0.0, 0.3)
        for k in (0, 1, 2):
            w = generalized_lambert(GeneralizedLambertQuery(u=u, nu=nu, branch=BranchIndex(k)))
            assert generalized_residual(w, u, nu) <= 1e-12 * max(1.0, abs(u))


def test_generalized_conjugate_copy():
    q = GeneralizedLambertQuery(u=0.4 + 0.6j, nu=0.1, branch=BranchIndex(1))
    w = generalized_lambert(q)
    qc = GeneralizedLambertQuery(
        u=(0.4 + 0.6j).conjugate(), nu=0.1, branch=BranchIndex(1, conjugate_copy=True)
    )
    assert generalized_lambert(qc) == pytest.approx(w.conjugate(), abs=1e-12)


def test_generalized_series_coefficients_resonant_limit():
    c = generalized_series_coefficients(0.0, 8)
    n = np.arange(1, 9, dtype=float)
    expected = (-n) ** (n - 1) / scipy.special.factorial(n)
    assert np.allclose(c, expected, rtol=1e-12)


def test_generalized_series_matches_solver_small_tau():
    tau, nu = 0.05, 0.1
    w_series = generalized_series(tau, nu)
    u = 0.5j * math.sqrt(tau)
    assert generalized_residual(w_series, u, nu) < 1e-10


def test_branch_point_w0_root_and_flags():
    for nu in (1e-3, 1e-2, 0.02):
        r = branch_point_w0(nu)
        assert abs(nu + math.exp(2.0 * r.value) * (1.0 + r.value)) < 1e-12
        assert not r.above_critical
        assert r.from_series
    assert branch_point_w0(0.0).value == -1.0
    # above the critical detuning the real pair has merged and gone complex
    r = branch_point_w0(0.1)
    assert r.above_critical and not r.from_series
    w = complex(r.value)
    assert w.imag != 0.0
    assert abs(0.1 + cmath.exp(2.0 * w) * (1.0 + w)) < 1e-12


def test_nu_critical_value():
    assert round(NU_CRITICAL, 6) == 0.024894


def test_branch_points_generalized():
    pts = branch_points_generalized(0.04, range(0, 3))
    for n, p in enumerate(pts):
        assert p == pytest.approx(complex(0.5 * math.log(0.04), math.pi * (n + 0.5)))
        # each lies where nu + e^{2w} vanishes
        assert abs(0.04 + cmath.exp(2.0 * p)) < 1e-15
    with pytest.raises(DomainError):
        branch_points_generalized(0.0, range(2))
