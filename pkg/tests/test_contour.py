"""Hankel-contour quadrature tests.

The cosine self-test has a closed-form answer; the inversion integral is
checked against the truncated-sum oracle.
"""

import math

import numpy as np
import pytest

from jcsum import (
    HankelPath,
    InvalidParameterError,
    ModelParams,
    NumericalFailureError,
    PhaseFunction,
    build_cosine_path,
    build_default_path,
    cos_via_hankel,
    inversion_contour_detuned,
    inversion_contour_resonant,
    inversion_exact_resonant,
    make_poisson,
)


@pytest.mark.parametrize("x", [0.0, 0.5, 1.0, math.pi, 10.0, 50.0, 100.0])
def test_cosine_selftest(x):
    assert cos_via_hankel(x) == pytest.approx(math.cos(x), abs=1e-10)


def test_cosine_on_inversion_path():
    # the adaptive inversion path must also integrate the cosine kernel
    # correctly (small x only: the integrand grows like e^{x^2/4a} off the
    # saddle and the shared front radius makes larger x cancel catastrophically)
    path = build_default_path(5.0, (2.0 * math.pi) ** 2)
    for x in (0.0, 0.5):
        assert cos_via_hankel(x, path=path) == pytest.approx(math.cos(x), abs=1e-9)


def test_phase_function():
    phase = PhaseFunction(tau=2.0, nu=0.3)
    z = 0.4 + 0.7j
    expected = 2.0 * z - 0.3 / z + np.exp(-1.0 / z) - 1.0
    assert phase(z) == pytest.approx(expected, abs=1e-15)
    # first/second derivatives against central differences
    h = 1e-5
    d1 = (phase(z + h) - phase(z - h)) / (2 * h)
    d2 = (phase(z + h) - 2 * phase(z) + phase(z - h)) / h**2
    assert phase.d1(z) == pytest.approx(d1, abs=1e-8)
    assert phase.d2(z) == pytest.approx(d2, abs=1e-4)
    with pytest.raises(InvalidParameterError):
        phase(0.0)


def test_path_validation_invariants():
    path = build_default_path(5.0, 4.0)
    path.validate()
    z = path.node_points
    assert np.all(np.abs(z) > 0)
    # off the cut: no node on the negative real axis
    on_cut = (z.real < 0) & (np.abs(z.imag) < 1e-14)
    assert not np.any(on_cut)
    # conjugation symmetry in traversal order
    scale = np.abs(z).max()
    assert np.allclose(z[::-1], np.conj(z), atol=1e-9 * scale)


def test_resonant_matches_exact_spot_checks():
    dist = make_poisson(5.0, 1e-16)
    for t in (0.5, 2.0, 10.0, 31.4, 45.0):
        exact = inversion_exact_resonant(dist, t)
        assert inversion_contour_resonant(5.0, t) == pytest.approx(exact, abs=1e-7)


def test_resonant_other_alphas():
    for alpha in (2.0, 8.0):
        dist = make_poisson(alpha, 1e-16)
        for t in (1.0, 2.0 * math.pi * alpha):
            exact = inversion_exact_resonant(dist, t)
            assert inversion_contour_resonant(alpha, t) == pytest.approx(exact, abs=1e-6)


def test_t_zero_bypass():
    assert inversion_contour_resonant(5.0, 0.0) == -1.0
    params = ModelParams(alpha=5.0, nu=0.2)
    assert inversion_contour_detuned(params, 0.0) == -1.0


def test_full_output_error_estimate():
    value, err, imag = inversion_contour_resonant(5.0, 3.0, full_output=True)
    assert err < 1e-6
    assert imag < 1e-8
    dist = make_poisson(5.0, 1e-16)
    assert abs(value - inversion_exact_resonant(dist, 3.0)) < 10 * max(err, 1e-9)


def test_detuned_reduces_to_resonant():
    params = ModelParams(alpha=5.0, nu=0.0)
    for t in (1.0, 7.0, 31.4):
        assert inversion_contour_detuned(params, t) == pytest.approx(
            inversion_contour_resonant(5.0, t), abs=1e-10
        )


def test_path_independence():
    # deforming the contour (within the allowed region) must not change the value
    alpha, t = 5.0, 12.0
    tau = (t / alpha) ** 2
    baseline = inversion_contour_resonant(alpha, t)
    alt1 = build_default_path(alpha, tau, arm_angle=0.35)
    alt2 = build_default_path(alpha, tau, front_radius=0.5 * min(1.2, 0.35 / tau))
    for path in (alt1, alt2):
        assert inversion_contour_resonant(alpha, t, path=path) == pytest.approx(
            baseline, abs=1e-8
        )


def test_tolerance_contract_raises():
    with pytest.raises(NumericalFailureError) as exc:
        inversion_contour_resonant(5.0, 10.0, tol=1e-300)
    assert exc.value.estimate is not None and exc.value.estimate > 1e-300


def test_invalid_inputs():
    with pytest.raises(InvalidParameterError):
        inversion_contour_resonant(0.0, 1.0)
    with pytest.raises(InvalidParameterError):
        inversion_contour_resonant(5.0, -1.0)


def test_cosine_path_structure():
    path = build_cosine_path(10.0)
    assert isinstance(path, HankelPath)
    path.validate()
