"""Closed-form collapse/revival envelope tests."""

import math

import numpy as np
import pytest

from jcsum import (
    EnvelopeDescriptor,
    InvalidParameterError,
    collapse_detuned,
    collapse_resonant,
    inversion_exact_resonant,
    make_poisson,
    revival_descriptor,
    revival_detuned,
    revival_resonant,
)


def test_collapse_values():
    assert collapse_resonant(5.0, 0.0) == -1.0
    # [TRIVIAL] -e^{-1/2} cos(10)
    assert collapse_resonant(5.0, 1.0) == pytest.approx(-math.exp(-0.5) * math.cos(10.0))


def test_collapse_detuned_reduces_to_resonant():
    for t in (0.0, 0.7, 2.3):
        assert collapse_detuned(5.0, 0.0, t) == pytest.approx(collapse_resonant(5.0, t), abs=1e-15)


def test_collapse_detuned_scalings():
    # envelope e^{-t^2/2(1+nu)}, carrier frequency 2 alpha (1+nu)^{1/2}
    nu, alpha, t = 0.2, 5.0, 1.3
    val = collapse_detuned(alpha, nu, t)
    assert val == pytest.approx(
        -math.exp(-t * t / 2.4) * math.cos(2.0 * alpha * t * math.sqrt(1.2))
    )


def test_collapse_tracks_exact_moderately():
    # the Gaussian collapse law is leading-order only; its true worst-case
    # deviation from the exact sum on [0, 2] at alpha = 5 is ~0.023
    dist = make_poisson(5.0, 1e-16)
    t = np.linspace(0.0, 2.0, 401)
    dev = max(abs(collapse_resonant(5.0, ti) - inversion_exact_resonant(dist, ti)) for ti in t)
    assert dev < 0.03


def test_revival_validation():
    with pytest.raises(InvalidParameterError):
        revival_resonant(5.0, 0, 30.0)
    with pytest.raises(InvalidParameterError):
        revival_detuned(5.0, 0.1, 0, 30.0)
    with pytest.raises(InvalidParameterError):
        revival_descriptor(5.0, 0.0, -1)


def test_revival_peak_amplitude_and_center():
    # at t = t_n the amplitude is (1 + pi^2 n^2)^{-1/4}
    for n in (1, 2):
        tn = 2.0 * math.pi * n * 5.0
        val = revival_resonant(5.0, n, tn)
        amp = (1.0 + math.pi**2 * n**2) ** -0.25
        assert abs(val) <= amp + 1e-12
        phase = tn * tn / (2.0 * math.pi * n) - math.pi / 4.0
        assert val == pytest.approx(-amp * math.cos(phase), abs=1e-12)


def test_revival_simplified_agrees_near_center():
    tn = 2.0 * math.pi * 5.0
    for dt in (-0.5, 0.0, 0.5):
        full = revival_resonant(5.0, 1, tn + dt)
        simp = revival_resonant(5.0, 1, tn + dt, simplified=True)
        assert simp == pytest.approx(full, abs=0.02)


def test_revival_detuned_reduces_to_resonant():
    # at nu = 0 the detuned burst equals the simplified resonant burst
    for n in (1, 2):
        tn = 2.0 * math.pi * n * 5.0
        for dt in (-1.0, 0.0, 1.5):
            assert revival_detuned(5.0, 0.0, n, tn + dt) == pytest.approx(
                revival_resonant(5.0, n, tn + dt, simplified=True), abs=1e-14
            )


def test_revival_tracks_exact_near_first_burst():
    dist = make_poisson(5.0, 1e-16)
    t1 = 2.0 * math.pi * 5.0
    t = np.linspace(t1 - 3.0, t1 + 3.0, 241)
    # leading-order burst: the measured worst case on this window is ~0.085,
    # dominated by phase slip away from the center
    dev = max(abs(revival_resonant(5.0, 1, ti) - inversion_exact_resonant(dist, ti)) for ti in t)
    assert dev < 0.1


def test_descriptor_fields():
    d = revival_descriptor(5.0, 0.0, 1)
    assert d.center_time == pytest.approx(2.0 * math.pi * 5.0)
    assert d.width == pytest.approx(math.sqrt(1.0 + math.pi**2))
    assert d.prefactor == pytest.approx((1.0 + math.pi**2) ** -0.25)
    assert d.phase_coefficients[2] == pytest.approx(1.0 / (2.0 * math.pi))
    d2 = revival_descriptor(5.0, 0.2, 1)
    assert d2.center_time == pytest.approx(2.0 * math.pi * 5.0 * math.sqrt(1.2))


def test_descriptor_validation():
    with pytest.raises(InvalidParameterError):
        EnvelopeDescriptor(center_time=1.0, width=0.0, prefactor=0.5, phase_coefficients=(0, 0, 0))
    with pytest.raises(InvalidParameterError):
        EnvelopeDescriptor(center_time=1.0, width=1.0, prefactor=1.5, phase_coefficients=(0, 0, 0))
