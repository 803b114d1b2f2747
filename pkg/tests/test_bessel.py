"""Bessel evaluator checked against scipy.special as an independent oracle."""

import numpy as np
import pytest
from scipy.special import jn_zeros, jv

from nlops.bessel import (
    ball_transform,
    bessel_j,
    bessel_j_branch,
    bessel_zero,
    unit_ball_volume,
)

ORDERS = [0.0, 0.5, 1.0, 1.5, 2.0]


@pytest.mark.parametrize("alpha", ORDERS)
def test_matches_scipy_over_wide_range(alpha):
    t = np.concatenate([np.linspace(1e-4, 8, 400), np.linspace(8, 1000, 2000)])
    np.testing.assert_allclose(bessel_j(alpha, t), jv(alpha, t), atol=5e-13, rtol=0)


@pytest.mark.parametrize("alpha", ORDERS)
def test_branch_overlap_consistency(alpha):
    # series and quadrature branches agree on an overlap strip, and the
    # quadrature and asymptotic branches agree on another
    t_lo = np.linspace(4.0, 10.0, 50)
    d1 = bessel_j_branch(alpha, t_lo, "series") - bessel_j_branch(alpha, t_lo, "poisson")
    assert np.max(np.abs(d1)) < 1e-12
    t_hi = np.linspace(31.0 + alpha**2, 40.0 + alpha**2, 50)
    d2 = bessel_j_branch(alpha, t_hi, "poisson") - bessel_j_branch(alpha, t_hi, "asymptotic")
    assert np.max(np.abs(d2)) < 1e-12


def test_half_order_closed_form():
    t = np.arange(0.1, 50.0001, 0.01)
    closed = np.sqrt(2.0 / (np.pi * t)) * np.sin(t)
    assert np.max(np.abs(bessel_j(0.5, t) - closed)) < 1e-9


def test_scalar_input_returns_scalar():
    val = bessel_j(1.0, 2.5)
    assert np.ndim(val) == 0
    assert np.isclose(val, jv(1.0, 2.5))


def test_negative_argument_rejected():
    with pytest.raises(ValueError):
        bessel_j(0.5, -1.0)


# first five positive zeros of J_1, from an independent tabulation
J1_ZEROS = [
    3.831705970207512,
    7.015586669815619,
    10.173468135062722,
    13.323691936314223,
    16.470630050877634,
]


@pytest.mark.parametrize("k,expected", list(enumerate(J1_ZEROS, start=1)))
def test_j1_zeros_frozen(k, expected):
    assert abs(bessel_zero(1.0, k) - expected) < 1e-11


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.5, 2.0])
def test_zeros_match_scipy_ordering(alpha):
    if alpha == int(alpha):
        expected = jn_zeros(int(alpha), 6)
        got = [bessel_zero(alpha, k) for k in range(1, 7)]
        np.testing.assert_allclose(got, expected, atol=1e-11)
    else:
        # half-integer zeros of J_{1/2} are k*pi exactly
        if alpha == 0.5:
            got = [bessel_zero(0.5, k) for k in range(1, 7)]
            np.testing.assert_allclose(got, np.pi * np.arange(1, 7), atol=1e-11)


def test_zero_residuals_small():
    for alpha in ORDERS:
        for k in (1, 3, 7):
            z = bessel_zero(alpha, k)
            assert abs(bessel_j(alpha, z)) < 1e-11


def test_unit_ball_volumes():
    np.testing.assert_allclose(
        [unit_ball_volume(n) for n in (1, 2, 3)],
        [2.0, np.pi, 4.0 * np.pi / 3.0],
        rtol=1e-15,
    )


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("r", [0.1, 0.7, 2.0])
def test_ball_transform_is_one_at_zero_frequency(n, r):
    assert abs(ball_transform(n, r, 0.0) - 1.0) < 1e-12


def test_ball_transform_1d_is_sinc():
    xi = np.linspace(0.0, 20.0, 4001)
    got = ball_transform(1, 1.0, xi)
    # sin(2 pi xi) / (2 pi xi) with the removable singularity at 0
    expected = np.sinc(2.0 * xi)
    assert np.max(np.abs(got - expected)) < 1e-10


def test_ball_transform_series_branch_continuity():
    # values straddling the small-argument series cut stay consistent
    n, r = 2, 1.0
    cut = 1e-3 / (2.0 * np.pi * r)
    xi = np.array([cut * 0.5, cut * 0.99, cut * 1.01, cut * 2.0])
    vals = ball_transform(n, r, xi)
    assert np.all(np.isfinite(vals))
    assert np.max(np.abs(np.diff(vals))) < 1e-6


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ball_transform_matches_bessel_formula(n):
    from math import gamma, pi

    omega_n = pi ** (n / 2.0) / gamma(n / 2.0 + 1.0)
    r, xi = 0.8, np.linspace(0.3, 9.0, 40)
    expected = jv(n / 2.0, 2.0 * np.pi * r * xi) / (omega_n * (r * xi) ** (n / 2.0))
    np.testing.assert_allclose(ball_transform(n, r, xi), expected, atol=1e-12)


def test_ball_transform_decays():
    xi = np.linspace(30.0, 80.0, 200)
    assert np.max(np.abs(ball_transform(3, 1.0, xi))) < 0.05
