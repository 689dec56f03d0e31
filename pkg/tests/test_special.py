import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from hardedge.errors import AccuracyError, DomainError
from hardedge.special import (EllipticValue, ellip_E, ellip_K, elliptic_value, gamma_fn, gamma_inv, rate_bess,
                              rate_sine, script_H)

HALF_PI = math.pi / 2


def quad_K(m):
    return integrate.quad(lambda x: 1 / math.sqrt(1 - m * math.sin(x) ** 2), 0, HALF_PI, epsabs=1e-13, limit=200)[0]


def quad_E(m):
    return integrate.quad(lambda x: math.sqrt(1 - m * math.sin(x) ** 2), 0, HALF_PI, epsabs=1e-13, limit=200)[0]


# --- K and E ---------------------------------------------------------------


def test_K_E_at_zero():
    assert ellip_K(0.0) == pytest.approx(HALF_PI, abs=1e-12)
    assert ellip_E(0.0) == pytest.approx(HALF_PI, abs=1e-12)


@pytest.mark.parametrize("m", [0.5, -1.0, -2.0, 0.9, 0.999, -8.0, -100.0])
def test_K_E_match_quadrature_of_definition(m):
    assert ellip_K(m) == pytest.approx(quad_K(m), abs=1e-10)
    assert ellip_E(m) == pytest.approx(quad_E(m), abs=1e-10)


def test_reference_values():
    assert ellip_K(0.5) == pytest.approx(1.854074677, abs=1e-9)
    assert ellip_K(-1.0) == pytest.approx(1.311028777, abs=1e-9)
    # E(-2) from the defining integral
    assert ellip_E(-2.0) == pytest.approx(float(mpmath.ellipe(-2)), abs=1e-12)


def test_quad_method_agrees_with_agm():
    ms = np.array([-5.0, -0.3, 0.0, 0.4, 0.95])
    np.testing.assert_allclose(ellip_K(ms, method="quad"), ellip_K(ms), atol=1e-11)
    np.testing.assert_allclose(ellip_E(ms, method="quad"), ellip_E(ms), atol=1e-11)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-1e4, max_value=0.9999))
def test_K_E_agree_with_mpmath(m):
    assert ellip_K(m) == pytest.approx(float(mpmath.ellipk(m)), rel=1e-12, abs=1e-12)
    assert ellip_E(m) == pytest.approx(float(mpmath.ellipe(m)), rel=1e-12, abs=1e-12)


def test_E_at_one_and_domain():
    assert ellip_E(1.0) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(DomainError):
        ellip_K(1.0)
    with pytest.raises(DomainError):
        ellip_K(2.0)
    with pytest.raises(DomainError):
        ellip_E(1.5)


def test_vectorised_shapes():
    out = ellip_K(np.zeros((2, 3)))
    assert out.shape == (2, 3)
    assert isinstance(ellip_K(0.1), float)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-50, max_value=0.999))
def test_elliptic_value_invariants(m):
    ev = elliptic_value(m)
    assert isinstance(ev, EllipticValue)
    assert ev.K > 0 and ev.E > 0
    if m >= 0:
        assert ev.K >= HALF_PI - 1e-15
        assert ev.E <= HALF_PI + 1e-15
    assert ev.H == (1 - m) * ev.K - ev.E


# --- H ---------------------------------------------------------------------


def test_H_special_points():
    assert script_H(0.0) == 0.0
    assert script_H(1.0) == pytest.approx(-1.0, abs=1e-10)
    with pytest.raises(DomainError):
        script_H(1.0001)


def test_H_against_quadrature():
    for m in (-8.0, -0.5, 0.3, 0.7):
        assert script_H(m) == pytest.approx((1 - m) * quad_K(m) - quad_E(m), abs=1e-10)


@settings(max_examples=80, deadline=None)
@given(st.floats(min_value=-1e-3, max_value=1e-3))
def test_H_small_m_expansion(m):
    # allow one rounding of the linear term where m*m underflows
    assert abs(script_H(m) + math.pi * m / 4) <= 10 * m * m + 1e-15 * abs(m) + 5e-324


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-0.3, max_value=0.3).filter(lambda v: abs(v) >= 1e-30))
def test_H_series_matches_extended_precision(m):
    # enough digits that the cancellation leaves ~25 correct ones
    digits = 40 + int(-math.log10(abs(m)))
    with mpmath.workdps(digits):
        mm = mpmath.mpf(m)
        K = mpmath.pi / 2 * mpmath.hyp2f1(0.5, 0.5, 1, mm)
        E = mpmath.pi / 2 * mpmath.hyp2f1(-0.5, 0.5, 1, mm)
        ref = (1 - mm) * K - E
    assert script_H(m) == pytest.approx(float(ref), rel=1e-13, abs=1e-300)


# --- gamma -----------------------------------------------------------------


def test_gamma_branch_values():
    assert gamma_fn(0.0) == 1 / (2 * math.pi)
    assert gamma_fn(1.0) == 0.0
    with pytest.raises(DomainError):
        gamma_fn(1.5)


def test_gamma_branch_continuity():
    for nu in (1e-4, -1e-4):
        assert abs(gamma_fn(nu) - 1 / (2 * math.pi)) < 1e-3


def test_gamma_at_minus_three_dual_quadrature():
    g = gamma_fn(-3.0)
    assert g > 1 / (2 * math.pi)
    assert g == pytest.approx(gamma_fn(-3.0, method="tanh-sinh"), abs=1e-7)


@pytest.mark.parametrize("nu", [-1e6, -400.0, -50.0, -3.0, -0.25, -0.1, -1e-3, 1e-3, 0.1, 0.25, 0.6, 0.99, 1 - 1e-8])
def test_gamma_two_node_families_agree(nu):
    assert gamma_fn(nu) == pytest.approx(gamma_fn(nu, method="tanh-sinh"), abs=1e-7, rel=1e-9)


def test_gamma_strictly_decreasing():
    grid = np.linspace(-50, 1, 1000)
    g = gamma_fn(grid)
    assert np.all(np.diff(g) < 0)


def test_gamma_large_negative_asymptotics():
    nu = -1e8
    assert gamma_fn(nu) == pytest.approx(math.sqrt(1 - nu) / 4, rel=1e-3)


def test_gamma_reports_unattainable_tolerance():
    with pytest.raises(AccuracyError) as info:
        gamma_fn(-3.0, tol=1e-300)
    assert info.value.achieved > 0


# --- inverse and rate functions ---------------------------------------------


def test_gamma_inv_branches():
    assert gamma_inv(0.0) == 1.0
    assert gamma_inv(1 / (2 * math.pi)) == 0.0
    assert gamma_inv(0.3) < 0
    assert 0 < gamma_inv(0.1) < 1
    with pytest.raises(DomainError):
        gamma_inv(-0.1)


def test_gamma_inv_round_trip_on_log_grid():
    for r in np.logspace(-4, 1, 16):
        assert abs(gamma_fn(gamma_inv(r)) - r) < 1e-7


def test_gamma_inv_of_gamma():
    assert gamma_inv(gamma_fn(-2.0)) == pytest.approx(-2.0, abs=1e-7)


def test_rate_special_values():
    assert rate_bess(2 / math.pi).I_bess < 1e-8
    assert rate_bess(0.0).I_bess == pytest.approx(0.5, abs=1e-6)
    assert rate_sine(1 / (2 * math.pi)) == pytest.approx(0.0, abs=1e-12)
    assert rate_sine(0.0) == pytest.approx(1 / 64, abs=1e-12)


def test_rate_evaluation_round_trip():
    ev = rate_bess(1.7)
    assert ev.nu <= 1
    assert ev.gamma_at_nu == pytest.approx(1.7 / 4, abs=1e-8)
    assert ev.quadrature_error_bound < 1e-8


def test_rate_bess_matches_extended_precision_route():
    # independent solve: tanh-sinh gamma and a secant root in mpmath
    rho = 1.3
    target = rho / 4
    nu = mpmath.findroot(lambda v: gamma_fn(float(v), method="tanh-sinh") - target, (-0.6, -0.5),
                         solver="secant", tol=1e-24)
    nu = float(nu)
    with mpmath.workdps(30):
        H = float((1 - nu) * mpmath.ellipk(nu) - mpmath.ellipe(nu))
    assert rate_bess(rho).I_bess == pytest.approx(nu / 2 + rho * H, abs=1e-8)


def test_identity_with_bulk_rate_on_grid():
    for rho in np.linspace(0, 4, 9):
        assert rate_bess(rho).I_bess == pytest.approx(32 * rate_sine(rho / 4), abs=1e-7)
    assert rate_bess(4 / math.pi).I_bess == pytest.approx(32 * rate_sine(1 / math.pi), abs=1e-7)


def test_rate_shape_on_grid():
    grid = np.linspace(0, 4, 41)
    vals = np.array([rate_bess(r).I_bess for r in grid])
    assert np.all(vals >= 0)
    for i in range(len(grid) - 2):
        mid = rate_bess(0.5 * (grid[i] + grid[i + 2])).I_bess
        assert mid <= 0.5 * (vals[i] + vals[i + 2]) + 1e-9
    # zero only at 2/pi
    assert np.all(vals[np.abs(grid - 2 / math.pi) > 0.05] > 1e-8)


def test_rate_sine_monotone_above_minimum():
    grid = np.linspace(1 / (2 * math.pi), 1.5, 15)
    vals = [rate_sine(r) for r in grid]
    assert np.all(np.diff(vals) > 0)


def test_rate_domain():
    with pytest.raises(DomainError):
        rate_bess(-1.0)
    with pytest.raises(DomainError):
        rate_sine(float("nan"))
