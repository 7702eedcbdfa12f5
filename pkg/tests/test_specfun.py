"""Special functions: Bessel, E1, hypergeometric, Hurwitz zeta, L-functions."""

from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypdet.errors import DomainError, HypdetError, PoleError
from hypdet.specfun import (
    CHI3,
    CHI4,
    DirichletCharacter,
    Precision,
    bessel_k_imag,
    bessel_k_real,
    bessel_u_poly,
    bessel_uniform_asym,
    dirichlet_l,
    dirichlet_l_at_zero,
    dirichlet_l_deriv_at_zero,
    dlog_bessel_k,
    exp_integral_e1,
    exp_integral_e1_scaled,
    hurwitz_zeta,
    hyp2f1,
    riemann_zeta_derivatives,
)


# ---------------------------------------------------------------------------
# Bessel K
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("x", [0.5, 2.0, 10.0, 50.0])
def test_bessel_k_half_closed_form(x):
    got = bessel_k_real(0.5, x)
    with mp.workdps(25):
        want = mp.sqrt(mp.pi / (2 * mp.mpf(x))) * mp.exp(-mp.mpf(x))
    assert abs(got - want) / abs(want) < 1e-10


@pytest.mark.parametrize("v,x", [(0.3, 2.7), (1.7, 0.9), (3.2, 14.0)])
def test_bessel_k_real_against_mpmath(v, x):
    got = bessel_k_real(v, x)
    with mp.workdps(25):
        want = mp.besselk(v, x)
    assert abs(got - want) / abs(want) < 1e-10


@pytest.mark.parametrize("r,x", [(1.5, 2.0), (5.0, 1.0), (0.0, 2.0)])
def test_bessel_k_imag_against_mpmath(r, x):
    got = bessel_k_imag(r, x)
    with mp.workdps(30):
        want = mp.besselk(mp.mpc(0, r), mp.mpf(x)).real
    assert abs(got - want) / abs(want) < 1e-9


def test_bessel_k_imag_underflow_sentinel():
    # e^{-pi r / 2} is far below the absolute floor: reported as exact zero
    assert bessel_k_imag(450.0, 1.0) == 0


def test_dlog_bessel_k_matches_finite_difference():
    t, x, h = 3.0, 2.0, 1e-4
    got = dlog_bessel_k(t, x, mode="first")
    fp = mp.log(bessel_k_imag(t + h, x))
    fm = mp.log(bessel_k_imag(t - h, x))
    want = (fp - fm) / (2 * h)
    assert abs(got - want) / abs(want) < 1e-5


def test_dlog_bessel_k_rejects_bad_mode():
    with pytest.raises(HypdetError):
        dlog_bessel_k(1.0, 1.0, mode="third")


# ---------------------------------------------------------------------------
# Exponential integral
# ---------------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.01, max_value=30.0))
def test_e1_against_mpmath(x):
    got = exp_integral_e1(x)
    with mp.workdps(25):
        want = mp.e1(x)
    assert abs(got - want) / abs(want) < 1e-11


@pytest.mark.parametrize("x", [10.0, 100.0])
def test_e1_envelope(x):
    # e^{-x}/(x+1) < E1(x) < e^{-x}/x
    v = exp_integral_e1(x)
    lo = mp.exp(-x) / (x + 1)
    hi = mp.exp(-x) / x
    assert lo < v < hi


def test_e1_domain():
    with pytest.raises(DomainError):
        exp_integral_e1(0.0)
    with pytest.raises(DomainError):
        exp_integral_e1(-1.0)


def test_e1_scaled():
    with mp.workdps(25):
        want = mp.exp(5) * mp.e1(5)
    assert abs(exp_integral_e1_scaled(5.0) - want) / want < 1e-11
    big = exp_integral_e1_scaled(500.0)
    assert 1.0 / 501 < big < 1.0 / 500


# ---------------------------------------------------------------------------
# Gauss hypergeometric
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("a,b,c,z", [
    (1.0, 1.0, 3.5, -0.7),
    (0.5, 1.25, 2.0, 0.3),
    (1.0, 1.0, 4.0, -15.0),
])
def test_hyp2f1_against_mpmath(a, b, c, z):
    got = hyp2f1(a, b, c, z)
    with mp.workdps(25):
        want = mp.hyp2f1(a, b, c, z)
    assert abs(got - want) / abs(want) < 1e-10


# ---------------------------------------------------------------------------
# Hurwitz zeta
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("x", [0.25, 1.0, 3.5])
def test_hurwitz_at_zero(x):
    assert abs(hurwitz_zeta(0.0, x) - (0.5 - x)) < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.05, max_value=8.0))
def test_hurwitz_at_zero_property(x):
    assert abs(hurwitz_zeta(0.0, x) - (0.5 - x)) < 1e-9


def test_hurwitz_exact_zero_at_half():
    # zeta_H(0, 1/2) = 0; the near-zero guard must not misreport this
    assert abs(hurwitz_zeta(0.0, 0.5)) < 1e-12


def test_hurwitz_reduces_to_riemann():
    got = hurwitz_zeta(1.7, 1.0)
    with mp.workdps(25):
        want = mp.zeta(mp.mpf("1.7"))
    assert abs(got - want) / want < 1e-11
    assert abs(hurwitz_zeta(2.0, 1.0) - mp.pi ** 2 / 6) < 1e-11


def test_hurwitz_negative_integer_is_bernoulli():
    # zeta_H(-1, x) = -B_2(x)/2 = -(x^2 - x + 1/6)/2
    x = 0.7
    want = -(x * x - x + 1.0 / 6) / 2
    assert abs(hurwitz_zeta(-1.0, x) - want) < 1e-10


def test_hurwitz_domain_and_pole():
    with pytest.raises(PoleError):
        hurwitz_zeta(1.0, 2.0)
    with pytest.raises(DomainError):
        hurwitz_zeta(2.0, 0.0)
    with pytest.raises(DomainError):
        hurwitz_zeta(2.0, -1.0)


# ---------------------------------------------------------------------------
# Riemann zeta values and derivatives
# ---------------------------------------------------------------------------

def test_zeta_values():
    assert abs(riemann_zeta_derivatives(0, -1.0) - (-1.0 / 12)) < 1e-12
    assert abs(riemann_zeta_derivatives(0, 0.0) - (-0.5)) < 1e-12


def test_zeta_derivative_values():
    with mp.workdps(25):
        zp0 = -mp.log(2 * mp.pi) / 2
        zp1 = mp.mpf(1) / 12 - mp.log(mp.glaisher)
    assert abs(riemann_zeta_derivatives(1, 0.0) - zp0) < 1e-9
    assert abs(riemann_zeta_derivatives(1, -1.0) - zp1) < 1e-9


def test_zeta_derivative_domain():
    with pytest.raises(DomainError):
        riemann_zeta_derivatives(2, 0.5)
    with pytest.raises(PoleError):
        riemann_zeta_derivatives(1, 1.0)


# ---------------------------------------------------------------------------
# Dirichlet L-functions for the characters mod 4 and mod 3
# ---------------------------------------------------------------------------

def test_character_values():
    assert CHI4.chi(1) == 1 and CHI4.chi(3) == -1
    assert CHI4.chi(2) == 0 and CHI4.chi(7) == -1 and CHI4.chi(9) == 1
    assert CHI3.chi(2) == -1 and CHI3.chi(3) == 0 and CHI3.chi(4) == 1


def test_l_values_against_closed_forms():
    with mp.workdps(25):
        assert abs(dirichlet_l(CHI4, 2.0) - mp.catalan) / mp.catalan < 1e-11
        assert abs(dirichlet_l(CHI4, 1.0) - mp.pi / 4) < 1e-11
        assert abs(dirichlet_l(CHI3, 1.0) - mp.pi / (3 * mp.sqrt(3))) < 1e-11


def test_l_at_zero_exact():
    assert dirichlet_l_at_zero(CHI4) == Fraction(1, 2)
    assert dirichlet_l_at_zero(CHI3) == Fraction(1, 3)


def test_l_derivative_at_zero():
    # L'(0, chi_4) = (1/2) * (L'/L)(0, chi_4)
    want = mp.mpf("0.78318878541367355294389069379822205618") / 2
    assert abs(dirichlet_l_deriv_at_zero(CHI4) - want) < 1e-12
    want3 = mp.mpf("0.94819882667262081013868842189532536357") / 3
    assert abs(dirichlet_l_deriv_at_zero(CHI3) - want3) < 1e-12


# ---------------------------------------------------------------------------
# Uniform large-order asymptotics
# ---------------------------------------------------------------------------

def test_u_polynomials_exact():
    assert bessel_u_poly(0) == {0: Fraction(1)}
    assert bessel_u_poly(1) == {1: Fraction(1, 8), 3: Fraction(-5, 24)}
    assert bessel_u_poly(2) == {
        2: Fraction(9, 128), 4: Fraction(-77, 192), 6: Fraction(385, 1152)
    }


def _uniform_rel_residual(v, z, ell):
    approx = bessel_uniform_asym(v, z, ell)
    exact = bessel_k_real(v, v * z)
    return abs(approx - exact) / abs(exact)


def test_uniform_asym_converges_in_order():
    res = [_uniform_rel_residual(v, 1.0, 4) for v in (5.0, 10.0, 20.0)]
    assert res[0] > res[1] > res[2]
    assert res[2] < 1e-6


def test_precision_digits():
    assert Precision(rel_tol=1e-13).digits == 14
    assert Precision(rel_tol=1e-3).digits >= 6
    assert isinstance(DirichletCharacter(4, ((1, 1), (3, -1))).chi(11), int)
