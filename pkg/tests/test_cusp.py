"""Model cusp: eigenvalue scan, contour terms, determinant asymptotics."""

from fractions import Fraction

import mpmath as mp
import pytest

from hypdet.constfield import asym_substitute, const, term, zero
from hypdet.cusp import (
    ModelCusp,
    cusp_I_k,
    cusp_counting,
    cusp_f_k,
    cusp_logdet_asymptotic,
    cusp_split_LM,
    cusp_warm_cache,
    cusp_zeta_direct,
    scan_cusp_eigenvalues,
)
from hypdet.errors import DomainError, HypdetError, IncompleteWindowError

CUSP = ModelCusp(1.0)

# First Dirichlet eigenvalue of the model cusp of width 1: first zero of
# r -> K_{ir}(2 pi), located by an independent bisection run.
FIRST_R = 9.76877008351
FIRST_LAM = 95.67886894448


@pytest.fixture(scope="module")
def small_scan():
    return scan_cusp_eigenvalues(CUSP, k_max=3, r_max=15.0)


def test_model_cusp_validation():
    with pytest.raises(HypdetError):
        ModelCusp(0.0)
    with pytest.raises(HypdetError):
        ModelCusp(-2.0)
    assert ModelCusp(2.0).x(3) == pytest.approx(3 * ModelCusp(2.0).x(1))


def test_scan_first_eigenvalue(small_scan):
    first = small_scan[0]
    assert (first.k, first.j) == (1, 1)
    assert first.r == pytest.approx(FIRST_R, abs=1e-6)
    assert first.lam == pytest.approx(FIRST_LAM, rel=1e-9)
    assert first.mult == 2


def test_scan_structure(small_scan):
    lams = [e.lam for e in small_scan]
    assert lams == sorted(lams)
    for e in small_scan:
        assert 1 <= e.k <= 3
        assert e.j >= 1
        assert e.lam == pytest.approx(0.25 + e.r * e.r, rel=1e-14)
        # zeros of K_{ir}(x_k) only exist for r > x_k
        assert e.r > CUSP.x(e.k)


def test_scan_rejects_empty_sector_range():
    with pytest.raises(DomainError):
        scan_cusp_eigenvalues(CUSP, k_max=0, r_max=12.0)


def test_counting(small_scan):
    n100 = cusp_counting(small_scan, 100.0, CUSP, k_max=3, r_max=15.0)
    assert n100 == sum(e.mult for e in small_scan if e.lam <= 100.0)
    assert n100 > 0
    with pytest.raises(IncompleteWindowError):
        cusp_counting(small_scan, 300.0, CUSP, k_max=3, r_max=15.0)


# ---------------------------------------------------------------------------
# Contour integrand f_k and the contour terms I_k
# ---------------------------------------------------------------------------

def test_f_k_vanishes_at_half_and_is_odd():
    v_half = cusp_f_k(0.5, 1, CUSP)
    assert abs(v_half) < 1e-10
    plus, minus = cusp_f_k(0.8, 1, CUSP), cusp_f_k(-0.8, 1, CUSP)
    assert abs(plus + minus) < 1e-10 * max(1.0, abs(plus))
    assert plus != 0


def test_f_k_rejects_k_below_one():
    with pytest.raises(DomainError):
        cusp_f_k(0.5, 0, CUSP)


def test_I_k_domain():
    for bad_s in (1.0, 2.0, 0.5, 2.5):
        with pytest.raises(DomainError):
            cusp_I_k(bad_s, 1, CUSP)


def test_I_k_decays_in_k():
    cusp_warm_cache(CUSP, [1, 2])
    i1 = cusp_I_k(1.5, 1, CUSP)
    i2 = cusp_I_k(1.5, 2, CUSP)
    assert set(i1) >= {"value", "uncertainty"}
    assert abs(i2["value"]) < abs(i1["value"])
    assert i1["uncertainty"] >= 0


def test_split_LM_recomposes_I_k():
    cusp_warm_cache(CUSP, [1])
    ik = cusp_I_k(1.5, 1, CUSP)
    lk, mk = cusp_split_LM(1.5, 1, CUSP)
    total = lk["value"] + mk["value"]
    budget = ik["uncertainty"] + lk["uncertainty"] + mk["uncertainty"]
    assert abs(total - ik["value"]) <= max(budget, 1e-12 * abs(ik["value"]))


# ---------------------------------------------------------------------------
# Direct zeta and the determinant asymptotics
# ---------------------------------------------------------------------------

def test_zeta_direct_report():
    rep = cusp_zeta_direct(CUSP, [1.75], k_max=3, r_max=15.0)[0]
    assert rep.s == 1.75
    assert rep.count == len(scan_cusp_eigenvalues(CUSP, k_max=3, r_max=15.0))
    assert rep.value > 0
    assert rep.tail_estimate >= 0
    assert rep.value_total == pytest.approx(rep.value + rep.tail_estimate)


def test_logdet_asymptotic_exact():
    sym = cusp_logdet_asymptotic()
    assert sym.coeff("a") == term("PI", Fraction(1, 3))
    assert sym.coeff("log_a") == const(Fraction(1, 2))
    assert sym.constant == zero()
    assert sym.has_small_o
    out = asym_substitute(sym)
    assert out.coeff_L == const(Fraction(1, 6))
    assert out.coeff_LL == const(Fraction(1, 2))
    assert out.constant == term("LOG2", Fraction(1, 6))
