"""Arithmetic on the modular orbifold: psi rows, self-intersection, Z'(1)."""

from fractions import Fraction

import mpmath as mp
import pytest

from hypdet.constfield import const, const_reduce, term, zero
from hypdet.errors import CoefficientMismatchError, InvalidSignatureError
from hypdet.surgery import FuchsianSignature, INF
import hypdet.x1arith as x1
from hypdet.x1arith import (
    DISPLAY_BASIS,
    EXPECTED_COEFFICIENTS,
    X1Data,
    finite_intersections,
    l2_term,
    omega_self_intersection,
    omega_self_intersection_raw,
    psi_cusp_contribution,
    psi_degree,
    psi_order2_row,
    solve_special_value,
    x1_data,
)

LOGZP_40 = mp.mpf("-0.5161061111504197161018745956567107574112")

# The eight coefficients on (LPCHI4, LPCHI3, ZDZ0, ZDZ1, GAMMA, LOG3, LOG2, ONE)
VECTOR = (
    Fraction(1, 4), Fraction(13, 27), Fraction(73, 72), Fraction(-37, 36),
    Fraction(-5, 36), Fraction(5, 12), Fraction(-167, 216), Fraction(-5, 6),
)


def test_x1_data_is_locked_to_the_modular_signature():
    data = x1_data()
    assert data.signature == FuchsianSignature(0, (INF, 2, 3))
    assert data.sections == ("cusp", "order2", "order3")
    assert data.weights == (Fraction(1), Fraction(1, 2), Fraction(2, 3))
    with pytest.raises(InvalidSignatureError):
        X1Data(signature=FuchsianSignature(0, (INF, 2, 4)))
    with pytest.raises(InvalidSignatureError):
        X1Data(sections=("cusp", "order2"))


def test_finite_intersections():
    fi = finite_intersections()
    assert fi[("cusp", "order2")] == zero()
    assert fi[("cusp", "order3")] == zero()
    assert fi[("order2", "order3")] == term("LOG2", 6) + term("LOG3", 3)


def test_psi_rows():
    assert psi_cusp_contribution() == zero()
    pair = finite_intersections()[("order2", "order3")]
    log_4pi = term("LOG2", 2) + term("LOGPI")
    assert psi_order2_row() == term("HFI", 4) - 2 * pair + 2 * log_4pi


def test_psi_degree_forms_agree():
    pair = finite_intersections()[("order2", "order3")]
    log_4pi = term("LOG2", 2) + term("LOGPI")
    form_a = (
        term("HFI", 3) + term("HFRHO", Fraction(16, 3))
        - Fraction(43, 18) * pair + Fraction(25, 6) * log_4pi
    )
    got = psi_degree()
    assert got == form_a
    form_b = (
        -Fraction(3, 2) * term("LPCHI4") - Fraction(8, 3) * term("LPCHI3")
        + Fraction(25, 6) * term("ZDZ0") - Fraction(17, 2) * term("LOG3")
        - Fraction(15, 2) * term("LOG2")
    )
    assert const_reduce(got) == const_reduce(form_b)


def test_omega_self_intersection():
    raw = omega_self_intersection_raw()
    assert raw == term("ZDZ1", -12) + const(-6)
    full = omega_self_intersection()
    assert full.coeff("ZDZ1") == Fraction(-1, 3)
    assert const_reduce(full).coeff("ZP1") == Fraction(4)


def test_l2_term():
    assert l2_term() == term("LOG2", 6) + term("LOG3", 6)


def test_special_value_vector_and_numeric():
    display, numeric = solve_special_value(digits=12)
    got = tuple(display.coeff(b) for b in DISPLAY_BASIS)
    assert got == VECTOR
    assert EXPECTED_COEFFICIENTS == VECTOR
    assert abs(mp.mpf(numeric) - LOGZP_40) < mp.mpf("1e-12")


def test_special_value_forty_digit_regression():
    _, numeric = solve_special_value(digits=40)
    with mp.workdps(50):
        assert abs(mp.mpf(numeric) - LOGZP_40) < mp.mpf("1e-38")


def test_transcription_mutation_is_caught(monkeypatch):
    real = x1.cgamma_direct

    def bumped(sig):
        return real(sig) + const(Fraction(1, 216))

    monkeypatch.setattr(x1, "cgamma_direct", bumped)
    with pytest.raises(CoefficientMismatchError):
        solve_special_value(digits=12)
