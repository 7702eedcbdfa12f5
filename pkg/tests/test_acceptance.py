"""Acceptance battery: one test per headline check of the package.

Each criterion is a single test function so the -v output shows exactly one
pass/fail line per criterion.  Criterion 6 ends with a check that is known
to fail for a structural reason (the truncated geodesic product and the
closed-form special value follow different normalization conventions); the
failure message carries the full quantitative picture.  See the README
section "Known numerical finding".
"""

import math
import time
from fractions import Fraction

import mpmath as mp
import pytest

from hypdet.cone import (
    ModelCone,
    cone_contour_sum,
    cone_desingularization_check,
    cone_logdet_asymptotic,
    cone_zeta_direct,
    scan_cone_eigenvalues,
)
from hypdet.constfield import const, const_reduce, log_int, term, zero
from hypdet.cusp import (
    ModelCusp,
    cusp_contour_sum,
    cusp_logdet_asymptotic,
    cusp_warm_cache,
    cusp_zeta_direct,
)
from hypdet.qforms import (
    class_number,
    class_number_brute,
    is_discriminant,
    pell_fundamental,
    pell_minimality_scan,
    sarnak_log_z,
    zprime1_estimate,
)
from hypdet.specfun import (
    CHI3,
    CHI4,
    bessel_k_real,
    bessel_uniform_asym,
    dirichlet_l_at_zero,
    exp_integral_e1,
    hurwitz_zeta,
)
from hypdet.surgery import (
    assemble_naive_logdet,
    cgamma_direct,
    cgamma_from_assembly,
    expected_divergence,
    parse_signature,
    reconcile,
)
from hypdet.x1arith import DISPLAY_BASIS, solve_special_value


def _reference_log_zprime(dps: int = 50):
    """log Z'(1) evaluated from mpmath primitives only (no package code)."""
    with mp.workdps(dps):
        lp4 = -2 * mp.log(2) + 2 * (mp.loggamma(mp.mpf(1) / 4) - mp.loggamma(mp.mpf(3) / 4))
        lp3 = -mp.log(3) + 3 * (mp.loggamma(mp.mpf(1) / 3) - mp.loggamma(mp.mpf(2) / 3))
        zdz0 = mp.log(2 * mp.pi)
        zdz1 = -1 + 12 * mp.log(mp.glaisher)
        return (
            mp.mpf(1) / 4 * lp4 + mp.mpf(13) / 27 * lp3 + mp.mpf(73) / 72 * zdz0
            - mp.mpf(37) / 36 * zdz1 - mp.mpf(5) / 36 * mp.euler
            + mp.mpf(5) / 12 * mp.log(3) - mp.mpf(167) / 216 * mp.log(2)
            - mp.mpf(5) / 6
        )


def test_criterion_1_divergences_cancel_exactly():
    for text in ("0;inf,2,3", "0;inf,inf,inf", "1;2", "2;"):
        sig = parse_signature(text)
        t0 = time.perf_counter()
        asm = assemble_naive_logdet(sig)
        div = expected_divergence(sig)
        assert const_reduce(asm.coeff_L - div.coeff_L).is_zero(), text
        assert const_reduce(asm.coeff_LL - div.coeff_LL).is_zero(), text
        assert const_reduce(cgamma_from_assembly(sig) - cgamma_direct(sig)).is_zero(), text
        assert reconcile(sig)["difference"] == "0", text
        assert time.perf_counter() - t0 < 1.0, f"{text}: over the 1s budget"


def test_criterion_2_modular_special_value():
    display, numeric = solve_special_value(digits=14)
    vector = (
        Fraction(1, 4), Fraction(13, 27), Fraction(73, 72), Fraction(-37, 36),
        Fraction(-5, 36), Fraction(5, 12), Fraction(-167, 216), Fraction(-5, 6),
    )
    assert tuple(display.coeff(b) for b in DISPLAY_BASIS) == vector
    ref = _reference_log_zprime()
    assert abs(mp.mpf(numeric) - ref) <= mp.mpf("1e-12") * abs(ref)


def test_criterion_3_cusp_zeta_two_routes():
    cusp = ModelCusp(1.0)
    cusp_warm_cache(cusp, range(1, 21))
    s_values = [1.25, 1.5, 1.75]
    reps = cusp_zeta_direct(cusp, s_values, wkb_extend_to=1000.0)
    for rep in reps:
        cont = cusp_contour_sum(rep.s, 20, cusp)
        budget = abs(cont.k_tail_estimate) + abs(rep.tail_estimate)
        assert abs(rep.value - cont.value) <= budget, f"s={rep.s}"
        if rep.s == 1.5:
            rel = abs(rep.value_total - cont.value_total) / abs(rep.value_total)
            assert rel <= 1e-3, f"relative gap {rel:.3e} at s=1.5"


def test_criterion_4_cone_zeta_gap_and_cover():
    cone = ModelCone(2, eta=0.5)
    direct = cone_zeta_direct(cone, [1.5], r_max=100.0)[0]
    cont = cone_contour_sum(1.5, 20, cone)
    rel = abs(direct.value_total - cont.value_total) / abs(direct.value_total)
    assert rel <= 1e-3, f"relative gap {rel:.3e}"
    for omega in (1, 2, 3, 5):
        for eta in (0.2, 0.5, 1.0):
            evs = scan_cone_eigenvalues(ModelCone(omega, eta=eta), k_max=1, r_max=25.0)
            lam_min = min(e.lam for e in evs)
            assert lam_min > 0.25, f"omega={omega}, eta={eta}: lam_min={lam_min}"
    for omega in (2, 3):
        rep = cone_desingularization_check(omega, 0.3, r_max=12.0,
                                           k_list=(0, 1, 2), tol=1e-8)
        assert rep["worst_rel_mismatch"] <= 1e-8


def test_criterion_5_determinant_transcriptions_exact():
    sym = cusp_logdet_asymptotic()
    assert sym.coeff("a") == term("PI", Fraction(1, 3))
    assert sym.coeff("log_a") == const(Fraction(1, 2))
    assert sym.constant == zero()
    assert sym.has_small_o
    for omega in (1, 2, 3, 5):
        got = cone_logdet_asymptotic(omega)
        w = Fraction(omega)
        assert got.coeff(f"log_eta({omega})") == const(-(w / 6 + Fraction(1, 6) / w))
        expected_const = (
            term("ZP1", 2 * w) + const(-w / 6) + term("LOG2", w / 6)
            + const(Fraction(-5, 12) / w) + term("LOG2", Fraction(1, 6) / w)
            + term("GAMMA", Fraction(-1, 6) / w)
            + (Fraction(1, 2) + w / 6 + Fraction(1, 6) / w) * log_int(omega)
            + const(Fraction(1, 4))
        )
        assert got.constant == expected_const, f"omega={omega}"
        assert got.has_small_o


def test_criterion_6_geodesic_arithmetic_and_product_limit():
    # exact arithmetic against brute-force oracles up to 200
    for d in range(5, 201):
        if not is_discriminant(d):
            continue
        x, y = pell_fundamental(d)
        assert x * x - d * y * y == 4, d
        pell_minimality_scan(d, x, y)  # raises MISMATCH on a smaller solution
        assert class_number(d) == class_number_brute(d), d

    # k-truncation of log Z(1.5) is stable under doubling at d_max = 1e5
    v20, _ = sarnak_log_z(1.5, 100_000, k_max=20)
    v40, _ = sarnak_log_z(1.5, 100_000, k_max=40)
    assert abs(v40 - v20) <= 1e-4

    # extrapolated value of the truncated geodesic product at s -> 1
    est = zprime1_estimate((1.3, 1.25, 1.2, 1.15, 1.1, 1.05), 100_000)
    assert est.uncertainty <= 0.25 * abs(est.value)  # reported error is tight
    closed = float(mp.exp(_reference_log_zprime()))
    gap = abs(est.value - closed)
    if gap > est.uncertainty:
        ratio = est.value / closed
        four_eg = 4.0 * math.exp(0.5772156649015329)
        pytest.fail(
            "the truncated-product extrapolation does not bracket the "
            f"closed-form special value: estimate {est.value:.6f} "
            f"+/- {est.uncertainty:.4f} (Mertens route {est.mertens_limit:.6f}, "
            f"quarter-window {est.quarter_value:.6f}) vs closed form "
            f"{closed:.6f}; the gap {gap:.3f} is {gap / est.uncertainty:.0f}x "
            "the reported uncertainty, while the estimator is internally "
            "consistent and its uncertainty shrinks as the window grows. "
            f"The ratio estimate/closed = {ratio:.6f} matches 4*e^gamma = "
            f"{four_eg:.6f} to 2e-4, i.e. the two sides differ by exactly "
            "gamma + 2 log 2 per cusp in the log: the product limit and the "
            "closed form use different normalizations of the cusp "
            "contribution. Documented in README under 'Known numerical "
            "finding'."
        )


def test_criterion_7_special_function_battery():
    # half-integer Bessel closed form
    for x in (0.5, 2.0, 10.0, 50.0):
        got = bessel_k_real(0.5, x)
        want = mp.sqrt(mp.pi / (2 * mp.mpf(x))) * mp.exp(-mp.mpf(x))
        assert abs(got - want) / want <= 1e-10, x
    # exponential integral envelope
    for x in (10.0, 100.0):
        v = exp_integral_e1(x)
        assert mp.exp(-x) / (x + 1) < v < mp.exp(-x) / x, x
    # Hurwitz zeta at s = 0
    for x in (0.25, 1.0, 3.5):
        assert abs(hurwitz_zeta(0.0, x) - (0.5 - x)) <= 1e-10, x
    # exact central values of the two quadratic L-functions
    assert dirichlet_l_at_zero(CHI4) == Fraction(1, 2)
    assert dirichlet_l_at_zero(CHI3) == Fraction(1, 3)
    # uniform large-order asymptotics: residuals strictly decreasing
    res = []
    for v in (5.0, 10.0, 20.0):
        approx = bessel_uniform_asym(v, 1.0, 4)
        exact = bessel_k_real(v, v * 1.0)
        res.append(abs(approx - exact) / abs(exact))
    assert res[0] > res[1] > res[2], res
