"""Indefinite binary quadratic forms, Pell units, class numbers, log Z(s)."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import hypdet.qforms as qf
from hypdet.errors import (
    HypdetError,
    InvalidDiscriminantError,
    MismatchError,
    NonPositiveArgError,
    OutOfRangeError,
    UnstableExtrapolationError,
)
from hypdet.qforms import (
    DiscriminantRecord,
    build_discriminant_table,
    class_number,
    class_number_brute,
    discriminant_table,
    is_discriminant,
    pell_fundamental,
    pell_minimality_scan,
    sarnak_log_z,
    write_discriminant_csv,
    zprime1_estimate,
)

GRID = (1.3, 1.25, 1.2, 1.15, 1.1, 1.05)


def _is_disc_oracle(n: int) -> bool:
    if n <= 0 or n % 4 not in (0, 1):
        return False
    r = math.isqrt(n)
    return r * r != n


# ---------------------------------------------------------------------------
# Discriminants and Pell units
# ---------------------------------------------------------------------------

def test_is_discriminant_edges():
    assert is_discriminant(5) and is_discriminant(8) and is_discriminant(12)
    assert not is_discriminant(4)   # square
    assert not is_discriminant(7)   # 3 mod 4
    assert not is_discriminant(9)   # square
    assert not is_discriminant(0)
    assert not is_discriminant(-4)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=-10, max_value=10 ** 6))
def test_is_discriminant_property(n):
    assert is_discriminant(n) == _is_disc_oracle(n)


@pytest.mark.parametrize("d,xy", [(5, (3, 1)), (8, (6, 2)), (12, (4, 1)), (13, (11, 3))])
def test_pell_examples(d, xy):
    assert pell_fundamental(d) == xy


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=5, max_value=3000))
def test_pell_identity_property(d):
    assume(_is_disc_oracle(d))
    x, y = pell_fundamental(d)
    assert x >= 1 and y >= 1
    assert x * x - d * y * y == 4


def test_pell_minimality_up_to_200():
    ds = [d for d in range(5, 201) if _is_disc_oracle(d)]
    certified = [pell_minimality_scan(d, *pell_fundamental(d)) for d in ds]
    # 81 discriminants are fully certified below the default y-cap; the 5
    # with larger fundamental solutions pass the bounded scan
    assert sum(certified) == 81
    assert len(ds) - sum(certified) == 5


def test_pell_minimality_flags_non_minimal():
    # (x, y) = (7, 3) solves x^2 - 5 y^2 = 4 but is not fundamental
    assert 7 * 7 - 5 * 9 == 4
    with pytest.raises(MismatchError):
        pell_minimality_scan(5, 7, 3)


def test_class_numbers_match_brute_force():
    for d in range(5, 241):
        if _is_disc_oracle(d):
            assert class_number(d) == class_number_brute(d), d


def test_class_number_examples():
    assert class_number(5) == 1
    assert class_number(229) == 3


# ---------------------------------------------------------------------------
# Discriminant records and tables
# ---------------------------------------------------------------------------

def test_record_validation():
    le = math.log((3 + math.sqrt(5)) / 2)
    rec = DiscriminantRecord(5, 1, (3, 1), le)
    assert rec.eps_d == pytest.approx((3 + math.sqrt(5)) / 2, rel=1e-12)
    with pytest.raises(InvalidDiscriminantError):
        DiscriminantRecord(7, 1, (3, 1), le)
    with pytest.raises(HypdetError):
        DiscriminantRecord(5, 0, (3, 1), le)
    with pytest.raises(HypdetError):
        DiscriminantRecord(5, 1, (3, 2), le)
    with pytest.raises(NonPositiveArgError):
        DiscriminantRecord(5, 1, (3, 1), -1.0)


@pytest.fixture(scope="module")
def table2000():
    return discriminant_table(2000)


def test_table_contents(table2000):
    t = table2000
    assert t.d_max == 2000
    assert list(t.ds) == sorted(set(int(d) for d in t.ds))
    assert all(_is_disc_oracle(int(d)) for d in t.ds)
    assert (t.hs >= 1).all()
    assert (t.les > 0).all()
    rec = t.record(5)
    assert (rec.d, rec.h, rec.pell) == (5, 1, (3, 1))
    assert rec.log_eps == pytest.approx(0.962423650119, abs=1e-9)
    with pytest.raises(InvalidDiscriminantError):
        t.record(7)
    with pytest.raises(InvalidDiscriminantError):
        t.record(2005)


def test_table_cache_and_slicing(table2000):
    assert discriminant_table(2000) is table2000
    sliced = discriminant_table(500)
    fresh = build_discriminant_table(500)
    assert np.array_equal(sliced.ds, fresh.ds)
    assert np.array_equal(sliced.hs, fresh.hs)
    assert np.allclose(sliced.les, fresh.les, rtol=0, atol=0)


def test_build_rejects_tiny_window():
    with pytest.raises(OutOfRangeError):
        build_discriminant_table(4)


def test_parallel_build_is_deterministic():
    one = build_discriminant_table(800, jobs=1)
    two = build_discriminant_table(800, jobs=2)
    assert np.array_equal(one.ds, two.ds)
    assert np.array_equal(one.hs, two.hs)
    assert np.array_equal(one.les, two.les)
    assert one.pells == two.pells


def test_csv_output(tmp_path, table2000):
    path = tmp_path / "disc.csv"
    write_discriminant_csv(table2000, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "d,h,x,y,eps_d"
    assert len(lines) == len(table2000.ds) + 1
    first = lines[1].split(",")
    assert first[:4] == ["5", "1", "3", "1"]
    assert first[4].startswith("2.6180339887498948")


# ---------------------------------------------------------------------------
# Truncated log Z(s) over the geodesic classes
# ---------------------------------------------------------------------------

def test_sarnak_goldens():
    v, rep = sarnak_log_z(1.5, 2000, k_max=20)
    assert v == pytest.approx(-0.19076156237684117, abs=1e-12)
    assert 0 < rep.k_tail_bound < 1e-18
    assert rep.d_tail_estimate == pytest.approx(0.005043931614794916, rel=1e-6)
    assert rep.sum_h == int(discriminant_table(2000).hs.sum())
    v125, _ = sarnak_log_z(1.25, 2000, k_max=20)
    assert v125 == pytest.approx(-0.44413801214401927, abs=1e-12)


def test_sarnak_k_truncation_is_converged():
    v20, rep20 = sarnak_log_z(1.5, 2000, k_max=20)
    v40, _ = sarnak_log_z(1.5, 2000, k_max=40)
    assert abs(v40 - v20) <= max(rep20.k_tail_bound, 1e-15)


def test_sarnak_d_tail_estimate_covers_growth():
    v2000, rep2000 = sarnak_log_z(1.5, 2000, k_max=20)
    v8000, _ = sarnak_log_z(1.5, 8000, k_max=20)
    assert v8000 < v2000 < 0  # each discriminant contributes negatively
    assert abs(v8000 - v2000) <= rep2000.d_tail_estimate


def test_sarnak_domain():
    with pytest.raises(OutOfRangeError):
        sarnak_log_z(1.0, 500)
    with pytest.raises(OutOfRangeError):
        sarnak_log_z(0.5, 500)


# ---------------------------------------------------------------------------
# Extrapolated Z'(1) of the truncated geodesic product
# ---------------------------------------------------------------------------

def test_zprime_estimate_goldens():
    est = zprime1_estimate(GRID, 2000)
    assert est.value == pytest.approx(4.232339, abs=5e-5)
    assert 0.46 < est.uncertainty < 0.51
    assert float(est) == est.value
    assert est.count_kept > 0 and est.sum_h_kept > 0
    assert est.quarter_value > 0
    res = list(est.residuals)
    assert all(res[i] > res[i + 1] for i in range(len(res) - 1))


def test_zprime_uncertainty_shrinks_with_window():
    u500 = zprime1_estimate(GRID, 500).uncertainty
    u2000 = zprime1_estimate(GRID, 2000).uncertainty
    u8000 = zprime1_estimate(GRID, 8000).uncertainty
    assert u500 > u2000 > u8000


def test_zprime_mertens_crosscheck():
    est = zprime1_estimate(GRID, 8000)
    assert est.mertens_limit == pytest.approx(est.value, abs=0.5)
    assert est.value == pytest.approx(4.252361, abs=5e-5)


def test_zprime_grid_validation():
    with pytest.raises(OutOfRangeError):
        zprime1_estimate((1.3, 1.2), 500)  # too short
    with pytest.raises(OutOfRangeError):
        zprime1_estimate((1.7, 1.3, 1.2), 500)  # outside (1, 1.6]
    with pytest.raises(OutOfRangeError):
        zprime1_estimate((1.3, 1.3, 1.2), 500)  # not strictly decreasing
    with pytest.raises(OutOfRangeError):
        zprime1_estimate((1.3, 1.2, 1.0), 500)  # endpoint at the pole


def test_zprime_flags_unstable_extrapolation(monkeypatch):
    real = qf._norm_cutoff_log_z

    def noisy(s, table, n_cut, k_max):
        return real(s, table, n_cut, k_max) + 0.1 * math.sin(12345.0 * s)

    monkeypatch.setattr(qf, "_norm_cutoff_log_z", noisy)
    with pytest.raises(UnstableExtrapolationError):
        zprime1_estimate(GRID, 500)
