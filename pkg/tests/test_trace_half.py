from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eta_hecke.arith import hurwitz_H
from eta_hecke.qseries import dim_ms1
from eta_hecke.trace_half import (
    EllipticSumSelector,
    PkParams,
    assembled_parts,
    assembled_tr_T_nsq,
    class_terms,
    elliptic_sum,
    elliptic_sum_alternative,
    parabolic_total,
    pk,
    pk_value,
    scalar_total,
)

R_VALUES = (1, 5, 7, 11, 13, 17, 19, 23)


def _pk_from_roots(e, n, u, k):
    tau = complex(e * u / 2, (4 * e * n - e * e * u * u) ** 0.5 / 2)
    return ((tau ** (2 * k - 1) - tau.conjugate() ** (2 * k - 1)) / (tau - tau.conjugate())).real


@settings(max_examples=80)
@given(st.sampled_from([1, 2, 3, 6]), st.integers(1, 60), st.integers(1, 6), st.data())
def test_pk_matches_root_formula(e, n, k, data):
    bound = int((4 * n / e) ** 0.5)
    u = data.draw(st.integers(-bound, bound))
    if e * e * u * u >= 4 * e * n:
        return
    value = pk_value(e, n, u, k)
    assert abs(value - _pk_from_roots(e, n, u, k)) <= 1e-6 * max(1, abs(value))
    assert pk_value(e, n, -u, k) == value


def test_pk_small_cases():
    assert pk_value(1, 5, 1, 1) == 1
    assert pk_value(1, 5, 1, 2) == 1 - 5
    assert pk_value(1, 5, 0, 2) == -5
    assert pk(PkParams(2, 5, 1, 2)) == 4 - 10
    with pytest.raises(ValueError):
        PkParams(1, 1, 2, 1)
    with pytest.raises(ValueError):
        PkParams(4, 1, 0, 1)


def test_class_terms_sum_over_conductor():
    terms = class_terms(-108)
    assert [t.g for t in terms] == [1, 2, 3, 6]
    assert sum(t.H for t in terms) == sum(t.H_up for t in terms)
    assert terms[0].H == hurwitz_H(-108) and terms[0].H_up == Fraction(1, 3)


@pytest.mark.parametrize("r, s", [(r, s) for r in R_VALUES for s in (0, 4, 6, 8, 10, 12, 14) if (r, s) != (1, 0)])
def test_trace_at_one_is_dimension(r, s):
    assert assembled_tr_T_nsq(1, r, s) == dim_ms1(s)


def test_assembled_parts_sum():
    parts = assembled_parts(25, 11, 4)
    assert parts.total == assembled_tr_T_nsq(25, 11, 4)
    assert parts.square == Fraction(2 * 9 - 1, 24) * 25 ** 8
    assert assembled_parts(5, 11, 4).square == 0


@pytest.mark.parametrize("r", R_VALUES)
def test_parabolic_at_one(r):
    assert parabolic_total(1, r) == Fraction(-(r - 12), 24)


def test_scalar_term():
    assert scalar_total(5) == Fraction(9, 24)
    assert scalar_total(5, 25) == 0
    with pytest.raises(ValueError):
        scalar_total(0)


def test_elliptic_sum_worked_example():
    assert elliptic_sum(EllipticSumSelector("A", 0, 0), 1, 7, 0) == Fraction(-2, 3)


@pytest.mark.parametrize("family", ["A", "B"])
def test_two_paths_agree_sample(family):
    for n in (1, 5, 7, 11, 13, 25, 35, 97, 143, 289):
        for k_r, k_s in [(1, 1), (5, 2), (11, 4), (23, 0)]:
            for ell in range(4):
                for starred in (False, True):
                    if family == "A":
                        sels = [EllipticSumSelector("A", ell, m, starred) for m in range(4)]
                    else:
                        sels = [EllipticSumSelector("B", ell, None, starred)]
                    for sel in sels:
                        assert elliptic_sum(sel, n, k_r, k_s) == elliptic_sum_alternative(sel, n, k_r, k_s)


def test_selector_validation():
    with pytest.raises(ValueError):
        EllipticSumSelector("E", 0)
    with pytest.raises(ValueError):
        EllipticSumSelector("A", 0)
    with pytest.raises(ValueError):
        EllipticSumSelector("B", 0, 1)
    with pytest.raises(ValueError):
        elliptic_sum_alternative(EllipticSumSelector("C", 0, 0), 5, 5, 0)
    with pytest.raises(ValueError):
        assembled_tr_T_nsq(9, 5, 0)
    with pytest.raises(ValueError):
        assembled_tr_T_nsq(5, 1, 0)
    with pytest.raises(ValueError):
        assembled_tr_T_nsq(5, 9, 4)
