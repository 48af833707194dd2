from __future__ import annotations

import cmath
from fractions import Fraction

import pytest

from eta_hecke.verify import (
    TraceReport,
    check_root_of_unity_identities,
    eta_epsilon,
    eta_numeric,
    partition_parameters,
    verify_assembly,
    verify_eta_multiplier,
    verify_partition_congruence,
    verify_level6_correspondence,
    verify_level2_correspondence,
)


def test_report_record_is_serializable():
    rep = TraceReport("thm1", {"r": 5, "s": 4}, 7, Fraction(3, 2), Fraction(3, 2))
    rec = rep.record()
    assert rec == {"suite": "thm1", "params": {"r": 5, "s": 4}, "n": 7, "lhs": "3/2", "rhs": "3/2",
                   "pass": True, "skipped": False, "reason": ""}
    assert not TraceReport("x", {}, 1, Fraction(1), Fraction(2)).passed


def test_level6_small_grid(basis_cache):
    reports = verify_level6_correspondence(11, 4, [5, 7, 11, 13], basis_cache)
    assert all(r.passed for r in reports)
    assert [r.n for r in reports] == [5, 7, 11, 13]


def test_level6_skips_weight_half(caplog):
    reports = verify_level6_correspondence(1, 0, [5, 7])
    assert all(r.skipped and r.ok and not r.passed for r in reports)
    assert "skipping" in caplog.text


def test_level2_small_grid(basis_cache):
    assert all(r.passed for r in verify_level2_correspondence(5, 4, [3, 5, 7], basis_cache))


def test_level2_weight_three_halves_is_reported():
    reports = verify_level2_correspondence(1, 0, [3, 5])
    assert not any(r.passed for r in reports)
    assert reports[0].lhs == -4 and reports[0].rhs == 0


def test_assembly_small_grid(basis_cache):
    assert all(r.passed for r in verify_assembly(7, 8, [5, 7, 11, 13, 17, 19, 23, 25], basis_cache))


@pytest.mark.parametrize("ell, r, s", [(13, 11, 0), (17, 7, 4), (19, 5, 6), (23, 1, 10), (29, 19, 4), (31, 17, 6)])
def test_partition_parameters(ell, r, s):
    assert partition_parameters(ell) == (r, s)


def test_partition_congruence_at_23():
    rep = verify_partition_congruence(23, 100)
    assert rep.literal_passed and rep.passed and rep.checked == 100


def test_partition_congruence_up_to_scale():
    rep = verify_partition_congruence(13, 60, up_to_scale=True)
    assert rep.passed and not rep.literal_passed
    assert rep.scale == 11


def test_partition_rejects_other_primes():
    with pytest.raises(ValueError):
        partition_parameters(11)


def test_eta_at_i():
    # eta(i) = Gamma(1/4) / (2 pi^(3/4))
    assert abs(eta_numeric(1j) - 0.7682254223260566) < 1e-12


def test_eta_epsilon_translation():
    assert cmath.isclose(eta_epsilon(1, 1, 0, 1), cmath.exp(2j * cmath.pi / 24))
    assert cmath.isclose(eta_epsilon(1, 0, 0, 1), 1)


def test_eta_multiplier_sampled():
    rep = verify_eta_multiplier(30, seed=3)
    assert rep.passed and rep.max_rel_error < 1e-8


def test_root_of_unity_identities():
    assert check_root_of_unity_identities() == []
