from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import pytest

from eta_hecke.hecke import (
    RationalMatrix,
    SpaceInvarianceError,
    hecke_matrix_half,
    hecke_matrix_nsq,
    operator_matrix,
    oracle_trace_T_n_level1,
    oracle_trace_T_nsq,
    t_psq_half,
    t_p_integral,
)
from eta_hecke.qseries import EtaSpaceSpec, PrecisionError, eta_space_basis, level1_cusp_basis

TAU = {2: -24, 3: 252, 5: 4830, 7: -16744, 11: 534612, 13: -577738, 17: -6905934, 19: 10661420,
       23: 18643272, 29: 128406630, 31: -52843168, 37: -182213314, 41: 308120442, 43: -17125708,
       47: 2687348496}


def test_matrix_algebra():
    a = RationalMatrix([[1, 2], [3, 4]])
    b = RationalMatrix([[0, 1], [Fraction(1, 2), 0]])
    assert (a @ b) == RationalMatrix([[1, 1], [2, 3]])
    assert (a + b).trace() == 5
    assert (a - a) == RationalMatrix([[0, 0], [0, 0]])
    assert RationalMatrix.identity(3).trace() == 3
    assert not b.is_integral() and a.is_integral()
    assert RationalMatrix.from_columns([[1, 3], [2, 4]]) == a


@pytest.mark.parametrize("p", sorted(TAU))
def test_level1_eigenvalues_are_tau(p):
    assert oracle_trace_T_n_level1(12, p) == TAU[p]


def test_level1_composite_and_prime_power():
    assert oracle_trace_T_n_level1(12, 4) == -1472
    assert oracle_trace_T_n_level1(12, 9) == -113643
    assert oracle_trace_T_n_level1(12, 10) == -115920


def test_level1_dimension_trace():
    for w, d in [(12, 1), (14, 0), (16, 1), (24, 2), (26, 1), (28, 2), (30, 2)]:
        assert oracle_trace_T_n_level1(w, 1) == d


def test_delta_is_eigenform_of_integral_tp():
    f = level1_cusp_basis(12, 60).elements[0]
    g = t_p_integral(f, 5, 12)
    assert g == f.truncate(g.prec).scale(TAU[5])


def test_unary_theta_eigenvalue(basis_cache):
    # eta(8 tau)^3 is an eigenform with eigenvalue (-4/p)(1 + p)
    spec = EtaSpaceSpec.eta8(1, 0)
    for p in (3, 5, 7, 11, 13):
        sign = 1 if p % 4 == 1 else -1
        assert oracle_trace_T_nsq(spec, p, cache=basis_cache) == sign * (1 + p)


def test_eta_power_eigenvalue_matches_delta_square_root(basis_cache):
    # r = 23, s = 0 has dimension 1; the matrix must be 1x1 and integral
    spec = EtaSpaceSpec.eta24(23, 0)
    m = hecke_matrix_half(spec, 5, cache=basis_cache)
    assert m.shape == (1, 1) and m.is_integral()


@pytest.mark.parametrize("r, s", [(1, 12), (5, 12), (13, 12), (23, 12), (7, 24)])
def test_hecke_matrices_commute(r, s, basis_cache):
    spec = EtaSpaceSpec.eta24(r, s)
    a = hecke_matrix_half(spec, 5, cache=basis_cache)
    b = hecke_matrix_half(spec, 7, cache=basis_cache)
    assert a @ b == b @ a
    assert a.is_integral() and b.is_integral()


@pytest.mark.parametrize("r", [1, 5, 7, 11, 13, 17, 19, 23])
def test_multiplicativity_on_lines(r, basis_cache):
    spec = EtaSpaceSpec.eta24(r, 4)
    for p, q in [(5, 7), (5, 11), (7, 13), (11, 13)]:
        t_pq = oracle_trace_T_nsq(spec, p * q, cache=basis_cache)
        assert t_pq == oracle_trace_T_nsq(spec, p, cache=basis_cache) * oracle_trace_T_nsq(spec, q, cache=basis_cache)


def test_prime_square_recursion(basis_cache):
    # on a line, T(p^4) = t^2 - p^(2k-1)
    spec = EtaSpaceSpec.eta24(5, 6)
    t = oracle_trace_T_nsq(spec, 5, cache=basis_cache)
    assert oracle_trace_T_nsq(spec, 25, cache=basis_cache) == t * t - 5 ** (2 * spec.k - 1)


def test_composite_matrix_is_product(basis_cache):
    spec = EtaSpaceSpec.eta24(1, 24)
    m = hecke_matrix_nsq(spec, 35, cache=basis_cache)
    assert m == hecke_matrix_half(spec, 5, cache=basis_cache) @ hecke_matrix_half(spec, 7, cache=basis_cache)


def test_image_stays_in_support_class(basis_cache):
    spec = EtaSpaceSpec.eta24(7, 8)
    basis = basis_cache.get(spec, 121 * 80)
    for f in basis.elements:
        g = t_psq_half(f, 11, spec, 80)
        for n, c in enumerate(g.coefficients()):
            if c:
                assert n % 24 == 7


def test_wrong_twist_leaves_the_space():
    spec = EtaSpaceSpec.eta24(5, 12)
    basis = eta_space_basis(spec, 49 * 60)

    class Twisted(EtaSpaceSpec):
        def hecke_twist(self, p):
            return -super().hecke_twist(p)

    bad = Twisted("eta24", 5, 12)
    with pytest.raises(SpaceInvarianceError):
        operator_matrix(basis, lambda f: t_psq_half(f, 7, bad, 60))


def test_operator_rejects_bad_primes():
    spec = EtaSpaceSpec.eta24(5, 0)
    f = eta_space_basis(spec, 200).elements[0]
    for p in (2, 3):
        with pytest.raises(ValueError):
            t_psq_half(f, p, spec)
    with pytest.raises(ValueError):
        t_psq_half(f, 3, replace(spec, r=1, s=0))
    with pytest.raises(PrecisionError):
        t_psq_half(f, 5, spec, prec=10)


def test_oracle_argument_checks():
    spec = EtaSpaceSpec.eta24(5, 4)
    for n in (0, 2, 9, 15):
        with pytest.raises(ValueError):
            oracle_trace_T_nsq(spec, n)
    with pytest.raises(ValueError):
        oracle_trace_T_nsq(EtaSpaceSpec.eta24(1, 0), 5)
    assert oracle_trace_T_nsq(EtaSpaceSpec.eta24(5, 2), 5) == 0
    assert oracle_trace_T_nsq(EtaSpaceSpec.eta8(1, 4), 9) == oracle_trace_T_nsq(EtaSpaceSpec.eta8(1, 4), 3) ** 2 - 3 ** (
        2 * EtaSpaceSpec.eta8(1, 4).k - 1)
