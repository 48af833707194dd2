from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eta_hecke.arith import (
    DirichletCharacter,
    NotADiscriminant,
    bernoulli_B1,
    bernoulli_number,
    charsum_direct,
    charsum_prefix,
    charsum_suz,
    cot_charsum,
    divisors,
    euler_phi,
    factorize,
    hurwitz_H,
    is_fundamental,
    is_square,
    kronecker,
    real_characters,
    to_discriminant,
)


@pytest.mark.parametrize(
    "D, expected",
    [(-3, Fraction(1, 3)), (-4, Fraction(1, 2)), (-7, 1), (-8, 1), (-11, 1), (-15, 2),
     (-20, 2), (-23, 3), (-47, 5), (-71, 7), (-5, 0), (-1, 0), (0, 0), (5, 0)],
)
def test_class_number_table(D, expected):
    assert hurwitz_H(D) == expected


def test_class_number_counts_primitive_forms_only():
    # x^2 + 3y^2 is the only primitive form of discriminant -12
    assert hurwitz_H(-12) == 1
    assert hurwitz_H(-16) == 1
    assert hurwitz_H(-27) == 1


@pytest.mark.parametrize(
    "a, b, expected",
    [(-4, 3, -1), (-4, 5, 1), (8, 3, -1), (8, 7, 1), (12, 5, -1), (12, 7, -1), (12, 11, 1),
     (12, 13, 1), (-3, 2, -1), (5, 2, -1), (-7, 2, 1), (2, 4, 0), (-1, -1, -1), (3, 0, 0), (1, 0, 1)],
)
def test_kronecker_values(a, b, expected):
    assert kronecker(a, b) == expected


@given(st.integers(-200, 200), st.integers(1, 300), st.integers(1, 300))
def test_kronecker_multiplicative_in_bottom(a, m, n):
    assert kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n)


@given(st.integers(1, 400))
def test_kronecker_quadratic_reciprocity_odd(n):
    m = 2 * n + 1
    for p in (3, 5, 7, 11):
        if math.gcd(p, m) == 1:
            sign = -1 if (p % 4 == 3 and m % 4 == 3) else 1
            assert kronecker(p, m) == sign * kronecker(m, p)


def test_discriminant_decomposition():
    d = to_discriminant(-108)
    assert (d.fundamental, d.conductor) == (-3, 6)
    assert to_discriminant(-4 * 25).fundamental == -4
    with pytest.raises(NotADiscriminant):
        to_discriminant(-5)


def test_fundamental_list():
    fund = [d for d in range(-40, 0) if is_fundamental(d)]
    assert fund == [-40, -39, -35, -31, -24, -23, -20, -19, -15, -11, -8, -7, -4, -3]


def test_bernoulli_numbers():
    assert bernoulli_number(0) == 1
    assert bernoulli_number(1) in (Fraction(-1, 2), Fraction(1, 2))
    assert bernoulli_number(2) == Fraction(1, 6)
    assert bernoulli_number(4) == Fraction(-1, 30)
    assert bernoulli_number(12) == Fraction(-691, 2730)
    assert bernoulli_number(7) == 0


@pytest.mark.parametrize("d", [-3, -4, -7, -8, -11, -15, -20, -23, -24])
def test_b1_is_minus_class_number(d):
    chi = DirichletCharacter(abs(d), d)
    assert bernoulli_B1(chi) == -hurwitz_H(d)


def test_b1_trivial_modulus_one():
    assert bernoulli_B1(DirichletCharacter(1)) == Fraction(-1, 2)


def test_real_characters_mod_24():
    us = sorted(c.u for c in real_characters(24))
    assert us == [-24, -8, -4, -3, 1, 8, 12, 24]


def test_character_rejects_bad_conductor():
    with pytest.raises(ValueError):
        DirichletCharacter(5, -4)


@pytest.mark.parametrize("M", [1, 3, 4, 5, 8, 12, 24])
@pytest.mark.parametrize("j", [1, 2, 5, 7, 11, 13, 23, 24])
def test_suz_against_direct(M, j):
    for chi in real_characters(M):
        for N in range(M, 40 * M, M):
            if math.gcd(N, j) == 1:
                assert charsum_suz(chi, N, j) == charsum_direct(chi, N, j)


def test_suz_argument_checks():
    chi = DirichletCharacter(3, -3)
    with pytest.raises(ValueError):
        charsum_suz(chi, 4, 5)
    with pytest.raises(ValueError):
        charsum_suz(chi, 6, 3)
    with pytest.raises(NotImplementedError):
        charsum_suz(DirichletCharacter(1), 1, 25)


def test_prefix_matches_direct():
    chi = DirichletCharacter(12, 12)
    pre = charsum_prefix(chi, 60)
    for N in range(12, 600, 12):
        assert pre[-(-N // 11)] == charsum_direct(chi, N, 11)


@pytest.mark.parametrize("n", [5, 7, 11, 13, 25, 35, 77, 299])
def test_cotangent_sum_prediction(n):
    res = cot_charsum(n)
    assert res.agrees()
    assert abs(res.value - res.predicted) <= 1e-8 * max(1.0, abs(res.predicted))


def test_divisor_helpers():
    assert divisors(36) == [1, 2, 3, 4, 6, 9, 12, 18, 36]
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert euler_phi(24) == 8
    assert is_square(49) and not is_square(50) and is_square(0)


@settings(max_examples=50)
@given(st.integers(2, 10**6))
def test_factorize_roundtrip(n):
    prod = 1
    for p, e in factorize(n).items():
        prod *= p**e
    assert prod == n
