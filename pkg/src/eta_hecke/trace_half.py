"""Closed-form traces of T_{n^2} on eta-type spaces of level one: the
scalar, parabolic and elliptic contributions and their assembled sum."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from eta_hecke.arith import hurwitz_H, is_square, kronecker, to_discriminant, divisors

__all__ = [
    "PkParams",
    "pk",
    "pk_value",
    "ClassTerm",
    "class_terms",
    "EllipticSumSelector",
    "elliptic_sum",
    "elliptic_sum_alternative",
    "parabolic_total",
    "scalar_total",
    "assembled_tr_T_nsq",
    "assembled_parts",
    "AssembledParts",
]

_E_VALUES = (1, 2, 3, 6)


@dataclass(frozen=True)
class PkParams:
    e: int
    n: int
    u: int
    k: int

    def __post_init__(self):
        if self.e not in _E_VALUES:
            raise ValueError(f"e must be one of {_E_VALUES}")
        if self.n < 1 or self.k < 1:
            raise ValueError("n and k must be positive")
        if self.discriminant >= 0:
            raise ValueError(f"e^2 u^2 - 4en = {self.discriminant} is not negative")

    @property
    def discriminant(self) -> int:
        return self.e * self.e * self.u * self.u - 4 * self.e * self.n


@lru_cache(maxsize=1 << 16)
def pk_value(e: int, n: int, u: int, k: int) -> int:
    """(tau^(2k-1) - conj(tau)^(2k-1)) / (tau - conj(tau)) for tau^2 - eu tau + en = 0."""
    if e * e * u * u - 4 * e * n >= 0:
        raise ValueError("discriminant must be negative")
    if k < 1:
        raise ValueError("k must be positive")
    t, m = e * u, e * n
    prev, cur = 1, t
    if k == 1:
        return 1
    for _ in range(2 * k - 3):
        prev, cur = cur, t * cur - m * prev
    return cur


def pk(params: PkParams) -> int:
    return pk_value(params.e, params.n, params.u, params.k)


# --------------------------------------------------------------------------
# class-number data attached to a discriminant


@dataclass(frozen=True)
class ClassTerm:
    """A divisor g of the conductor of delta.

    ``H`` is H(delta/g^2) and ``H_up`` is H(g^2 D0); the two agree after
    summing over all g but not under conditions on g.
    """

    g: int
    fundamental: int
    H: Fraction
    H_up: Fraction


@lru_cache(maxsize=1 << 16)
def class_terms(delta: int) -> tuple[ClassTerm, ...]:
    disc = to_discriminant(delta)
    d0, f = disc.fundamental, disc.conductor
    return tuple(
        ClassTerm(g, d0, hurwitz_H(delta // (g * g)), hurwitz_H(d0 * g * g)) for g in divisors(f)
    )


def _u_range(e: int, n: int):
    """All u with e^2 u^2 < 4en."""
    b = isqrt(4 * n // e)
    while e * b * b >= 4 * n:
        b -= 1
    return range(-b, b + 1)


def _check_n(n: int) -> None:
    if n < 1 or gcd(n, 6) != 1:
        raise ValueError(f"n = {n} must be positive and coprime to 6")


# --------------------------------------------------------------------------
# elliptic sums A, B, C, D


@dataclass(frozen=True)
class EllipticSumSelector:
    """Which of the sums A_{l,m}, B_l, C_{l,m}, D_l (or their starred tails) to evaluate.

    ``ell`` fixes 2^ell || u (2^ell | u, u != 0, when starred); ``m`` fixes
    2^m || g and exists only for A and C.
    """

    family: str
    ell: int
    m: int | None = None
    starred: bool = False

    def __post_init__(self):
        if self.family not in ("A", "B", "C", "D"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.ell < 0:
            raise ValueError("ell must be nonnegative")
        if self.family in ("A", "C"):
            if self.m is None or self.m < 0:
                raise ValueError(f"family {self.family} needs a nonnegative m")
        elif self.m is not None:
            raise ValueError(f"family {self.family} takes no m index")

    @property
    def e(self) -> int:
        return {"A": 1, "B": 2, "C": 3, "D": 6}[self.family]


def _v2(x: int) -> int:
    return (x & -x).bit_length() - 1


def _u_ok(u: int, sel: EllipticSumSelector) -> bool:
    if u == 0:
        return False
    if sel.starred:
        return u % (1 << sel.ell) == 0
    return _v2(abs(u)) == sel.ell


def _g_ok(g: int, n: int, u: int, sel: EllipticSumSelector) -> bool:
    if gcd(gcd(n, u), g) != 1:
        return False
    return sel.m is None or _v2(g) == sel.m


def _prefactor(sel: EllipticSumSelector, n: int, r: int, k: int) -> Fraction:
    c = Fraction(kronecker(12, n))
    e = sel.e
    if e > 1:
        c *= Fraction(kronecker({2: 8, 3: 12, 6: 24}[e], r), e ** (k - 1))
    return c


def _weight_k(r: int, s: int) -> int:
    k = (r - 1) // 2 + s
    if k < 1:
        raise ValueError(f"k = {k} must be at least 1")
    return k


def elliptic_sum(selector: EllipticSumSelector, n: int, r: int, s: int) -> Fraction:
    """A, B, C or D evaluated term by term from their defining double sums."""
    _check_n(n)
    k = _weight_k(r, s)
    e = selector.e
    total = Fraction(0)
    for u in _u_range(e, n):
        if not _u_ok(u, selector):
            continue
        delta = e * e * u * u - 4 * e * n
        terms = [t for t in class_terms(delta) if _g_ok(t.g, n, u, selector)]
        inner = sum((t.H for t in terms), Fraction(0))
        if e in (1, 2):
            if u % 3:
                inner -= 3 * sum((t.H for t in terms if t.g % 3 == 0), Fraction(0))
            else:
                inner *= 1 - kronecker(delta, 3)
        if inner:
            total += inner * pk_value(e, n, u, k)
    return _prefactor(selector, n, r, k) * total


def elliptic_sum_alternative(selector: EllipticSumSelector, n: int, r: int, s: int) -> Fraction:
    """A or B through the (1 - (D0/3)) rewriting with the beta/gamma weights."""
    if selector.family not in ("A", "B"):
        raise ValueError("only A and B have a second evaluation path")
    _check_n(n)
    k = _weight_k(r, s)
    e = selector.e
    n_mod3_is_1 = n % 3 == 1
    if selector.family == "A":
        w = Fraction(1) if n_mod3_is_1 else Fraction(1, 2)
    else:
        w = Fraction(1, 2) if n_mod3_is_1 else Fraction(1)
    total = Fraction(0)
    for u in _u_range(e, n):
        if not _u_ok(u, selector):
            continue
        delta = e * e * u * u - 4 * e * n
        inner = Fraction(0)
        for t in class_terms(delta):
            if not _g_ok(t.g, n, u, selector):
                continue
            if (delta // (t.fundamental * t.g * t.g)) % 3 == 0:
                continue
            inner += t.H
        if inner:
            total += (1 - kronecker(class_terms(delta)[0].fundamental, 3)) * inner * pk_value(e, n, u, k)
    return w * _prefactor(selector, n, r, k) * total


# --------------------------------------------------------------------------
# parabolic and scalar contributions


def parabolic_total(n: int, r: int) -> Fraction:
    """Parabolic contribution to the trace of [M_{n^2}], divided by sqrt(n)."""
    _check_n(n)
    total = Fraction(0)
    for e in _E_VALUES:
        c = kronecker(-4 * e, r) * (1 - kronecker(-e * n, 3))
        if c:
            total += c * (hurwitz_H(-4 * e * n) - hurwitz_H(-e * n))
    return Fraction(kronecker(12, n)) * total / 8


def scalar_total(k: int, n: int = 1) -> Fraction:
    """Contribution of the scalar double coset: (k - 1/2)/12 when n = 1."""
    if k < 1:
        raise ValueError("k must be positive")
    return Fraction(2 * k - 1, 24) if n == 1 else Fraction(0)


# --------------------------------------------------------------------------
# the assembled closed form


def _factor_2(d0: int) -> int:
    return 1 - kronecker(d0, 2)


def _factor_3(d0: int) -> int:
    return 1 - kronecker(d0, 3)


def _local_weight(e: int, g: int, d0: int) -> int:
    if e == 1:
        return _factor_2(d0) * _factor_3(d0) if g % 2 and g % 3 else 0
    if e == 2:
        return _factor_3(d0) if g % 3 else 0
    if e == 3:
        return _factor_2(d0) if g % 2 else 0
    return 1


@lru_cache(maxsize=1 << 14)
def _class_sums(e: int, n: int, k: int) -> tuple[Fraction, Fraction]:
    """(u = 0 part, u != 0 part) of sum_u sum_g w(g, D0) H(g^2 D0) P_k(e, n, u)."""
    zero, rest = Fraction(0), Fraction(0)
    for u in _u_range(e, n):
        if u < 0:
            continue
        delta = e * e * u * u - 4 * e * n
        inner = sum((_local_weight(e, t.g, t.fundamental) * t.H_up for t in class_terms(delta)), Fraction(0))
        if not inner:
            continue
        val = inner * pk_value(e, n, u, k)
        if u == 0:
            zero += val
        else:
            rest += 2 * val  # P_k and the class data are even in u
    return zero, rest


@dataclass(frozen=True)
class AssembledParts:
    """The closed form split by origin: u = 0 terms, u != 0 terms, square term."""

    central: Fraction
    elliptic: Fraction
    square: Fraction

    @property
    def total(self) -> Fraction:
        return self.central + self.elliptic + self.square


def assembled_parts(n: int, r: int, s: int) -> AssembledParts:
    if not (0 < r < 24 and gcd(r, 6) == 1) or s < 0 or s % 2:
        raise ValueError(f"need (r, 6) = 1 with 0 < r < 24 and even s >= 0, got r={r}, s={s}")
    _check_n(n)
    k = _weight_k(r, s)
    chi_n = kronecker(12, n)
    weights = {
        1: Fraction(1),
        2: Fraction(kronecker(8, r), 2 ** (k - 1)),
        3: Fraction(kronecker(12, r), 3 ** (k - 1)),
        6: Fraction(kronecker(24, r), 6 ** (k - 1)),
    }
    central = elliptic = Fraction(0)
    for e, w in weights.items():
        z, rest = _class_sums(e, n, k)
        central -= w * z / 8
        elliptic -= w * rest / 8
    square = Fraction(2 * k - 1, 24) * n ** (k - 1) if is_square(n) else Fraction(0)
    return AssembledParts(chi_n * central, chi_n * elliptic, square)


def assembled_tr_T_nsq(n: int, r: int, s: int) -> Fraction:
    """tr(T_{n^2}) on the level-one eta-type space from the closed class-number formula."""
    return assembled_parts(n, r, s).total
