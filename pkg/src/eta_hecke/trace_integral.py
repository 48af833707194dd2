"""Traces of T_n W_e on S_2k(N) for squarefree N in {1, 2, 3, 6}, and the
newform Atkin-Lehner eigenspace traces built from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from eta_hecke.arith import Discriminant, divisors, factorize, is_square, kronecker
from eta_hecke.trace_half import _u_range, class_terms, pk_value

__all__ = [
    "NewformSpaceSpec",
    "alpha",
    "tr_TnWe",
    "tr_new6",
    "tr_new6_direct",
    "tr_new2",
]

_LEVELS = (1, 2, 3, 6)


@dataclass(frozen=True)
class NewformSpaceSpec:
    """S_{weight2k}^new(level) cut out by Atkin-Lehner signs {p: eps_p}."""

    weight2k: int
    level: int
    signs: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if self.weight2k < 2 or self.weight2k % 2:
            raise ValueError("weight must be even and at least 2")
        if self.level not in _LEVELS:
            raise ValueError(f"level must be one of {_LEVELS}")
        signs = dict(self.signs)
        if sorted(signs) != sorted(factorize(self.level)):
            raise ValueError("one sign per prime dividing the level is required")
        if any(v not in (1, -1) for v in signs.values()):
            raise ValueError("signs must be +1 or -1")
        object.__setattr__(self, "signs", tuple(sorted(signs.items())))

    @classmethod
    def level6(cls, weight2k: int, eps2: int, eps3: int) -> NewformSpaceSpec:
        return cls(weight2k, 6, ((2, eps2), (3, eps3)))

    @classmethod
    def level2(cls, weight2k: int, eps2: int) -> NewformSpaceSpec:
        return cls(weight2k, 2, ((2, eps2),))

    @property
    def k(self) -> int:
        return self.weight2k // 2

    def sign(self, p: int) -> int:
        return dict(self.signs)[p]


def alpha(delta: Discriminant, p: int) -> int:
    """Local factor at p: 2 when p divides the conductor, else 1 + (D0/p)."""
    if delta.conductor % p == 0:
        return 2
    return 1 + kronecker(delta.fundamental, p)


def _check(N: int, e: int, weight2k: int, n: int) -> None:
    if N not in _LEVELS:
        raise ValueError(f"level {N} is outside {{1, 2, 3, 6}}")
    if N % e:
        raise ValueError(f"e = {e} does not divide N = {N}")
    if weight2k < 4 or weight2k % 2:
        raise ValueError("weight must be even and at least 4")
    if n < 1 or gcd(n, N) != 1:
        raise ValueError(f"n = {n} must be positive and coprime to {N}")


def _local(N: int, e: int, g: int, d0: int) -> int:
    c = 1
    for p in factorize(N // e):
        c *= 2 if g % p == 0 else 1 + kronecker(d0, p)
        if not c:
            break
    return c


def tr_TnWe(N: int, e: int, weight2k: int, n: int) -> Fraction:
    """Trace of T_n W_e on S_weight2k(N) (W_1 is the identity)."""
    _check(N, e, weight2k, n)
    k = weight2k // 2
    total = Fraction(0)
    for u in _u_range(e, n):
        delta = e * e * u * u - 4 * e * n
        inner = Fraction(0)
        for t in class_terms(delta):
            if gcd(t.g, e) != 1:
                continue
            w = _local(N, e, t.g, t.fundamental)
            if w:
                inner += w * t.H_up
        if inner:
            total += inner * pk_value(e, n, u, k)
    result = -total / (2 * e ** (k - 1))
    if e == 1:
        omega = len(factorize(N))
        divsum = sum(min(a, n // a) ** (2 * k - 1) for a in divisors(n))
        result -= Fraction(2**omega, 2) * divsum
        if is_square(n):
            psi = 1
            for p in factorize(N):
                psi *= p + 1
            result += Fraction(2 * k - 1, 12) * n ** (k - 1) * psi
    return result


def tr_new6(spec: NewformSpaceSpec, n: int) -> Fraction:
    """Trace of T_n on S_2k^new(6, eps2, eps3) by inclusion-exclusion over old levels."""
    if spec.level != 6:
        raise ValueError("level 6 spec required")
    w = spec.weight2k
    e2, e3 = spec.sign(2), spec.sign(3)
    level6 = (tr_TnWe(6, 1, w, n) + e2 * tr_TnWe(6, 2, w, n) + e3 * tr_TnWe(6, 3, w, n)
              + e2 * e3 * tr_TnWe(6, 6, w, n)) / 4
    level3 = (tr_TnWe(3, 1, w, n) + e3 * tr_TnWe(3, 3, w, n)) / 2
    level2 = (tr_TnWe(2, 1, w, n) + e2 * tr_TnWe(2, 2, w, n)) / 2
    return level6 - level3 - level2 + tr_TnWe(1, 1, w, n)


def _weighted_sum(e: int, n: int, k: int, weight) -> Fraction:
    total = Fraction(0)
    for u in _u_range(e, n):
        delta = e * e * u * u - 4 * e * n
        inner = sum((weight(t.g, t.fundamental) * t.H_up for t in class_terms(delta)), Fraction(0))
        if inner:
            total += inner * pk_value(e, n, u, k)
    return total


def tr_new6_direct(spec: NewformSpaceSpec, n: int) -> Fraction:
    """The same trace from the four-sum closed form with local factors (1 - (D0/p))."""
    if spec.level != 6:
        raise ValueError("level 6 spec required")
    _check(6, 1, spec.weight2k, n)
    k = spec.k
    e2, e3 = spec.sign(2), spec.sign(3)

    def f2(d0):
        return 1 - kronecker(d0, 2)

    def f3(d0):
        return 1 - kronecker(d0, 3)

    s1 = _weighted_sum(1, n, k, lambda g, d0: f2(d0) * f3(d0) if gcd(g, 6) == 1 else 0)
    s2 = _weighted_sum(2, n, k, lambda g, d0: f3(d0) if g % 3 else 0)
    s3 = _weighted_sum(3, n, k, lambda g, d0: f2(d0) if g % 2 else 0)
    s6 = _weighted_sum(6, n, k, lambda g, d0: 1)
    result = (-s1 / 8 + Fraction(e2, 8 * 2 ** (k - 1)) * s2 + Fraction(e3, 8 * 3 ** (k - 1)) * s3
              - Fraction(e2 * e3, 8 * 6 ** (k - 1)) * s6)
    if is_square(n):
        result += Fraction(2 * k - 1, 24) * n ** (k - 1)
    return result


def tr_new2(spec: NewformSpaceSpec, n: int) -> Fraction:
    """Trace of T_n on S_2k^new(2, eps2): one level-1 copy removed per sign."""
    if spec.level != 2:
        raise ValueError("level 2 spec required")
    w = spec.weight2k
    e2 = spec.sign(2)
    return (tr_TnWe(2, 1, w, n) + e2 * tr_TnWe(2, 2, w, n)) / 2 - tr_TnWe(1, 1, w, n)
