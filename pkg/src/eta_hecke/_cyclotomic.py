"""Minimal exact arithmetic in Q(zeta_m), stored in Q[x]/(x^m - 1)."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _divide_exact(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _divide_exact(num: list[int], den: list[int]) -> list[int]:
    num = num[:]
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        q[i] = c
        for j, dj in enumerate(den):
            num[i + j] -= c * dj
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return q


class CyclotomicElement:
    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs: dict[int, Fraction] | None = None):
        self.m = m
        self.coeffs = {}
        for e, c in (coeffs or {}).items():
            if c:
                e %= m
                self.coeffs[e] = self.coeffs.get(e, Fraction(0)) + c

    @classmethod
    def zero(cls, m: int) -> CyclotomicElement:
        return cls(m)

    def __add__(self, other: CyclotomicElement) -> CyclotomicElement:
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return CyclotomicElement(self.m, out)

    def shift(self, k: int) -> CyclotomicElement:
        """Multiply by zeta^k."""
        return CyclotomicElement(self.m, {e + k: c for e, c in self.coeffs.items()})

    def reduced(self) -> list[Fraction]:
        poly = [Fraction(0)] * self.m
        for e, c in self.coeffs.items():
            poly[e] += c
        phi = cyclotomic_poly(self.m)
        deg = len(phi) - 1
        for i in range(len(poly) - 1, deg - 1, -1):
            c = poly[i]
            if c:
                for j, pj in enumerate(phi):
                    poly[i - deg + j] -= c * pj
        return poly[:deg]

    def to_rational(self) -> Fraction:
        red = self.reduced()
        if any(red[1:]):
            raise ArithmeticError("cyclotomic element is not rational")
        return red[0] if red else Fraction(0)
