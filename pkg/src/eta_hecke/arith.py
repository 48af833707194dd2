"""Exact arithmetic substrate: quadratic symbols, discriminants, class numbers,
real Dirichlet characters and first generalized Bernoulli numbers."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from eta_hecke._cyclotomic import CyclotomicElement

__all__ = [
    "Discriminant",
    "DirichletCharacter",
    "CotCharsum",
    "NotADiscriminant",
    "kronecker",
    "factorize",
    "divisors",
    "is_square",
    "euler_phi",
    "moebius",
    "to_discriminant",
    "is_fundamental",
    "hurwitz_H",
    "real_characters",
    "bernoulli_B1",
    "charsum_suz",
    "charsum_direct",
    "cot_charsum",
    "bernoulli_number",
]


class NotADiscriminant(ValueError):
    """Raised when an integer is not congruent to 0 or 1 mod 4."""


# --------------------------------------------------------------------------
# elementary number theory


@lru_cache(maxsize=65536)
def _factor_cached(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    d = 2
    while n % d == 0:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        out.append((d, e))
    d = 3
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``|n|`` by trial division (``n != 0``)."""
    if n == 0:
        raise ValueError("cannot factor 0")
    return dict(_factor_cached(abs(n)))


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out -= out // p
    return out


def moebius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def kronecker(a: int, b: int) -> int:
    """Kronecker symbol (a/b), defined for all integers a, b."""
    if b == 0:
        return 1 if a in (1, -1) else 0
    if a % 2 == 0 and b % 2 == 0:
        return 0
    sign = 1
    v = 0
    while b % 2 == 0:
        b //= 2
        v += 1
    if v % 2 == 1 and a % 8 in (3, 5):
        sign = -sign
    if b < 0:
        b = -b
        if a < 0:
            sign = -sign
    # b odd positive: Jacobi symbol
    a %= b
    while a:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                sign = -sign
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            sign = -sign
        a %= b
    return sign if b == 1 else 0


@lru_cache(maxsize=None)
@lru_cache(maxsize=None)
def bernoulli_number(m: int) -> Fraction:
    """Classical Bernoulli number B_m with B_1 = -1/2."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return Fraction(1)
    if m == 1:
        return Fraction(-1, 2)
    if m % 2 == 1:
        return Fraction(0)
    # sum_{j<=m} C(m+1, j) B_j = 0
    total = Fraction(0)
    for j in range(m):
        total += math.comb(m + 1, j) * bernoulli_number(j)
    return -total / (m + 1)


# --------------------------------------------------------------------------
# discriminants and class numbers


@dataclass(frozen=True)
class Discriminant:
    """A negative discriminant D = conductor^2 * fundamental."""

    value: int
    fundamental: int
    conductor: int

    def __post_init__(self):
        if self.conductor**2 * self.fundamental != self.value:
            raise ValueError("inconsistent discriminant factorization")


def is_fundamental(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return moebius(abs(d)) != 0
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and moebius(abs(m)) != 0
    return False


def to_discriminant(D: int) -> Discriminant:
    if D >= 0:
        raise ValueError(f"discriminant must be negative, got {D}")
    if D % 4 not in (0, 1):
        raise NotADiscriminant(D)
    core = -1
    for p, e in factorize(D).items():
        if e % 2:
            core *= p
    d0 = core if core % 4 == 1 else 4 * core
    f = math.isqrt(D // d0)
    return Discriminant(D, d0, f)


@lru_cache(maxsize=None)
def _class_number_weighted(D: int) -> Fraction:
    # reduced forms: |b| <= a <= c, b >= 0 when |b| == a or a == c
    count = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) == 1:
                count += 1
        a += 1
    if D == -3:
        return Fraction(count, 3)
    if D == -4:
        return Fraction(count, 2)
    return Fraction(count)


def hurwitz_H(D: int) -> Fraction:
    """Weighted class number of primitive positive definite forms of
    discriminant D; zero unless D is a negative discriminant."""
    if D >= 0 or D % 4 not in (0, 1):
        return Fraction(0)
    return _class_number_weighted(D)


# --------------------------------------------------------------------------
# real Dirichlet characters


@dataclass(frozen=True)
class DirichletCharacter:
    """The real character a -> (u/a) * chi0_M(a).

    ``u`` is 1 or a fundamental discriminant whose absolute value divides
    ``modulus``.
    """

    modulus: int
    u: int = 1

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        if self.u != 1 and not is_fundamental(self.u):
            raise ValueError(f"{self.u} is not a fundamental discriminant")
        if self.modulus % abs(self.u):
            raise ValueError(f"conductor {abs(self.u)} does not divide {self.modulus}")

    def __call__(self, a: int) -> int:
        if math.gcd(a, self.modulus) != 1:
            return 0
        return kronecker(self.u, a)

    @property
    def is_principal(self) -> bool:
        return self.u == 1

    @property
    def is_even(self) -> bool:
        return self.u > 0

    @classmethod
    def trivial(cls) -> DirichletCharacter:
        return cls(1, 1)


def real_characters(M: int) -> list[DirichletCharacter]:
    """All real Dirichlet characters modulo M, principal first."""
    us = [1] + [u for u in range(-M, M + 1) if is_fundamental(u) and M % abs(u) == 0]
    return [DirichletCharacter(M, u) for u in us]


@lru_cache(maxsize=None)
def bernoulli_B1(chi: DirichletCharacter) -> Fraction:
    """B_{1,chi} = sum over 0 <= a < M of chi(a) (a/M - 1/2).

    Representatives run over [0, M), which gives -1/2 for the trivial
    character mod 1 and agrees with the usual value for M > 1.
    """
    M = chi.modulus
    total = Fraction(0)
    for a in range(M):
        c = chi(a) if M > 1 else 1
        if c:
            total += c * (Fraction(a, M) - Fraction(1, 2))
    return total


def charsum_direct(chi: DirichletCharacter, N: int, j: int) -> int:
    """Sum of chi(u) over integers 0 <= u < N/j."""
    upper = -(-N // j)
    return sum(chi(u) if chi.modulus > 1 else 1 for u in range(upper))


def charsum_prefix(chi: DirichletCharacter, upper: int) -> list[int]:
    """Running sums: entry x is the sum of chi(u) over 0 <= u < x, for x <= upper."""
    out = [0]
    for u in range(upper):
        out.append(out[-1] + (chi(u) if chi.modulus > 1 else 1))
    return out


def _primitive_root(p: int) -> int:
    phi = p - 1
    primes = list(factorize(phi))
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in primes):
            return g
    raise ValueError(f"no primitive root mod {p}")


def charsum_suz(chi: DirichletCharacter, N: int, j: int) -> Fraction:
    """Closed form for sum_{0 <= u < N/j} chi(u) via twisted Bernoulli numbers.

    Characters psi mod j are real when j | 24 and are handled exactly in a
    cyclotomic field when j is prime.
    """
    M = chi.modulus
    if N <= 0 or N % M:
        raise ValueError("N must be a positive multiple of the modulus")
    if j < 1 or math.gcd(j, N) != 1:
        raise ValueError("j must be positive and coprime to N")
    jM = j * M

    def chi_val(a: int) -> int:
        return 1 if M == 1 else chi(a)

    main = -bernoulli_B1(chi)
    if 24 % j == 0:
        acc = Fraction(0)
        for psi in real_characters(j):
            prod = DirichletCharacter(jM, _char_product_u(chi.u, psi.u)) if jM > 1 else None
            b0, b1 = _bernoulli_01(prod)
            acc += psi(-N) * (b0 * N + b1) if j > 1 else (b0 * N + b1)
        return main + Fraction(chi_val(j), euler_phi(j)) * acc
    if factorize(j) != {j: 1}:
        raise NotImplementedError("psi mod j is supported for j | 24 or j prime")

    value = _twisted_sum(chi, j, N % j)
    if chi.is_principal:
        value += Fraction(N * euler_phi(jM), jM)
    return main + Fraction(chi_val(j), euler_phi(j)) * value


@lru_cache(maxsize=None)
def _twisted_bernoulli(chi: DirichletCharacter, j: int) -> tuple[dict[int, int], list[dict[int, Fraction]]]:
    """Index table mod prime j and, per psi_t, B_{1, chi psi_t} as a sum of powers of zeta_{j-1}.

    Independent of N; the principal product (t = 0, chi trivial) is left empty
    since its value is linear in N.
    """
    M = chi.modulus
    jM = j * M
    m = j - 1
    g = _primitive_root(j)
    ind = {}
    x = 1
    for e in range(m):
        ind[x] = e
        x = x * g % j
    twisted = []
    for t in range(m):
        coeffs: dict[int, Fraction] = {}
        if not (t == 0 and chi.is_principal):
            for a in range(1, jM):
                if a % j == 0:
                    continue
                c = 1 if M == 1 else chi(a)
                if not c:
                    continue
                e = (t * ind[a % j]) % m
                coeffs[e] = coeffs.get(e, Fraction(0)) + Fraction(c * a, jM)
        twisted.append(coeffs)
    return ind, twisted


@lru_cache(maxsize=None)
def _twisted_sum(chi: DirichletCharacter, j: int, residue: int) -> Fraction:
    """sum over nonprincipal-product psi mod prime j of psi(-N) B_{1, chi psi}, with N = residue mod j."""
    m = j - 1
    ind, twisted = _twisted_bernoulli(chi, j)
    minus_n = ind[(-residue) % j]
    acc = CyclotomicElement.zero(m)
    for t, coeffs in enumerate(twisted):
        if coeffs:
            acc = acc + CyclotomicElement(m, coeffs).shift(-t * minus_n)
    return acc.to_rational()


def _char_product_u(u1: int, u2: int) -> int:
    """Fundamental discriminant of the primitive character (u1/.)(u2/.)."""
    prod = u1 * u2
    if prod == 1:
        return 1
    core = 1 if prod > 0 else -1
    for p, e in factorize(prod).items():
        if e % 2:
            core *= p
    if core == 1:
        return 1
    return core if core % 4 == 1 else 4 * core


def _bernoulli_01(chi: DirichletCharacter | None) -> tuple[Fraction, Fraction]:
    if chi is None:
        return Fraction(1), Fraction(-1, 2)
    M = chi.modulus
    b0 = Fraction(euler_phi(M), M) if chi.is_principal else Fraction(0)
    return b0, bernoulli_B1(chi)


@dataclass(frozen=True)
class CotCharsum:
    """Numerical value of sum_a (a/n) / (1 - e^{2 pi i a/n}) and its
    predicted value ``factor * rational`` with factor 1 or i*sqrt(n)."""

    n: int
    value: complex
    rational: Fraction
    imaginary: bool

    @property
    def predicted(self) -> complex:
        if self.imaginary:
            return 1j * math.sqrt(self.n) * float(self.rational)
        return complex(float(self.rational))

    def agrees(self, rel_tol: float = 1e-8) -> bool:
        pred = self.predicted
        return abs(self.value - pred) <= rel_tol * max(1.0, abs(pred))


def cot_charsum(n: int) -> CotCharsum:
    if n <= 1 or n % 2 == 0:
        raise ValueError("n must be odd and greater than 1")
    value = 0j
    for a in range(1, n):
        s = kronecker(a, n)
        if s:
            value += s / (1 - cmath.exp(2j * math.pi * a / n))
    if n % 4 == 1:
        rational = Fraction(euler_phi(n), 2) if is_square(n) else Fraction(0)
        return CotCharsum(n, value, rational, False)
    return CotCharsum(n, value, hurwitz_H(-n), True)


def iter_discriminant_divisors(D: int) -> Iterator[int]:
    """Positive g with D/g^2 a discriminant (g runs over divisors of the conductor)."""
    f = to_discriminant(D).conductor
    yield from divisors(f)
