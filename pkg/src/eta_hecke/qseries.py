"""Exact truncated q-expansions with fractional exponents, eta products,
Eisenstein series and echelon bases of eta-type cusp spaces."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import gmpy2

from eta_hecke.arith import DirichletCharacter, bernoulli_number, kronecker

log = logging.getLogger(__name__)

Number = Union[int, Fraction]

__all__ = [
    "FourierSeries",
    "EtaSpaceSpec",
    "EchelonBasis",
    "PrecisionError",
    "eta_series",
    "euler_product",
    "eisenstein",
    "ms1_basis",
    "dim_ms1",
    "echelonize",
    "eta_space_basis",
    "level1_cusp_basis",
    "partition_numbers",
]


class PrecisionError(ValueError):
    """A coefficient outside the known window was requested."""


# --------------------------------------------------------------------------
# exact polynomial multiplication (Kronecker substitution)

_LEAF = 32


def _pack(cs: Sequence[int], w: int) -> int:
    n = len(cs)
    if n <= _LEAF:
        x = 0
        for c in reversed(cs):
            x = (x << w) + c
        return x
    mid = n // 2
    return _pack(cs[:mid], w) + (_pack(cs[mid:], w) << (w * mid))


def _unpack(x: int, w: int, n: int) -> list[int]:
    # digits are balanced: each lies in [-2^(w-1), 2^(w-1))
    if n <= _LEAF:
        out = []
        mask = (1 << w) - 1
        half = 1 << (w - 1)
        for _ in range(n):
            d = x & mask
            if d >= half:
                d -= 1 << w
            out.append(d)
            x = (x - d) >> w
        return out
    mid = n // 2
    width = w * mid
    lo = x & ((1 << width) - 1)
    if lo >> (width - 1):
        lo -= 1 << width
    hi = (x - lo) >> width
    return _unpack(lo, w, mid) + _unpack(hi, w, n - mid)


def _bits(cs: Sequence[int]) -> int:
    return max((abs(c).bit_length() for c in cs), default=0)


def poly_mul(a: Sequence[int], b: Sequence[int], n_out: int) -> list[int]:
    """First ``n_out`` coefficients of the product of two integer polynomials."""
    a = list(a[:n_out])
    b = list(b[:n_out])
    if not a or not b:
        return [0] * n_out
    if min(len(a), len(b)) <= 8:
        out = [0] * n_out
        if len(a) < len(b):
            a, b = b, a
        for j, bj in enumerate(b):
            if bj:
                for i in range(min(len(a), n_out - j)):
                    out[i + j] += a[i] * bj
        return out
    w = _bits(a) + _bits(b) + min(len(a), len(b)).bit_length() + 2
    x = gmpy2.mpz(_pack(a, w)) * gmpy2.mpz(_pack(b, w))
    prod = _unpack(int(x), w, len(a) + len(b) - 1)
    prod = prod[:n_out]
    prod.extend([0] * (n_out - len(prod)))
    return prod


def _common_denominator(cs: Iterable[Number]) -> int:
    den = 1
    for c in cs:
        if isinstance(c, Fraction) and c.denominator != 1:
            den = math.lcm(den, c.denominator)
    return den


def _normalize(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


def _support(cs: Sequence[Number]) -> tuple[int, int] | None:
    """(first nonzero index, gcd of index gaps) or None for the zero series."""
    first = None
    g = 0
    for i, c in enumerate(cs):
        if c:
            if first is None:
                first = i
            elif g != 1:
                g = math.gcd(g, i - first)
    if first is None:
        return None
    return first, g


# --------------------------------------------------------------------------
# Fourier series


class FourierSeries:
    """Truncated expansion sum a(n) q^(n/nu) for 0 <= n <= prec.

    Coefficients beyond ``prec`` are unknown, not zero. Instances are treated
    as immutable.
    """

    __slots__ = ("nu", "prec", "_c")

    def __init__(self, coeffs: Iterable[Number], prec: int | None = None, nu: int = 1):
        c = [_normalize(x) for x in coeffs]
        if prec is None:
            prec = len(c) - 1
        if prec < 0:
            raise ValueError("precision must be nonnegative")
        if len(c) > prec + 1:
            c = c[: prec + 1]
        elif len(c) < prec + 1:
            c.extend([0] * (prec + 1 - len(c)))
        self.nu = nu
        self.prec = prec
        self._c = c

    @classmethod
    def _raw(cls, c: list, nu: int) -> FourierSeries:
        obj = cls.__new__(cls)
        obj.nu = nu
        obj.prec = len(c) - 1
        obj._c = c
        return obj

    @classmethod
    def zero(cls, prec: int, nu: int = 1) -> FourierSeries:
        return cls._raw([0] * (prec + 1), nu)

    @classmethod
    def one(cls, prec: int, nu: int = 1) -> FourierSeries:
        c = [0] * (prec + 1)
        c[0] = 1
        return cls._raw(c, nu)

    # -- access
    def __getitem__(self, n: int) -> Number:
        if n < 0:
            return 0
        if n > self.prec:
            raise PrecisionError(f"coefficient {n} requested, precision is {self.prec}")
        return self._c[n]

    def coefficients(self) -> list[Number]:
        return list(self._c)

    def __len__(self) -> int:
        return self.prec + 1

    def __iter__(self):
        return iter(self._c)

    def is_zero(self) -> bool:
        return not any(self._c)

    def valuation(self) -> int | None:
        for i, c in enumerate(self._c):
            if c:
                return i
        return None

    def support(self) -> tuple[int, int] | None:
        return _support(self._c)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._c)

    def __repr__(self) -> str:
        shown = ", ".join(f"{i}: {c}" for i, c in enumerate(self._c[:40]) if c)
        return f"FourierSeries(nu={self.nu}, prec={self.prec}, {{{shown}}})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FourierSeries):
            return NotImplemented
        return self.nu == other.nu and self.prec == other.prec and self._c == other._c

    __hash__ = None

    # -- arithmetic
    def _check(self, other: FourierSeries) -> int:
        if self.nu != other.nu:
            raise ValueError(f"exponent denominators differ: {self.nu} vs {other.nu}")
        return min(self.prec, other.prec)

    def __add__(self, other: FourierSeries) -> FourierSeries:
        p = self._check(other)
        return FourierSeries._raw([_normalize(a + b) for a, b in zip(self._c[: p + 1], other._c)], self.nu)

    def __sub__(self, other: FourierSeries) -> FourierSeries:
        p = self._check(other)
        return FourierSeries._raw([_normalize(a - b) for a, b in zip(self._c[: p + 1], other._c)], self.nu)

    def __neg__(self) -> FourierSeries:
        return FourierSeries._raw([-a for a in self._c], self.nu)

    def scale(self, c: Number) -> FourierSeries:
        c = _normalize(c)
        if c == 0:
            return FourierSeries.zero(self.prec, self.nu)
        return FourierSeries._raw([_normalize(a * c) if a else 0 for a in self._c], self.nu)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, FourierSeries):
            return NotImplemented
        p = self._check(other)
        n_out = p + 1
        sa, sb = self.support(), other.support()
        if sa is None or sb is None or sa[0] + sb[0] > p:
            return FourierSeries.zero(p, self.nu)
        (oa, ga), (ob, gb) = sa, sb
        step = math.gcd(ga, gb) or 1
        a = self._c[oa : p + 1 : step]
        b = other._c[ob : p + 1 : step]
        m = (p - oa - ob) // step + 1
        da, db = _common_denominator(a), _common_denominator(b)
        if da != 1:
            a = [int(x * da) for x in a]
        if db != 1:
            b = [int(x * db) for x in b]
        prod = poly_mul(a, b, m)
        out = [0] * n_out
        if da * db != 1:
            den = da * db
            prod = [_normalize(Fraction(x, den)) if x else 0 for x in prod]
        out[oa + ob :: step] = prod[: len(range(oa + ob, n_out, step))]
        return FourierSeries._raw(out, self.nu)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> FourierSeries:
        if not isinstance(e, int) or e < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = FourierSeries.one(self.prec, self.nu)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def truncate(self, prec: int) -> FourierSeries:
        if prec > self.prec:
            raise PrecisionError(f"cannot extend precision {self.prec} to {prec}")
        return FourierSeries._raw(self._c[: prec + 1], self.nu)

    def shift(self, k: int) -> FourierSeries:
        """Multiply by q^(k/nu), keeping the known window."""
        if k < 0:
            raise ValueError("negative shifts are not supported")
        return FourierSeries._raw(([0] * k + self._c)[: self.prec + 1], self.nu)

    def substitute(self, scale: int, prec: int | None = None) -> FourierSeries:
        """f(scale * tau); the exponent denominator is reduced as far as possible."""
        g = math.gcd(self.nu, scale)
        nu = self.nu // g
        step = scale // g
        top = self.prec * step if prec is None else prec
        # coefficients above prec*step are unknown
        top = min(top, self.prec * step + step - 1)
        c = [0] * (top + 1)
        src = self._c[: top // step + 1]
        c[0 : len(src) * step : step] = src
        return FourierSeries._raw(c, nu)

    def with_nu(self, nu: int) -> FourierSeries:
        """Re-express in q^(1/nu) units; nu must be a multiple or divisor compatible with the support."""
        if nu == self.nu:
            return self
        if nu % self.nu == 0:
            step = nu // self.nu
            c = [0] * (self.prec * step + 1)
            c[::step] = self._c
            return FourierSeries._raw(c, nu)
        if self.nu % nu == 0:
            step = self.nu // nu
            if any(c for i, c in enumerate(self._c) if i % step):
                raise ValueError("series has exponents not representable with the new denominator")
            return FourierSeries._raw(self._c[::step], nu)
        raise ValueError("incompatible exponent denominators")

    def map_coefficients(self, fn) -> FourierSeries:
        return FourierSeries._raw([_normalize(fn(c)) for c in self._c], self.nu)


# --------------------------------------------------------------------------
# basic modular objects


def euler_product(prec: int) -> FourierSeries:
    """prod_{n>=1} (1 - q^n) with nu = 1, via the pentagonal number theorem."""
    c = [0] * (prec + 1)
    m = 0
    while True:
        done = True
        for mm in (m, -m) if m else (0,):
            e = mm * (3 * mm - 1) // 2
            if e <= prec:
                c[e] = -1 if mm % 2 else 1
                done = False
        if done:
            break
        m += 1
    return FourierSeries._raw(c, 1)


def eta_series(scale: int, prec: int) -> FourierSeries:
    """eta(scale * tau) as a series in q^(1/nu), nu = 24/gcd(24, scale)."""
    if prec < 1:
        raise ValueError("precision must be at least 1")
    g = math.gcd(24, scale)
    nu = 24 // g
    mult = scale // g
    c = [0] * (prec + 1)
    m = 0
    while True:
        hit = False
        for mm in {m, -m}:
            e = (6 * mm + 1) ** 2 * mult
            if e <= prec:
                c[e] = -1 if mm % 2 else 1
                hit = True
        if not hit and (6 * m - 1) ** 2 * mult > prec:
            break
        m += 1
    return FourierSeries._raw(c, nu)


def _sigma_table(k: int, n: int) -> list[int]:
    sig = [0] * (n + 1)
    for d in range(1, n + 1):
        dk = d**k
        for m in range(d, n + 1, d):
            sig[m] += dk
    return sig


@lru_cache(maxsize=64)
def eisenstein(s: int, prec: int) -> FourierSeries:
    """E_s = 1 - (2s/B_s) sum sigma_{s-1}(n) q^n, s >= 4 even."""
    if s < 4 or s % 2:
        raise ValueError("Eisenstein series need even weight s >= 4")
    factor = Fraction(-2 * s) / bernoulli_number(s)
    sig = _sigma_table(s - 1, prec)
    c = [1] + [_normalize(factor * sig[n]) for n in range(1, prec + 1)]
    return FourierSeries._raw(c, 1)


def dim_ms1(s: int) -> int:
    if s < 0 or s % 2:
        return 0
    return s // 12 if s % 12 == 2 else s // 12 + 1


def ms1_basis(s: int, prec: int) -> list[FourierSeries]:
    """The monomials E4^a E6^b with 4a + 6b = s (a basis of M_s(1))."""
    if s < 0 or s % 2:
        raise ValueError("weight must be a nonnegative even integer")
    out = []
    for b in range(s // 6 + 1):
        rest = s - 6 * b
        if rest % 4:
            continue
        a = rest // 4
        f = FourierSeries.one(prec)
        if a:
            f = f * eisenstein(4, prec) ** a
        if b:
            f = f * eisenstein(6, prec) ** b
        out.append(f)
    return out


# --------------------------------------------------------------------------
# eta-type spaces


@dataclass(frozen=True)
class EtaSpaceSpec:
    """The space {eta(scale tau)^r f(scale tau) : f in M_s(1)}.

    ``family`` is ``"eta24"`` (scale 24, (r, 6) = 1) or ``"eta8"``
    (scale 8, r = 3 r' with r' odd, 0 < r' < 8).
    """

    family: str
    r: int
    s: int

    def __post_init__(self):
        if self.s < 0 or self.s % 2:
            raise ValueError(f"s must be a nonnegative even integer, got {self.s}")
        if self.family == "eta24":
            if not (0 < self.r < 24 and math.gcd(self.r, 6) == 1):
                raise ValueError(f"eta24 needs (r,6)=1 and 0<r<24, got r={self.r}")
        elif self.family == "eta8":
            if self.r % 3 or not (0 < self.r // 3 < 8 and (self.r // 3) % 2):
                raise ValueError(f"eta8 needs r = 3r' with r' odd in (0,8), got r={self.r}")
        else:
            raise ValueError(f"unknown family {self.family!r}")

    @classmethod
    def eta24(cls, r: int, s: int) -> EtaSpaceSpec:
        return cls("eta24", r, s)

    @classmethod
    def eta8(cls, r_prime: int, s: int) -> EtaSpaceSpec:
        return cls("eta8", 3 * r_prime, s)

    @property
    def scale(self) -> int:
        return 24 if self.family == "eta24" else 8

    @property
    def eta_power(self) -> int:
        return self.r

    @property
    def r_prime(self) -> int:
        return self.r if self.family == "eta24" else self.r // 3

    @property
    def k(self) -> int:
        return (self.r - 1) // 2 + self.s

    @property
    def weight(self) -> Fraction:
        return Fraction(2 * self.k + 1, 2)

    @property
    def character(self) -> DirichletCharacter:
        return DirichletCharacter(12, 12) if self.family == "eta24" else DirichletCharacter(4, -4)

    @property
    def dimension(self) -> int:
        return dim_ms1(self.s)

    @property
    def leading_exponent(self) -> int:
        """Exponent of q in eta(scale tau)^r, i.e. scale * r / 24."""
        return self.scale * self.r // 24

    @property
    def pivots(self) -> list[int]:
        """Leading exponents (in q) of the echelon basis elements."""
        return [self.leading_exponent + self.scale * i for i in range(self.dimension)]

    @property
    def level(self) -> int:
        return 576 if self.family == "eta24" else 64

    def hecke_twist(self, p: int) -> int:
        """Sign multiplying ((-1)^k n / p) p^(k-1) a(n) in T_{p^2}, n the q-exponent.

        For the eta8 family only the trivial twist keeps the space stable;
        (-4/p) and the other quadratic candidates all fail the span check.
        """
        if self.family == "eta24":
            return kronecker(12, p)
        return 1 if p % 2 else 0

    def label(self) -> str:
        if self.family == "eta24":
            return f"eta24(r={self.r},s={self.s})"
        return f"eta8(r'={self.r_prime},s={self.s})"


@dataclass(frozen=True)
class EchelonBasis:
    """Basis with unit leading coefficients at strictly increasing pivots,
    each element vanishing at the other pivots."""

    elements: tuple[FourierSeries, ...]
    pivots: tuple[int, ...]
    spec: EtaSpaceSpec | None = None
    weight: int | None = None
    extra: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if len(self.elements) != len(self.pivots):
            raise ValueError("one pivot per element required")
        if any(b <= a for a, b in zip(self.pivots, self.pivots[1:])):
            raise ValueError("pivots must strictly increase")

    @property
    def dimension(self) -> int:
        return len(self.elements)

    @property
    def prec(self) -> int:
        return min((e.prec for e in self.elements), default=0)

    def truncate(self, prec: int) -> EchelonBasis:
        if self.pivots and prec < self.pivots[-1]:
            raise PrecisionError(f"precision {prec} does not reach pivot {self.pivots[-1]}")
        return EchelonBasis(
            tuple(e.truncate(prec) for e in self.elements), self.pivots, self.spec, self.weight
        )

    def coordinates(self, f: FourierSeries) -> list[Number]:
        return [f[p] for p in self.pivots]

    def combination(self, coords: Sequence[Number], prec: int | None = None) -> FourierSeries:
        prec = self.prec if prec is None else prec
        nu = self.elements[0].nu if self.elements else 1
        out = FourierSeries.zero(prec, nu)
        for c, e in zip(coords, self.elements):
            if c:
                out = out + e.truncate(prec).scale(c)
        return out

    def is_echelon(self) -> bool:
        for i, e in enumerate(self.elements):
            if e.valuation() != self.pivots[i] or e[self.pivots[i]] != 1:
                return False
            if any(e[p] for j, p in enumerate(self.pivots) if j != i):
                return False
        return True


def _div(c: Number, lead: Number) -> Number:
    if isinstance(c, int) and isinstance(lead, int) and c % lead == 0:
        return c // lead
    return _normalize(Fraction(c) / lead)


def echelonize(series: Sequence[FourierSeries]) -> tuple[list[FourierSeries], list[int]]:
    """Reduced row echelon form by leading exponent; zero rows are dropped."""
    rows = [list(s.coefficients()) for s in series]
    if not rows:
        return [], []
    prec = min(s.prec for s in series)
    nu = series[0].nu
    rows = [r[: prec + 1] for r in rows]
    pivots: list[int] = []
    done: list[list[Number]] = []
    remaining = rows
    while remaining:
        lead_idx = None
        best = None
        for idx, row in enumerate(remaining):
            v = next((i for i, c in enumerate(row) if c), None)
            if v is not None and (best is None or v < best):
                best, lead_idx = v, idx
        if lead_idx is None:
            break
        row = remaining.pop(lead_idx)
        lead = row[best]
        if lead != 1:
            row = [_div(c, lead) if c else 0 for c in row]
        new_remaining = []
        for other in remaining:
            c = other[best]
            if c:
                other = [_normalize(x - c * y) if y else x for x, y in zip(other, row)]
            new_remaining.append(other)
        remaining = new_remaining
        for i, other in enumerate(done):
            c = other[best]
            if c:
                done[i] = [_normalize(x - c * y) if y else x for x, y in zip(other, row)]
        done.append(row)
        pivots.append(best)
    order = sorted(range(len(pivots)), key=pivots.__getitem__)
    return [FourierSeries._raw(done[i], nu) for i in order], [pivots[i] for i in order]


def _memory_estimate(prec: int, dim: int) -> int:
    return 8 * (prec + 1) * max(dim, 1)


def eta_space_basis(spec: EtaSpaceSpec, prec: int) -> EchelonBasis:
    """Echelon basis of the eta-type space as series in q (nu = 1)."""
    d = spec.dimension
    if d == 0:
        return EchelonBasis((), (), spec)
    need = spec.pivots[-1]
    if prec < need:
        raise PrecisionError(f"precision {prec} below the last pivot {need} of {spec.label()}")
    log.debug("building %s to precision %d (~%d bytes)", spec.label(), prec, _memory_estimate(prec, d))
    eta = eta_series(spec.scale, prec * (24 // math.gcd(24, spec.scale)))
    eta_pow = (eta**spec.eta_power).with_nu(1)
    products = []
    for f in ms1_basis(spec.s, prec // spec.scale):
        products.append(eta_pow * f.substitute(spec.scale, prec))
    elements, pivots = echelonize(products)
    if pivots != spec.pivots:
        raise ArithmeticError(f"unexpected pivots {pivots} for {spec.label()}")
    return EchelonBasis(tuple(elements), tuple(pivots), spec)


def level1_cusp_basis(weight: int, prec: int) -> EchelonBasis:
    """Echelon basis of S_weight(1) = Delta * M_{weight-12}(1)."""
    if weight < 12 or weight % 2:
        raise ValueError("weight must be even and at least 12")
    d = dim_ms1(weight - 12)
    if d == 0:
        return EchelonBasis((), (), None, weight)
    if prec < d:
        raise PrecisionError(f"precision {prec} below the last pivot {d}")
    delta = (euler_product(prec) ** 24).shift(1)
    elements, pivots = echelonize([delta * f for f in ms1_basis(weight - 12, prec)])
    return EchelonBasis(tuple(elements), tuple(pivots), None, weight)


def partition_numbers(N: int) -> list[int]:
    """p(0), ..., p(N) by Euler's pentagonal recurrence."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    p = [0] * (N + 1)
    p[0] = 1
    pent = []
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > N:
            break
        sign = 1 if k % 2 else -1
        pent.append((g1, sign))
        g2 = k * (3 * k + 1) // 2
        if g2 <= N:
            pent.append((g2, sign))
        k += 1
    for n in range(1, N + 1):
        total = 0
        for g, sign in pent:
            if g > n:
                break
            total += sign * p[n - g]
        p[n] = total
    return p
