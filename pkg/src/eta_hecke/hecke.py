"""Hecke operators on q-expansions, their matrices on echelon bases, and
traces computed from those matrices."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Callable, Sequence

from eta_hecke.arith import factorize, kronecker
from eta_hecke.qseries import (
    EchelonBasis,
    EtaSpaceSpec,
    FourierSeries,
    PrecisionError,
    dim_ms1,
    eta_space_basis,
    level1_cusp_basis,
)

log = logging.getLogger(__name__)

__all__ = [
    "RationalMatrix",
    "SpaceInvarianceError",
    "t_psq_half",
    "t_p_integral",
    "operator_matrix",
    "hecke_matrix_half",
    "oracle_trace_T_nsq",
    "oracle_trace_T_n_level1",
    "BasisCache",
    "default_window",
]


class SpaceInvarianceError(ArithmeticError):
    """An operator image left the span of the basis."""


class RationalMatrix:
    """Small dense matrix over Q."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence]):
        rows = [[Fraction(x) for x in row] for row in rows]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        self.rows = rows

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> RationalMatrix:
        if not cols:
            return cls([])
        return cls([list(r) for r in zip(*cols)])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def trace(self) -> Fraction:
        if self.shape[0] != self.shape[1]:
            raise ValueError("trace of a non-square matrix")
        return sum((self.rows[i][i] for i in range(len(self.rows))), Fraction(0))

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        n, m = self.shape
        m2, k = other.shape
        if m != m2:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.rows)) if other.rows else []
        return RationalMatrix([[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in self.rows])

    def __add__(self, other: RationalMatrix) -> RationalMatrix:
        return RationalMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: RationalMatrix) -> RationalMatrix:
        return RationalMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def scale(self, c) -> RationalMatrix:
        return RationalMatrix([[a * c for a in r] for r in self.rows])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalMatrix) and self.rows == other.rows

    __hash__ = None

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.rows for x in r)

    def __repr__(self) -> str:
        return "RationalMatrix(" + repr([[str(x) for x in r] for r in self.rows]) + ")"


# --------------------------------------------------------------------------
# operators on series


def t_psq_half(f: FourierSeries, p: int, spec: EtaSpaceSpec, prec: int | None = None) -> FourierSeries:
    """Half-integral weight T_{p^2}:
    a(p^2 n) + chi(p) ((-1)^k n / p) p^(k-1) a(n) + p^(2k-1) a(n/p^2).
    """
    k = spec.k
    if k < 1:
        raise ValueError("T_{p^2} is not handled for weight 1/2 (k = 0)")
    if p in (2, 3) and spec.family == "eta24" or p == 2:
        raise ValueError(f"p = {p} divides the character modulus")
    if f.nu != 1:
        raise ValueError("expected a series in integral powers of q")
    p2 = p * p
    out_prec = f.prec // p2
    if prec is not None:
        if prec > out_prec:
            raise PrecisionError(f"T_{p}^2 needs input precision {p2 * prec}, have {f.prec}")
        out_prec = prec
    chi = spec.hecke_twist(p)
    sign = -1 if k % 2 else 1
    mid = chi * p ** (k - 1)
    top = p ** (2 * k - 1)
    a = f.coefficients()
    out = [0] * (out_prec + 1)
    for n in range(out_prec + 1):
        c = a[p2 * n]
        an = a[n]
        if an:
            c += mid * kronecker(sign * n, p) * an
        if n % p2 == 0 and a[n // p2]:
            c += top * a[n // p2]
        out[n] = c
    return FourierSeries(out, out_prec, 1)


def t_p_integral(f: FourierSeries, p: int, weight: int, prec: int | None = None) -> FourierSeries:
    """Level-one T_p: a(n) -> a(pn) + p^(weight-1) a(n/p)."""
    if f.nu != 1:
        raise ValueError("expected a series in integral powers of q")
    out_prec = f.prec // p
    if prec is not None:
        if prec > out_prec:
            raise PrecisionError(f"T_{p} needs input precision {p * prec}, have {f.prec}")
        out_prec = prec
    top = p ** (weight - 1)
    out = [f[p * n] + (top * f[n // p] if n % p == 0 else 0) for n in range(out_prec + 1)]
    return FourierSeries(out, out_prec, 1)


def operator_matrix(basis: EchelonBasis, apply: Callable[[FourierSeries], FourierSeries]) -> RationalMatrix:
    """Matrix of a linear operator in the echelon basis (columns are images).

    Coordinates are read at the pivots; each image is then rebuilt from them
    and compared over its entire window.
    """
    cols = []
    for elem in basis.elements:
        image = apply(elem)
        if basis.pivots and image.prec < basis.pivots[-1]:
            raise PrecisionError(f"image window {image.prec} misses pivot {basis.pivots[-1]}")
        coords = [image[p] for p in basis.pivots]
        rebuilt = basis.combination(coords, image.prec)
        if rebuilt != image:
            bad = next(i for i in range(image.prec + 1) if rebuilt[i] != image[i])
            raise SpaceInvarianceError(f"image leaves the span of the basis (first mismatch at exponent {bad})")
        cols.append(coords)
    return RationalMatrix.from_columns(cols)


# --------------------------------------------------------------------------
# basis cache and traces


def default_window(spec: EtaSpaceSpec) -> int:
    """Output window for matrices: every pivot plus two periods of slack."""
    last = spec.pivots[-1] if spec.dimension else spec.leading_exponent
    return last + 2 * spec.scale


class BasisCache:
    """Keeps one basis per space, grown on demand to the largest precision asked."""

    def __init__(self):
        self._store: dict[EtaSpaceSpec, EchelonBasis] = {}
        self._level1: dict[int, EchelonBasis] = {}

    def get(self, spec: EtaSpaceSpec, prec: int) -> EchelonBasis:
        b = self._store.get(spec)
        if b is None or b.prec < prec:
            log.info("building basis for %s at precision %d", spec.label(), prec)
            b = eta_space_basis(spec, prec)
            self._store[spec] = b
        return b

    def level1(self, weight: int, prec: int) -> EchelonBasis:
        b = self._level1.get(weight)
        if b is None or (b.dimension and b.prec < prec):
            b = level1_cusp_basis(weight, prec)
            self._level1[weight] = b
        return b

    def clear(self) -> None:
        self._store.clear()
        self._level1.clear()


_CACHE = BasisCache()


def hecke_matrix_half(spec: EtaSpaceSpec, p: int, window: int | None = None,
                      cache: BasisCache | None = None) -> RationalMatrix:
    """Matrix of T_{p^2} on the eta-type space, checked over ``window`` coefficients."""
    cache = cache or _CACHE
    d = spec.dimension
    if d == 0:
        return RationalMatrix([])
    window = default_window(spec) if window is None else window
    basis = cache.get(spec, p * p * window)
    return operator_matrix(basis, lambda f: t_psq_half(f, p, spec, window))


def _prime_power_matrices(t_p: RationalMatrix, p: int, e: int, k: int) -> RationalMatrix:
    # T(p^{2(j+1)}) = T(p^2) T(p^{2j}) - p^{2k-1} T(p^{2(j-1)})
    ident = RationalMatrix.identity(t_p.shape[0])
    prev, cur = ident, t_p
    for _ in range(e - 1):
        prev, cur = cur, (t_p @ cur) - prev.scale(p ** (2 * k - 1))
    return cur if e >= 1 else ident


def hecke_matrix_nsq(spec: EtaSpaceSpec, n: int, window: int | None = None,
                     cache: BasisCache | None = None) -> RationalMatrix:
    """Matrix of T_{n^2} from its prime-power factors."""
    d = spec.dimension
    result = RationalMatrix.identity(d)
    for p, e in sorted(factorize(n).items()):
        t_p = hecke_matrix_half(spec, p, window, cache)
        result = result @ _prime_power_matrices(t_p, p, e, spec.k)
    return result


def oracle_trace_T_nsq(spec: EtaSpaceSpec, n: int, window: int | None = None,
                       cache: BasisCache | None = None) -> Fraction:
    """Trace of T_{n^2} on the eta-type space from explicit q-expansions."""
    if n < 1:
        raise ValueError("n must be positive")
    bad = 6 if spec.family == "eta24" else 2
    if n % 2 == 0 or n % 3 == 0 and bad == 6:
        raise ValueError(f"n = {n} shares a factor with {bad}")
    if spec.k < 1:
        raise ValueError("k = 0 (weight 1/2) is not supported")
    if spec.dimension == 0:
        return Fraction(0)
    return hecke_matrix_nsq(spec, n, window, cache).trace()


def oracle_trace_T_n_level1(weight: int, n: int, cache: BasisCache | None = None) -> Fraction:
    """Trace of T_n on S_weight(1) from q-expansions of the echelon basis."""
    cache = cache or _CACHE
    d = dim_ms1(weight - 12)
    if d == 0:
        return Fraction(0)
    window = d + 4
    basis = cache.level1(weight, n * window)
    result = RationalMatrix.identity(d)
    for p, e in sorted(factorize(n).items()):
        t_p = operator_matrix(basis, lambda f, p=p: t_p_integral(f, p, weight, window))
        cur = _prime_power_matrices(t_p, p, e, weight // 2)
        result = result @ cur
    return result.trace()
