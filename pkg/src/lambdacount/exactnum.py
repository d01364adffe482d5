"""Exact integers, rationals and truncated power series.

Counts are plain Python ``int`` (unbounded) and rationals are
``fractions.Fraction`` (always reduced, positive denominator).  The series
types below carry their truncation order explicitly: a :class:`Series` of
order ``N`` knows the coefficients ``c_0..c_N`` and nothing beyond, and every
binary operation truncates to the smaller of the two orders.

``gmpy2`` is used, when importable, only inside a few hot loops through
:func:`big`; everything handed back to callers is a plain ``int``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

try:  # optional accelerator for long big-integer dot products
    from gmpy2 import mpz as big
except ImportError:  # pragma: no cover - depends on environment
    big = int

Coeff = Union[int, Fraction]


class NonIntegralError(ArithmeticError):
    """A value that must be a count turned out not to be an integer."""


def as_int(x: Coeff, what: str = "value") -> int:
    """Return ``x`` as an ``int``, failing loudly if it is not integral."""
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise NonIntegralError(f"{what} is not an integer: {x}")
        return x.numerator
    return int(x)


def gen_binomial(top: Union[int, Fraction], k: int) -> Fraction:
    """Generalized binomial coefficient ``top*(top-1)*...*(top-k+1)/k!``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    top = Fraction(top)
    num = Fraction(1)
    for i in range(k):
        num *= top - i
    return num / math.factorial(k)


def inv_sqrt_power_coeffs(k: int, m_max: int) -> list[int]:
    """Coefficients of ``(1 - 4x)^(-k/2)`` up to ``x^m_max``.

    ``[x^m] = 4^m * gen_binomial(m + k/2 - 1, m)``; the terms are produced by
    the ratio of consecutive generalized binomials, ``2(2m + k - 2)/m``, which
    keeps everything in integers.
    """
    out = [1]
    c = 1
    for m in range(1, m_max + 1):
        num = c * 2 * (2 * m + k - 2)
        c, rem = divmod(num, m)
        if rem:
            raise NonIntegralError(f"(1-4x)^(-{k}/2) coefficient {m} not integral")
        out.append(c)
    return out


def log_int(x: int) -> float:
    """Natural log of a positive integer of any size."""
    x = int(x)
    if x <= 0:
        raise ValueError("log of nonpositive integer")
    shift = x.bit_length() - 64
    if shift <= 0:
        return math.log(x)
    return math.log(x >> shift) + shift * math.log(2.0)


def unrank_combination(rank: int, n: int, k: int) -> list[int]:
    """The ``rank``-th k-subset of ``range(n)`` in lexicographic order."""
    total = math.comb(n, k)
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} outside [0, {total})")
    out = []
    x = 0
    for remaining in range(k, 0, -1):
        while True:
            # subsets whose next element is x
            c = math.comb(n - x - 1, remaining - 1)
            if rank < c:
                out.append(x)
                x += 1
                break
            rank -= c
            x += 1
    return out


def rank_combination(subset: Sequence[int], n: int) -> int:
    """Inverse of :func:`unrank_combination`."""
    k = len(subset)
    rank = 0
    prev = -1
    for i, s in enumerate(subset):
        for x in range(prev + 1, s):
            rank += math.comb(n - x - 1, k - i - 1)
        prev = s
    return rank


@dataclass(frozen=True)
class Series:
    """Truncated power series ``c_0 + c_1 z + ... + c_N z^N + O(z^{N+1})``."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable[Coeff], order: int | None = None):
        cs = list(coeffs)
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        cs = cs[: order + 1] + [0] * (order + 1 - len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def zero(cls, order: int) -> "Series":
        return cls([], order)

    @classmethod
    def monomial(cls, k: int, order: int, c: Coeff = 1) -> "Series":
        return cls([0] * k + [c], order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Coeff:
        if n < 0:
            return 0
        if n > self.order:
            raise IndexError(f"coefficient {n} beyond truncation order {self.order}")
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "Series":
        return Series(self.coeffs, min(order, self.order))

    def __add__(self, other: "Series") -> "Series":
        n = min(self.order, other.order)
        return Series([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)], n)

    def __sub__(self, other: "Series") -> "Series":
        n = min(self.order, other.order)
        return Series([self.coeffs[i] - other.coeffs[i] for i in range(n + 1)], n)

    def __neg__(self) -> "Series":
        return Series([-c for c in self.coeffs], self.order)

    def __mul__(self, other):
        if isinstance(other, Series):
            return series_mul(self, other)
        return Series([c * other for c in self.coeffs], self.order)

    __rmul__ = __mul__

    def shift(self, k: int) -> "Series":
        """Multiply by ``z^k``; the order grows by ``k``."""
        return Series([0] * k + list(self.coeffs), self.order + k)

    def pow(self, e: int) -> "Series":
        out = Series.monomial(0, self.order)
        for _ in range(e):
            out = out * self
        return out

    def is_integral(self) -> bool:
        return all(not isinstance(c, Fraction) or c.denominator == 1 for c in self.coeffs)

    def as_ints(self) -> list[int]:
        return [as_int(c, f"coefficient {i}") for i, c in enumerate(self.coeffs)]


def series_mul(a: Series, b: Series) -> Series:
    """Cauchy product truncated to ``min(a.order, b.order)``."""
    n = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    out = [0] * (n + 1)
    for i in range(n + 1):
        x = ac[i]
        if not x:
            continue
        for j in range(n + 1 - i):
            y = bc[j]
            if y:
                out[i + j] += x * y
    return Series(out, n)


def series_compose_geom(a: Series, order: int | None = None) -> Series:
    """Substitute ``z -> z/(1-z)``: ``b_n = sum_{k=1}^n C(n-1, k-1) a_k``."""
    if a[0] != 0:
        raise ValueError("composition needs a zero constant term")
    n_max = a.order if order is None else min(order, a.order)
    out = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        out[n] = sum(math.comb(n - 1, k - 1) * a.coeffs[k] for k in range(1, n + 1) if a.coeffs[k])
    return Series(out, n_max)


def series_compose_geom_inverse(b: Series) -> Series:
    """Substitute ``z -> z/(1+z)``, the inverse of :func:`series_compose_geom`."""
    if b[0] != 0:
        raise ValueError("composition needs a zero constant term")
    out = [0] * (b.order + 1)
    for n in range(1, b.order + 1):
        out[n] = sum(
            (-1) ** (n - k) * math.comb(n - 1, k - 1) * b.coeffs[k] for k in range(1, n + 1)
        )
    return Series(out, b.order)


@dataclass(frozen=True)
class BivarSeries:
    """Truncated series in ``(z, u)``; ``grid[i][j]`` is ``[z^i u^j]``.

    Truncation is rectangular: ``i <= nz`` and ``j <= nu``.
    """

    grid: tuple

    def __init__(self, grid: Iterable[Iterable[Coeff]], nz: int, nu: int):
        rows = [list(r) for r in grid]
        rows = rows[: nz + 1] + [[] for _ in range(nz + 1 - len(rows))]
        norm = tuple(tuple(r[: nu + 1] + [0] * (nu + 1 - len(r))) for r in rows)
        object.__setattr__(self, "grid", norm)

    @classmethod
    def zero(cls, nz: int, nu: int) -> "BivarSeries":
        return cls([], nz, nu)

    @classmethod
    def from_z(cls, s: Series, nu: int) -> "BivarSeries":
        """Embed a pure-z series (constant in ``u``)."""
        return cls([[c] for c in s.coeffs], s.order, nu)

    @property
    def nz(self) -> int:
        return len(self.grid) - 1

    @property
    def nu(self) -> int:
        return len(self.grid[0]) - 1

    def coeff(self, i: int, j: int) -> Coeff:
        return self.grid[i][j]

    def __add__(self, other: "BivarSeries") -> "BivarSeries":
        nz, nu = min(self.nz, other.nz), min(self.nu, other.nu)
        return BivarSeries(
            [[self.grid[i][j] + other.grid[i][j] for j in range(nu + 1)] for i in range(nz + 1)],
            nz,
            nu,
        )

    def __sub__(self, other: "BivarSeries") -> "BivarSeries":
        return self + other.scale(-1)

    def scale(self, c: Coeff) -> "BivarSeries":
        return BivarSeries([[c * x for x in row] for row in self.grid], self.nz, self.nu)

    def shift_z(self, k: int) -> "BivarSeries":
        """Multiply by ``z^k`` keeping the same truncation."""
        zero_row = [0] * (self.nu + 1)
        return BivarSeries([zero_row] * k + [list(r) for r in self.grid], self.nz, self.nu)

    def __mul__(self, other: "BivarSeries") -> "BivarSeries":
        nz, nu = min(self.nz, other.nz), min(self.nu, other.nu)
        a, b = self.grid, other.grid
        out = [[0] * (nu + 1) for _ in range(nz + 1)]
        b_nonzero = [any(r[: nu + 1]) for r in b]
        for i in range(nz + 1):
            ai = a[i]
            if not any(ai[: nu + 1]):
                continue
            for k in range(nz + 1 - i):
                if not b_nonzero[k]:
                    continue
                bk = b[k]
                row = out[i + k]
                for j, x in enumerate(ai[: nu + 1]):
                    if x:
                        for l in range(nu + 1 - j):
                            y = bk[l]
                            if y:
                                row[j + l] += x * y
        return BivarSeries(out, nz, nu)

    def inverse(self) -> "BivarSeries":
        """``1/a`` for a series with constant term 1."""
        if self.grid[0][0] != 1 or any(self.grid[0][1:]):
            raise ValueError("inverse implemented only for constant term exactly 1")
        nu = self.nu
        a = self.grid
        out = [[1] + [0] * nu]
        for i in range(1, self.nz + 1):
            row = [0] * (nu + 1)
            for k in range(1, i + 1):
                ak, bk = a[k], out[i - k]
                for j, x in enumerate(ak):
                    if x:
                        for l in range(nu + 1 - j):
                            row[j + l] -= x * bk[l]
            out.append(row)
        return BivarSeries(out, self.nz, nu)

    def extract_u(self, p: int) -> Series:
        return bivar_extract_u(self, p)


def bivar_extract_u(a: BivarSeries, p: int) -> Series:
    """The ``[u^p]`` slice of ``a`` as a univariate series in ``z``."""
    if p < 0 or p > a.nu:
        raise ValueError(f"u-degree {p} outside truncation 0..{a.nu}")
    return Series([row[p] for row in a.grid], a.nz)


def compose_z_times_inv_sqrt(a: Series, nu: int) -> BivarSeries:
    """``a(z/sqrt(1-4u))`` as a bivariate series.

    ``[z^k u^j] = a_k * 4^j * gen_binomial(j + k/2 - 1, j)``.
    """
    grid = []
    for k, ak in enumerate(a.coeffs):
        if not ak:
            grid.append([0] * (nu + 1))
            continue
        kern = inv_sqrt_power_coeffs(k, nu)
        grid.append([ak * c for c in kern])
    return BivarSeries(grid, a.order, nu)
