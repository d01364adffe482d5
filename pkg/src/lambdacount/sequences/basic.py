"""Catalan and Motzkin numbers, the alpha constants, Q_p and zeta."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from ..exactnum import BivarSeries, NonIntegralError, Series, gen_binomial
from .table import RouteMismatch


def catalan(n: int) -> int:
    if n < 0:
        raise ValueError("catalan index must be >= 0")
    return math.comb(2 * n, n) // (n + 1)


# Motzkin trees counted by number of nodes: M_1 = 1, M_2 = 1, M_3 = 2, ...
_motzkin = [0, 1, 1]


def motzkin(n: int) -> int:
    """Number of Motzkin (unary-binary) trees with ``n`` nodes."""
    if n < 0:
        raise ValueError("motzkin index must be >= 0")
    return motzkin_list(n)[n]


def motzkin_list(n_max: int) -> list[int]:
    """``[M_0, ..., M_{n_max}]`` with ``M_0 = 0``.

    Uses the three-term P-recurrence ``(n+1) M_n = (2n-1) M_{n-1} + 3(n-2) M_{n-2}``;
    :func:`motzkin_convolution` is the defining recurrence and is checked
    against this one in the tests.
    """
    while len(_motzkin) <= n_max:
        n = len(_motzkin)
        q, r = divmod((2 * n - 1) * _motzkin[n - 1] + 3 * (n - 2) * _motzkin[n - 2], n + 1)
        if r:
            raise NonIntegralError(f"Motzkin recurrence not integral at {n}")
        _motzkin.append(q)
    return _motzkin[: n_max + 1]


def motzkin_convolution(n_max: int) -> list[int]:
    """Motzkin numbers from ``M = z + zM + zM^2`` coefficientwise."""
    m = [0] * (n_max + 1)
    if n_max >= 1:
        m[1] = 1
    for n in range(2, n_max + 1):
        m[n] = m[n - 1] + sum(m[i] * m[n - 1 - i] for i in range(1, n - 1))
    return m


def motzkin_bivar(nz: int, nu: int) -> BivarSeries:
    """``M(z, u)`` with ``u`` marking leaves, solving ``M = uz + zM + zM^2``."""
    if nz < 1 or nu < 1:
        raise ValueError("truncation orders must be >= 1")
    rows = [[0] * (nu + 1) for _ in range(nz + 1)]
    rows[1][1] = 1
    for n in range(2, nz + 1):
        row = rows[n]
        prev = rows[n - 1]
        for j in range(nu + 1):
            row[j] = prev[j]
        for i in range(1, n - 1):
            a, b = rows[i], rows[n - 1 - i]
            for j, x in enumerate(a):
                if x:
                    for k in range(nu + 1 - j):
                        if b[k]:
                            row[j + k] += x * b[k]
    return BivarSeries(rows, nz, nu)


def motzkin_leaf_bounded(p: int, n_max: int) -> list[int]:
    """Number of Motzkin trees with ``n`` nodes and at most ``p`` leaves, ``n = 0..n_max``."""
    if n_max < 1:
        return [0] * (n_max + 1)
    m = motzkin_bivar(n_max, p)
    return [sum(m.coeff(n, j) for j in range(p + 1)) for n in range(n_max + 1)]


def _partitions_exact(p: int, parts: int, max_part: int):
    """Multiplicity vectors ``{size: count}`` of partitions of ``p`` into exactly ``parts`` parts."""
    if parts == 0:
        if p == 0:
            yield {}
        return
    for first in range(min(max_part, p - parts + 1), 0, -1):
        for rest in _partitions_exact(p - first, parts - 1, first):
            d = dict(rest)
            d[first] = d.get(first, 0) + 1
            yield d


@lru_cache(maxsize=None)
def alpha_multinomial(l: int, p: int) -> int:
    """``alpha_{l,p}`` as the multinomial sum over hit-multiplicity profiles."""
    total = 0
    for s in _partitions_exact(p, l, p):
        term = math.factorial(l)
        for m, sm in s.items():
            term //= math.factorial(sm)
        for m, sm in s.items():
            term *= math.comb(2 * m, m) ** sm
        total += term
    return total


@lru_cache(maxsize=None)
def alpha_series(l: int, p: int) -> int:
    """``alpha_{l,p} = [u^p] (1/sqrt(1-4u) - 1)^l``."""
    f1 = Series([0] + [math.comb(2 * i, i) for i in range(1, p + 1)], p)
    return int(f1.pow(l)[p])


def alpha(l: int, p: int) -> int:
    if p < 1 or l < 1:
        raise ValueError("alpha needs l, p >= 1")
    if l > p:
        raise ValueError(f"alpha_{{{l},{p}}}: l > p (coefficient is structurally zero)")
    a = alpha_multinomial(l, p)
    b = alpha_series(l, p)
    if a != b:
        raise RouteMismatch("alpha", (l, p), a, b)
    return a


def q_poly_sum(p: int, n: int) -> int:
    return sum(alpha(m, p) * math.comb(n * (2 * p + 1) - 1, m) for m in range(1, p + 1))


def q_poly_closed(p: int, n: int) -> Fraction:
    """``4^p * binom((p + 1/2) n + p - 3/2, p)``."""
    return 4**p * gen_binomial(Fraction((2 * p + 1) * n + 2 * p - 3, 2), p)


@lru_cache(maxsize=None)
def q_poly(p: int, n: int) -> int:
    """``Q_p(n)``, the weight of the unary-root expansion at index ``n``."""
    if p < 1 or n < 1:
        raise ValueError("q_poly needs p, n >= 1")
    a = q_poly_sum(p, n)
    b = q_poly_closed(p, n)
    if b.denominator != 1:
        raise NonIntegralError(f"Q_{p}({n}) closed form not integral: {b}")
    if a != b:
        raise RouteMismatch("q_poly", (p, n), a, b)
    return a


def zeta_lagrange(s: int, r: int) -> int:
    if s < 0 or r < 0:
        raise ValueError("zeta needs s, r >= 0")
    if r == 0:
        return 1 if s == 0 else 0
    if s < 2 * r:
        return 0
    k = s - r
    total = 0
    for c in range((s - 2 * r) // 2 + 1):
        b = s - 2 * r - 2 * c
        a = k - b - c
        total += math.factorial(k) // (math.factorial(a) * math.factorial(b) * math.factorial(c))
    q, rem = divmod(2**r * r * total, k)
    if rem:
        raise NonIntegralError(f"zeta_{{{s},{r}}} not integral")
    return q


def zeta_series(s: int, r: int) -> int:
    """``[z^s] (2 z M(z))^r`` by repeated multiplication."""
    m = motzkin_list(max(s, 1))
    two_zm = Series([0] + [2 * x for x in m[: s]], s)
    return int(two_zm.pow(r)[s])


def zeta(s: int, r: int, check: bool = True) -> int:
    v = zeta_lagrange(s, r)
    if check:
        w = zeta_series(s, r)
        if v != w:
            raise RouteMismatch("zeta", (s, r), v, w)
    return v
