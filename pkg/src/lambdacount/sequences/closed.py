"""Closed lambda-terms: the delta recurrence, the indirect route and de Bruijn levels."""

from __future__ import annotations

import logging
from typing import Optional, Sequence

from ..exactnum import Series, big, inv_sqrt_power_coeffs, series_compose_geom
from .basic import catalan, motzkin_list
from .delta import delta_direct, delta_rows, fast_path_status
from .table import CountTable, Family, RouteMismatch, compare_tables

log = logging.getLogger(__name__)

_closed: list[int] = [0, 0]


def _direct_rows(n_max: int):
    for n in range(2, n_max + 1):
        yield n, [0] + [delta_direct(n, l) for l in range(1, n)]


def _sym_conv(seq: Sequence, n: int, lo: int = 1) -> int:
    """``sum_{i+j=n, i,j >= lo} seq[i] seq[j]``."""
    total = 0
    i, j = lo, n - lo
    while i < j:
        total += seq[i] * seq[j]
        i += 1
        j -= 1
    total *= 2
    if i == j:
        total += seq[i] * seq[i]
    return total


def closed_list(n_max: int, prefix: Optional[Sequence[int]] = None) -> list[int]:
    """``[lambda_0, ..., lambda_{n_max}]`` from

        lambda_n = M_{n-1} + sum_{l+q=n-1} lambda_l lambda_q + sum_l delta_{n,l} lambda_l.

    The delta rows are regenerated from the start on every extension (they are
    cheap); the products against ``lambda`` are only formed for indices not
    yet known from the memo or ``prefix``.
    """
    if prefix is not None:
        for n, v in enumerate(prefix):
            if n < len(_closed):
                if _closed[n] != v:
                    raise RouteMismatch("closed seed", n, v, _closed[n])
            elif n == len(_closed):
                _closed.append(int(v))
    if n_max < len(_closed):
        return _closed[: n_max + 1]
    ok, err = fast_path_status()
    if ok:
        rows = delta_rows(n_max)
    else:
        log.warning("delta fast path disabled (%s); using direct sums", err)
        rows = _direct_rows(n_max)
    motz = motzkin_list(n_max)
    lam = [big(x) for x in _closed] + [big(0)] * (n_max + 1 - len(_closed))
    known = len(_closed)
    for n, row in rows:
        if n < known:
            continue
        acc = motz[n - 1] + _sym_conv(lam, n - 1)
        for l in range(1, n):
            if lam[l]:
                acc += row[l] * lam[l]
        lam[n] = acc
        _closed.append(int(acc))
    return _closed[: n_max + 1]


def closed_counts(n_max: int) -> CountTable:
    """Number of closed lambda-terms of each size ``1..n_max``."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    lam = closed_list(n_max)
    t = CountTable(Family("closed"), "delta-recurrence")
    for n in range(1, n_max + 1):
        t.append(n, lam[n])
    return t


def lambda_tilde(n_max: int) -> list[int]:
    """Coefficients of the series counting closed terms whose unary nodes all bind.

    Solves ``L = C(z) + z L^2 + z L(z/sqrt(1-4z^2)) - z L(z)`` where
    ``C(z) = sum_p C_{p-1} z^{2p}``.
    """
    t = [0] * (n_max + 1)
    kernels: dict[int, list[int]] = {}
    for n in range(2, n_max + 1):
        acc = catalan(n // 2 - 1) if n % 2 == 0 else 0
        acc += _sym_conv(t, n - 1)
        for m in range(1, (n - 1) // 2 + 1):
            k = n - 1 - 2 * m
            if k >= 1 and t[k]:
                kern = kernels.get(k)
                if kern is None:
                    kern = kernels[k] = inv_sqrt_power_coeffs(k, (n_max - 1 - k) // 2)
                acc += t[k] * kern[m]
        t[n] = acc
    return t


def closed_counts_indirect(n_max: int, check: bool = True) -> CountTable:
    """Closed-term counts via the pointer-carrying series and ``z -> z/(1-z)``."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    lam = series_compose_geom(Series(lambda_tilde(n_max)))
    t = CountTable(Family("closed"), "indirect")
    for n in range(1, n_max + 1):
        t.append(n, lam[n])
    if check:
        compare_tables("closed: indirect vs delta", t, closed_counts(n_max), n_max)
    return t


_tnk: list[list[int]] = [[]]


def tnk_table(n_max: int) -> list[list[int]]:
    """``T[n][k]``: terms of size ``n`` whose free de Bruijn indices are ``<= k``.

    Rows ``n = 1..n_max`` hold ``k = 0..n_max-n``, enough to read off
    ``lambda_n = T[n][0]`` and to drive the sampler.  Memoized; a larger
    request rebuilds the table.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if len(_tnk) > n_max:
        return [[]] + [row[: n_max - n + 1] for n, row in enumerate(_tnk[1 : n_max + 1], start=1)]
    T: list[list] = [[]]
    T.append([big(k) for k in range(n_max)])
    for n in range(2, n_max + 1):
        width = n_max - n + 1
        prev = T[n - 1]
        row = []
        for k in range(width):
            acc = prev[k + 1]
            i, j = 1, n - 2
            pair = 0
            while i < j:
                pair += T[i][k] * T[j][k]
                i += 1
                j -= 1
            pair *= 2
            if i == j:
                pair += T[i][k] * T[i][k]
            row.append(acc + pair)
        T.append(row)
    _tnk[:] = [[int(x) for x in row] for row in T]
    return [list(row) for row in _tnk]


def closed_counts_debruijn(n_max: int, check: bool = True) -> CountTable:
    """Closed-term counts from the de Bruijn size/level recurrence."""
    T = tnk_table(n_max)
    t = CountTable(Family("closed-debruijn"), "debruijn")
    for n in range(1, n_max + 1):
        t.append(n, T[n][0])
    if check:
        compare_tables("closed: de Bruijn vs delta", t, closed_counts(n_max), n_max)
    return t
