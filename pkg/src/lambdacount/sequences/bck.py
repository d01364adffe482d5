"""BCK(p) counts by three routes.

* ``bck_counts``: terms whose unary nodes all bind at least once satisfy
  ``Y = sum_{l<=p} C_{l-1} z^{2l} + z Y^2 + (Delta_1 + ... + Delta_p) Y``;
  unary nodes binding nothing are then inserted by ``z -> z/(1-z)``.
* ``bck_counts_bivar``: the functional equation with leaf-marked Motzkin
  trees, solved by fixed-point iteration on truncated series.
* ``bck_counts_delta``: the closed-term recurrence with the delta kernel
  truncated at ``p`` bound leaves and the Motzkin term restricted to trees
  with at most ``p`` leaves.
"""

from __future__ import annotations

import math
from functools import lru_cache

from ..exactnum import BivarSeries, Series, series_compose_geom
from .basic import alpha, catalan, motzkin_bivar, motzkin_leaf_bounded
from .closed import _sym_conv
from .delta import DeltaCache
from .table import CountTable, Family, compare_tables

_y: dict[int, list[int]] = {}


@lru_cache(maxsize=None)
def expansion_weight(l: int, k: int) -> int:
    """``sum_m alpha_{m,l} C(k, m)``: ways to graft ``l`` bound leaves into a size-``k`` term."""
    return sum(alpha(m, l) * math.comb(k, m) for m in range(1, l + 1))


def bck_y_list(p: int, n_max: int) -> list[int]:
    """Coefficients ``Y_0..Y_{n_max}`` of the all-binding series."""
    if p < 1:
        raise ValueError("p must be >= 1")
    y = _y.setdefault(p, [0, 0])
    while len(y) <= n_max:
        n = len(y)
        acc = catalan(n // 2 - 1) if n % 2 == 0 and n // 2 <= p else 0
        acc += _sym_conv(y, n - 1)
        for l in range(1, p + 1):
            k = n - 2 * l - 1
            if k >= 2 and y[k]:
                acc += expansion_weight(l, k) * y[k]
        y.append(acc)
    return y[: n_max + 1]


def bck_counts(p: int, n_max: int) -> CountTable:
    """Number of BCK(p) terms of each size ``1..n_max``."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    f = series_compose_geom(Series(bck_y_list(p, n_max)))
    t = CountTable(Family("bck", p), "y-series")
    for n in range(1, n_max + 1):
        t.append(n, f[n])
    return t


def _leq_p_slice(a: BivarSeries, p: int) -> list:
    """``[u^p] a/(1-u)``, i.e. the sum of the ``u^0..u^p`` slices."""
    return [sum(row[: p + 1]) for row in a.grid]


def bck_counts_bivar(p: int, n_max: int, check: bool = True) -> CountTable:
    """Solve ``F = z[u^p] M/(1-u) + z F^2 + z [u^p] F(z/(1-2zM))/(1-u)``.

    Fixed-point iteration from ``F = 0``; each pass fixes at least one more
    coefficient, so at most ``n_max + 1`` passes are needed.
    """
    if p < 1 or n_max < 1:
        raise ValueError("p and n_max must be >= 1")
    nz = n_max
    m = motzkin_bivar(max(nz, 1), p)
    first = _leq_p_slice(m, p)
    one = BivarSeries([[1]], nz, p)
    w = (one - m.shift_z(1).scale(2)).inverse().shift_z(1)
    subst = [None]
    power = one
    for _ in range(1, n_max):
        power = power * w
        subst.append(_leq_p_slice(power, p))

    f = [0] * (n_max + 1)
    for _ in range(n_max + 2):
        new = [0] * (n_max + 1)
        for n in range(1, n_max + 1):
            acc = first[n - 1] + _sym_conv(f, n - 1)
            for l in range(1, n):
                if f[l]:
                    acc += f[l] * subst[l][n - 1]
            new[n] = acc
        if new == f:
            break
        f = new
    else:  # pragma: no cover - the iteration is a contraction
        raise RuntimeError("bivariate BCK iteration did not stabilize")

    t = CountTable(Family("bck", p), "bivariate")
    for n in range(1, n_max + 1):
        t.append(n, f[n])
    if check:
        compare_tables(f"bck({p}): bivariate vs y-series", t, bck_counts(p, n_max), n_max)
    return t


def bck_counts_delta(p: int, n_max: int, check: bool = True) -> CountTable:
    """BCK(p) counts from the closed-term recurrence with a truncated kernel."""
    if p < 1 or n_max < 1:
        raise ValueError("p and n_max must be >= 1")
    motz = motzkin_leaf_bounded(p, n_max)
    delta = DeltaCache(p_cap=p)
    f = [0] * (n_max + 1)
    for n in range(2, n_max + 1):
        acc = motz[n - 1] + _sym_conv(f, n - 1)
        for l in range(1, n):
            if f[l]:
                acc += delta(n, l) * f[l]
        f[n] = acc
    t = CountTable(Family("bck", p), "truncated-delta")
    for n in range(1, n_max + 1):
        t.append(n, f[n])
    if check:
        compare_tables(f"bck({p}): truncated delta vs y-series", t, bck_counts(p, n_max), n_max)
    return t
