"""BCI(p) counts, the linearized equation and the operator Delta_p."""

from __future__ import annotations

import math
from typing import Optional, Sequence

from ..exactnum import Series, bivar_extract_u, compose_z_times_inv_sqrt
from .basic import alpha, catalan, q_poly
from .table import CountTable, Family, RouteMismatch

_phi: dict[int, list[int]] = {}


def bci_size(p: int, j: int) -> int:
    """Size of a BCI(p) term with ``j`` unary nodes."""
    return (2 * p + 1) * j - 1


def bci_index(p: int, size: int) -> Optional[int]:
    """Number of unary nodes for a BCI(p) size, or None off the support."""
    j, r = divmod(size + 1, 2 * p + 1)
    return j if r == 0 and j >= 1 else None


def phi_list(p: int, j_max: int, prefix: Optional[Sequence[int]] = None) -> list[int]:
    """``[phi_0=0, phi_1, ..., phi_{j_max}]`` where ``phi_j = g_{(2p+1)j-1}``.

    ``phi_j = sum_{l+m=j} phi_l phi_m + Q_p(j-1) phi_{j-1}``: the binary split
    pairs subterms whose indices add to ``j`` (sizes ``1 + |S| + |T|``).
    ``prefix`` seeds already known values (e.g. from the cache).
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    phi = _phi.setdefault(p, [0, catalan(p - 1)])
    if prefix is not None:
        for j, v in enumerate(prefix):
            if j < len(phi):
                if phi[j] != v:
                    raise RouteMismatch(f"bci({p}) seed", j, v, phi[j])
            elif j == len(phi):
                phi.append(int(v))
    while len(phi) <= j_max:
        j = len(phi)
        half = j // 2
        conv = 2 * sum(phi[l] * phi[j - l] for l in range(1, half + (j % 2)))
        if j % 2 == 0:
            conv += phi[half] ** 2
        phi.append(conv + q_poly(p, j - 1) * phi[j - 1])
    return phi[: j_max + 1]


def bci_counts(p: int, j_max: int) -> CountTable:
    """Number of BCI(p) terms at sizes ``(2p+1)j - 1`` for ``j = 1..j_max``."""
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    phi = phi_list(p, j_max)
    t = CountTable(Family("bci", p), "recurrence")
    for j in range(1, j_max + 1):
        t.append(bci_size(p, j), phi[j])
    return t


def bci_counts_upto_size(p: int, max_size: int) -> CountTable:
    j_max = (max_size + 1) // (2 * p + 1)
    if j_max < 1:
        return CountTable(Family("bci", p), "recurrence")
    return bci_counts(p, j_max)


def linearized_list(p: int, j_max: int) -> list[int]:
    """``[0, l_1, ..., l_{j_max}]`` with ``l_j = C_{p-1} prod_{i<j} Q_p(i)``."""
    out = [0, catalan(p - 1)]
    for j in range(2, j_max + 1):
        out.append(out[-1] * q_poly(p, j - 1))
    return out


def linearized_counts(p: int, j_max: int) -> CountTable:
    if p < 1 or j_max < 1:
        raise ValueError("p and j_max must be >= 1")
    lin = linearized_list(p, j_max)
    t = CountTable(Family("linearized", p), "product")
    for j in range(1, j_max + 1):
        t.append(bci_size(p, j), lin[j])
    return t


def delta_apply_coeffwise(p: int, a: Series) -> Series:
    """``[z^n] Delta_p a = sum_l alpha_{l,p} C(n-2p-1, l) a_{n-2p-1}``."""
    shift = 2 * p + 1
    alphas = [alpha(l, p) for l in range(1, p + 1)]
    out = [0] * (a.order + shift + 1)
    for k, ak in enumerate(a.coeffs):
        if ak:
            w = sum(al * math.comb(k, l) for l, al in enumerate(alphas, start=1))
            out[k + shift] = w * ak
    return Series(out, a.order + shift)


def delta_apply_bivar(p: int, a: Series) -> Series:
    """``z^{2p+1} [u^p] a(z / sqrt(1-4u))``."""
    return bivar_extract_u(compose_z_times_inv_sqrt(a, p), p).shift(2 * p + 1)


def delta_apply(p: int, a: Series) -> Series:
    """Apply ``Delta_p``; both constructions must agree.

    The result has order ``a.order + 2p + 1``: every output coefficient up to
    there is determined by ``a``.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    x = delta_apply_coeffwise(p, a)
    y = delta_apply_bivar(p, a)
    for n in range(x.order + 1):
        if x[n] != y[n]:
            raise RouteMismatch(f"delta_apply(p={p})", n, x[n], y[n])
    return x
