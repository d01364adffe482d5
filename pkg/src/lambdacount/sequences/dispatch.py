"""One entry point from a family tag to a CountTable."""

from __future__ import annotations

from typing import Optional

from .basic import catalan, motzkin_leaf_bounded, motzkin_list
from .bci import bci_counts_upto_size, linearized_counts
from .bck import bck_counts, bck_counts_bivar, bck_counts_delta
from .closed import closed_counts, closed_counts_debruijn, closed_counts_indirect
from .table import CountTable, Family

# route names per family; the first one is the default
ROUTES = {
    "catalan": ("closed-form",),
    "motzkin": ("recurrence",),
    "motzkin-leaf-bounded": ("bivariate",),
    "bci": ("recurrence",),
    "linearized": ("product",),
    "bck": ("y-series", "bivariate", "truncated-delta"),
    "closed": ("delta-recurrence", "indirect", "debruijn"),
    "closed-debruijn": ("debruijn",),
}


def first_index(family: Family) -> int:
    """Catalan numbers start at index 0, everything else at size 1."""
    return 0 if family.tag == "catalan" else 1


def count_table(family: Family, max_size: int, route: Optional[str] = None) -> CountTable:
    """Counts for sizes ``first_index..max_size``; off-support sizes are absent (zero)."""
    if max_size < first_index(family):
        raise ValueError(f"max_size must be >= {first_index(family)}")
    routes = ROUTES[family.tag]
    route = route or routes[0]
    if route not in routes:
        raise ValueError(f"family {family.tag} has routes {', '.join(routes)}; got {route!r}")
    tag, p = family.tag, family.p
    if tag == "catalan":
        t = CountTable(family, route)
        for n in range(max_size + 1):
            t.append(n, catalan(n))
        return t
    if tag in ("motzkin", "motzkin-leaf-bounded"):
        vals = motzkin_list(max_size) if tag == "motzkin" else motzkin_leaf_bounded(p, max_size)
        t = CountTable(family, route)
        for n in range(1, max_size + 1):
            t.append(n, vals[n])
        return t
    if tag == "bci":
        return bci_counts_upto_size(p, max_size)
    if tag == "linearized":
        j_max = (max_size + 1) // (2 * p + 1)
        return linearized_counts(p, j_max) if j_max >= 1 else CountTable(family, route)
    if tag == "bck":
        fn = {"y-series": bck_counts, "bivariate": bck_counts_bivar, "truncated-delta": bck_counts_delta}[route]
        return fn(p, max_size)
    if tag == "closed-debruijn":
        return closed_counts_debruijn(max_size, check=False)
    fn = {"delta-recurrence": closed_counts, "indirect": closed_counts_indirect, "debruijn": closed_counts_debruijn}[route]
    t = fn(max_size) if route == "delta-recurrence" else fn(max_size, check=False)
    if t.family != family:
        t = CountTable(family, route, dict(t.values))
    return t
