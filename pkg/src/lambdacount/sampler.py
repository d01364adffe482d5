"""Uniform random generation and unranking.

Closed terms are unranked through the de Bruijn table ``T[n][k]``: at a node
of size ``m`` under ``k`` abstractions the branches are, in rank order, the
``k`` variables (only when ``m = 1``), the abstraction, then applications with
left size ``i = 1, 2, ...``.

BCI(p) terms follow the decomposition behind the phi recurrence: the minimal
terms (a unary root over a binary tree with ``p`` leaves), applications, and
expansions of a smaller term by a new unary root whose ``p`` leaves sit in
binary trees grafted onto ``m`` distinct edges.  A hit edge carrying ``i``
leaves becomes a path of binary nodes, each with one grafted binary tree on
its left or right; there are ``binom(2i, i)`` such paths.

Sampling draws a uniform rank with :meth:`random.Random.randrange`, which is
exact for big integers, and unranks it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import count

from .exactnum import unrank_combination
from .sequences import bci_index, catalan, phi_list, q_poly, tnk_table
from .terms import Abs, App, EnrichedTree, Term, Var, size


@dataclass
class SamplerState:
    seed: int = 0
    rng: random.Random = field(init=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.rng = random.Random(self.seed)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``; unbiased for any size of ``n``."""
        return self.rng.randrange(n)


# ---------------------------------------------------------------- closed terms


def closed_count(n: int) -> int:
    return tnk_table(n)[n][0] if n >= 1 else 0


def unrank_closed(n: int, rank: int) -> Term:
    """The closed term of size ``n`` with the given rank in ``[0, lambda_n)``."""
    if n < 1:
        raise ValueError("size must be >= 1")
    T = tnk_table(n)
    total = T[n][0]
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} out of range [0, {total}) for size {n}")
    # preorder decisions, then a stack build
    out: list[tuple] = []
    work = [(n, 0, rank)]
    while work:
        m, k, r = work.pop()
        if m == 1:
            out.append(("var", r + 1))
            continue
        w = T[m - 1][k + 1]
        if r < w:
            out.append(("abs",))
            work.append((m - 1, k + 1, r))
            continue
        r -= w
        for i in range(1, m - 1):
            right = T[m - 1 - i][k]
            w = T[i][k] * right
            if r < w:
                rl, rr = divmod(r, right)
                out.append(("app",))
                work.append((m - 1 - i, k, rr))
                work.append((i, k, rl))
                break
            r -= w
        else:  # pragma: no cover - guarded by the range check
            raise AssertionError("rank exhausted")
    stack: list[Term] = []
    for op in reversed(out):
        if op[0] == "var":
            stack.append(Var(op[1]))
        elif op[0] == "abs":
            stack.append(Abs(stack.pop()))
        else:
            left = stack.pop()
            stack.append(App(left, stack.pop()))
    return stack[0]


def rank_closed(term: Term) -> int:
    """Inverse of :func:`unrank_closed`."""
    n = size(term)
    T = tnk_table(n)

    def go(t: Term, m: int, k: int) -> int:
        if isinstance(t, Var):
            if m != 1 or not 1 <= t.index <= k:
                raise ValueError("not a closed term")
            return t.index - 1
        if isinstance(t, Abs):
            return go(t.body, m - 1, k + 1)
        r = T[m - 1][k + 1]
        i = size(t.left)
        for i2 in range(1, i):
            r += T[i2][k] * T[m - 1 - i2][k]
        right = T[m - 1 - i][k]
        return r + go(t.left, i, k) * right + go(t.right, m - 1 - i, k)

    return go(term, n, 0)


def sample_closed(n: int, state: SamplerState) -> Term:
    """A uniformly random closed term of size ``n``."""
    total = closed_count(n)
    if total == 0:
        raise ValueError(f"there are no closed terms of size {n}")
    return unrank_closed(n, state.below(total))


# ------------------------------------------------------------------ BCI terms
#
# Working trees are tuples: ("leaf", binder_id) | ("unary", id, child) |
# ("binary", left, right).  Ids are converted to preorder positions at the end.


@lru_cache(maxsize=None)
def path_count(i: int) -> int:
    """Left/right sequences of binary trees with ``i`` leaves in total (= binom(2i, i))."""
    if i == 0:
        return 1
    return sum(2 * catalan(c - 1) * path_count(i - c) for c in range(1, i + 1))


@lru_cache(maxsize=None)
def composition_weight(m: int, q: int) -> int:
    """Sum over compositions of ``q`` into ``m`` positive parts of ``prod binom(2i, i)``."""
    if m == 0:
        return 1 if q == 0 else 0
    return sum(math.comb(2 * i, i) * composition_weight(m - 1, q - i) for i in range(1, q - m + 2))


def _unrank_binary_tree(leaves: int, rank: int, binder) -> tuple:
    if leaves == 1:
        return ("leaf", binder)
    for a in range(1, leaves):
        right = catalan(leaves - a - 1)
        w = catalan(a - 1) * right
        if rank < w:
            rl, rr = divmod(rank, right)
            return ("binary", _unrank_binary_tree(a, rl, binder), _unrank_binary_tree(leaves - a, rr, binder))
        rank -= w
    raise AssertionError("binary tree rank exhausted")


def _unrank_path(i: int, rank: int, binder) -> list:
    """Grafts from the top down as ``(side, tree)``; side 0 puts the tree on the left."""
    path = []
    while i:
        for c in range(1, i + 1):
            rest = path_count(i - c)
            w = 2 * catalan(c - 1) * rest
            if rank < w:
                head, rank = divmod(rank, rest)
                side, tree_rank = divmod(head, catalan(c - 1))
                path.append((side, _unrank_binary_tree(c, tree_rank, binder)))
                i -= c
                break
            rank -= w
    return path


def _unrank_composition(m: int, q: int, rank: int) -> list[tuple[int, int]]:
    """Parts ``i`` with a rank below ``binom(2i, i)`` each."""
    parts = []
    while m:
        for i in range(1, q - m + 2):
            rest = composition_weight(m - 1, q - i)
            w = math.comb(2 * i, i) * rest
            if rank < w:
                own, rank = divmod(rank, rest)
                parts.append((i, own))
                m -= 1
                q -= i
                break
            rank -= w
    return parts


def _tree_size(t: tuple) -> int:
    if t[0] == "leaf":
        return 1
    if t[0] == "unary":
        return 1 + _tree_size(t[2])
    return 1 + _tree_size(t[1]) + _tree_size(t[2])


def _expand(old: tuple, p: int, rank: int, new_id) -> tuple:
    """New unary root over ``old`` with one decoration of rank ``rank < Q_p``."""
    s = _tree_size(old)
    for m in range(1, p + 1):
        a = composition_weight(m, p)
        w = a * math.comb(s, m)
        if rank < w:
            edge_rank, rest = divmod(rank, a)
            break
        rank -= w
    else:
        raise AssertionError("decoration rank exhausted")
    edges = unrank_combination(edge_rank, s, m)
    paths = {}
    for e, (i, r) in zip(edges, _unrank_composition(m, p, rest)):
        paths[e] = _unrank_path(i, r, new_id)

    counter = count()

    def rebuild(t: tuple) -> tuple:
        me = next(counter)  # preorder position = id of the edge above
        if t[0] == "leaf":
            node = t
        elif t[0] == "unary":
            node = ("unary", t[1], rebuild(t[2]))
        else:
            left = rebuild(t[1])
            node = ("binary", left, rebuild(t[2]))
        for side, tree in reversed(paths.get(me, ())):
            node = ("binary", tree, node) if side == 0 else ("binary", node, tree)
        return node

    return ("unary", new_id, rebuild(old))


def _unrank_bci(p: int, j: int, rank: int, ids) -> tuple:
    phi = phi_list(p, j)
    if j == 1:
        me = next(ids)
        return ("unary", me, _unrank_binary_tree(p, rank, me))
    for l in range(1, j):
        right = phi[j - l]
        w = phi[l] * right
        if rank < w:
            rl, rr = divmod(rank, right)
            left = _unrank_bci(p, l, rl, ids)
            return ("binary", left, _unrank_bci(p, j - l, rr, ids))
        rank -= w
    q = q_poly(p, j - 1)
    old_rank, dec_rank = divmod(rank, q)
    me = next(ids)
    return _expand(_unrank_bci(p, j - 1, old_rank, ids), p, dec_rank, me)


def _to_enriched(t: tuple) -> EnrichedTree:
    arity, binder, where = [], [], {}
    pending = []
    stack = [t]
    while stack:
        x = stack.pop()
        i = len(arity)
        if x[0] == "leaf":
            arity.append(0)
            binder.append(x[1])
            pending.append(i)
        elif x[0] == "unary":
            arity.append(1)
            binder.append(-1)
            where[x[1]] = i
            stack.append(x[2])
        else:
            arity.append(2)
            binder.append(-1)
            stack.append(x[2])
            stack.append(x[1])
    for i in pending:
        binder[i] = where[binder[i]]
    return EnrichedTree(tuple(arity), tuple(binder))


def bci_support_index(p: int, n: int) -> int:
    j = bci_index(p, n)
    if j is None:
        raise ValueError(f"BCI({p}) has no terms of size {n}")
    return j


def unrank_bci(p: int, n: int, rank: int) -> EnrichedTree:
    """The BCI(p) term of size ``n`` with the given rank in ``[0, phi_j)``."""
    if p < 1:
        raise ValueError("p must be >= 1")
    j = bci_support_index(p, n)
    total = phi_list(p, j)[j]
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} out of range [0, {total})")
    return _to_enriched(_unrank_bci(p, j, rank, count()))


def sample_bci(p: int, n: int, state: SamplerState) -> EnrichedTree:
    """A uniformly random BCI(p) term of size ``n``."""
    j = bci_support_index(p, n)
    return unrank_bci(p, n, state.below(phi_list(p, j)[j]))
