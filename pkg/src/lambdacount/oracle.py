"""Brute-force enumeration of closed lambda-terms as enriched trees.

Shapes are generated as preorder arity words; for each shape every leaf is
pointed at one of its unary ancestors by backtracking, with the per-binder
capacity of the constraint checked as soon as a binder's subtree is finished.
This shares nothing with the recurrences in :mod:`lambdacount.sequences`
and is the ground truth they are tested against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .terms import EnrichedTree

DEFAULT_CAP = 16


class OracleCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Constraint:
    """``closed``, ``bci`` (every binder binds exactly p leaves) or ``bck`` (at most p)."""

    tag: str = "closed"
    p: Optional[int] = None

    def __post_init__(self):
        if self.tag not in ("closed", "bci", "bck"):
            raise ValueError(f"unknown constraint {self.tag!r}")
        if self.tag == "closed":
            if self.p is not None:
                raise ValueError("closed takes no p")
        elif self.p is None or self.p < 1:
            raise ValueError(f"{self.tag} needs p >= 1")

    @classmethod
    def closed(cls) -> "Constraint":
        return cls("closed")

    @classmethod
    def bci(cls, p: int) -> "Constraint":
        return cls("bci", p)

    @classmethod
    def bck(cls, p: int) -> "Constraint":
        return cls("bck", p)

    def __str__(self) -> str:
        return self.tag if self.p is None else f"{self.tag}({self.p})"

    def admits_counts(self, leaves: int, unary: int) -> bool:
        if unary == 0:
            return False
        if self.tag == "bci":
            return leaves == self.p * unary
        if self.tag == "bck":
            return leaves <= self.p * unary
        return True

    def satisfied_by(self, tree: EnrichedTree) -> bool:
        try:
            tree.validate()
        except ValueError:
            return False
        if self.tag == "closed":
            return True
        counts = tree.pointer_counts().values()
        if self.tag == "bci":
            return all(c == self.p for c in counts)
        return all(c <= self.p for c in counts)


def motzkin_words(n: int) -> Iterator[tuple]:
    """Preorder arity words of all unary-binary trees with ``n`` nodes.

    Order: at each position try leaf, then unary, then binary.
    """
    word = [0] * n

    def go(pos: int, need: int) -> Iterator[tuple]:
        # need = open child slots; the remaining n - pos nodes must fill them
        left = n - pos
        if need == 0:
            if left == 0:
                yield tuple(word)
            return
        if left < need:
            return
        for a in (0, 1, 2):
            # after placing a, slots become need - 1 + a; at least that many nodes remain
            if need - 1 + a <= left - 1:
                word[pos] = a
                yield from go(pos + 1, need - 1 + a)

    if n >= 1:
        yield from go(0, 1)


def _shape_info(word: tuple):
    """Per leaf: its unary ancestors; per unary node: preorder index of its last leaf."""
    ancestors_of_leaf: dict[int, tuple] = {}
    last_leaf: dict[int, int] = {}
    pos = 0

    def walk(unary_above: tuple) -> None:
        nonlocal pos
        i = pos
        pos += 1
        a = word[i]
        if a == 0:
            ancestors_of_leaf[i] = unary_above
            for u in unary_above:
                last_leaf[u] = i
        elif a == 1:
            walk(unary_above + (i,))
        else:
            walk(unary_above)
            walk(unary_above)

    walk(())
    return ancestors_of_leaf, last_leaf


def _binders(word: tuple, c: Constraint) -> Iterator[tuple]:
    anc, last_leaf = _shape_info(word)
    leaves = sorted(anc)
    if any(not anc[x] for x in leaves):
        return
    cap = c.p if c.tag != "closed" else None
    exact = c.tag == "bci"
    # unary nodes whose subtree closes at each leaf
    closes_at: dict[int, list[int]] = {}
    for u, x in last_leaf.items():
        closes_at.setdefault(x, []).append(u)
    unary = [i for i, a in enumerate(word) if a == 1]
    if exact and any(u not in last_leaf for u in unary):
        return  # a unary node with no leaf below cannot bind p >= 1 leaves
    # leaves remaining (inclusive) below each unary node, indexed by leaf order
    below = {u: [0] * (len(leaves) + 1) for u in unary} if exact else None
    if exact:
        for u in unary:
            for k in range(len(leaves) - 1, -1, -1):
                below[u][k] = below[u][k + 1] + (u in anc[leaves[k]])
    count = {u: 0 for u in unary}
    binder = [-1] * len(word)

    def go(k: int) -> Iterator[tuple]:
        if k == len(leaves):
            yield tuple(binder)
            return
        x = leaves[k]
        for u in anc[x]:
            if cap is not None and count[u] >= cap:
                continue
            count[u] += 1
            binder[x] = u
            ok = True
            if exact:
                for v in anc[x]:
                    if count[v] + below[v][k + 1] < cap:
                        ok = False
                        break
                if ok:
                    ok = all(count[v] == cap for v in closes_at.get(x, ()))
            if ok:
                yield from go(k + 1)
            count[u] -= 1
        binder[x] = -1

    yield from go(0)


def enumerate_terms(n: int, c: Constraint = Constraint(), cap: int = DEFAULT_CAP) -> Iterator[EnrichedTree]:
    """Every enriched tree of size ``n`` satisfying ``c``, each once, in a fixed order."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"size must be a positive integer, got {n!r}")
    if n > cap:
        raise OracleCapExceeded(f"size {n} exceeds the oracle cap {cap}")
    for word in motzkin_words(n):
        if not c.admits_counts(word.count(0), word.count(1)):
            continue
        for binder in _binders(word, c):
            yield EnrichedTree(word, binder)


def count_via_oracle(n: int, c: Constraint = Constraint(), cap: int = DEFAULT_CAP) -> int:
    return sum(1 for _ in enumerate_terms(n, c, cap))
