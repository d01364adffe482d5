"""Lambda-terms in de Bruijn form and as enriched trees.

An enriched tree is a Motzkin tree (stored as the preorder sequence of node
arities, 0 = leaf, 1 = unary, 2 = binary) plus, for every leaf, the preorder
position of the unary ancestor that binds it.  Two terms that differ only by
renaming bound variables have the same enriched tree, so structural equality
is alpha-equivalence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True, slots=True)
class Var:
    index: int  # 1 = nearest enclosing abstraction


@dataclass(frozen=True, slots=True)
class Abs:
    body: "Term"


@dataclass(frozen=True, slots=True)
class App:
    left: "Term"
    right: "Term"


Term = Union[Var, Abs, App]


def size(t: Term) -> int:
    """Node count: variables 1, abstractions 1 + body, applications 1 + both sides."""
    n = 0
    stack = [t]
    while stack:
        x = stack.pop()
        n += 1
        if isinstance(x, Abs):
            stack.append(x.body)
        elif isinstance(x, App):
            stack.append(x.left)
            stack.append(x.right)
    return n


def is_closed(t: Term, depth: int = 0) -> bool:
    if isinstance(t, Var):
        return 1 <= t.index <= depth
    if isinstance(t, Abs):
        return is_closed(t.body, depth + 1)
    return is_closed(t.left, depth) and is_closed(t.right, depth)


def binder_counts(t: Term) -> list[int]:
    """Number of variables bound by each abstraction, in preorder."""
    counts: list[int] = []

    def walk(x: Term, stack: list[int]) -> None:
        if isinstance(x, Var):
            if x.index <= len(stack):
                counts[stack[-x.index]] += 1
        elif isinstance(x, Abs):
            counts.append(0)
            stack.append(len(counts) - 1)
            walk(x.body, stack)
            stack.pop()
        else:
            walk(x.left, stack)
            walk(x.right, stack)

    walk(t, [])
    return counts


# ---------------------------------------------------------------- renderings


def to_sexpr(t: Term) -> str:
    if isinstance(t, Var):
        return str(t.index)
    if isinstance(t, Abs):
        return f"(lam {to_sexpr(t.body)})"
    return f"(app {to_sexpr(t.left)} {to_sexpr(t.right)})"


def to_named(t: Term) -> str:
    """Named syntax with fresh names ``x1, x2, ...`` in abstraction order."""
    counter = [0]

    def go(x: Term, names: list[str]) -> str:
        if isinstance(x, Var):
            if x.index > len(names):
                raise ValueError("open term has no named rendering")
            return names[-x.index]
        if isinstance(x, Abs):
            counter[0] += 1
            name = f"x{counter[0]}"
            return f"(\\{name}. {go(x.body, names + [name])})"
        return f"({go(x.left, names)} {go(x.right, names)})"

    return go(t, [])


def to_json_obj(t: Term) -> dict:
    if isinstance(t, Var):
        return {"type": "var", "index": t.index}
    if isinstance(t, Abs):
        return {"type": "abs", "body": to_json_obj(t.body)}
    return {"type": "app", "left": to_json_obj(t.left), "right": to_json_obj(t.right)}


def to_json(t: Term) -> str:
    return json.dumps(to_json_obj(t), separators=(",", ":"))


def from_json_obj(obj: dict) -> Term:
    kind = obj["type"]
    if kind == "var":
        return Var(int(obj["index"]))
    if kind == "abs":
        return Abs(from_json_obj(obj["body"]))
    if kind == "app":
        return App(from_json_obj(obj["left"]), from_json_obj(obj["right"]))
    raise ValueError(f"unknown node type {kind!r}")


def to_dot(t: Term, name: str = "term") -> str:
    """Graphviz rendering: solid tree edges, dashed pointers from binder to variable."""
    lines = [f"digraph {name} {{", "  node [shape=point, width=0.08];"]
    counter = [0]

    def go(x: Term, binders: list[int]) -> int:
        me = counter[0]
        counter[0] += 1
        lines.append(f"  n{me};")
        if isinstance(x, Var):
            lines.append(f"  n{binders[-x.index]} -> n{me} [style=dashed, constraint=false];")
        elif isinstance(x, Abs):
            child = go(x.body, binders + [me])
            lines.append(f"  n{me} -> n{child} [arrowhead=none];")
        else:
            left = go(x.left, binders)
            right = go(x.right, binders)
            lines.append(f"  n{me} -> n{left} [arrowhead=none];")
            lines.append(f"  n{me} -> n{right} [arrowhead=none];")
        return me

    go(t, [])
    lines.append("}")
    return "\n".join(lines)


# ------------------------------------------------------------- enriched trees


@dataclass(frozen=True, slots=True)
class EnrichedTree:
    """Motzkin tree in preorder plus binder positions.

    ``arity[i]`` is 0, 1 or 2; ``binder[i]`` is the preorder position of the
    unary node binding leaf ``i`` and -1 for internal nodes.
    """

    arity: tuple
    binder: tuple

    @property
    def size(self) -> int:
        return len(self.arity)

    def parents(self) -> list[int]:
        parent = [-1] * len(self.arity)
        open_slots: list[list[int]] = []  # [position, children still expected]
        for i, a in enumerate(self.arity):
            if open_slots:
                parent[i] = open_slots[-1][0]
                open_slots[-1][1] -= 1
                if open_slots[-1][1] == 0:
                    open_slots.pop()
            if a:
                open_slots.append([i, a])
        return parent

    def validate(self) -> None:
        """Raise ValueError unless this is a well-formed closed enriched tree."""
        if len(self.binder) != len(self.arity) or not self.arity:
            raise ValueError("arity/binder length mismatch")
        need = 1
        for a in self.arity:
            if need == 0 or a not in (0, 1, 2):
                raise ValueError("not a preorder Motzkin word")
            need += a - 1
        if need != 0:
            raise ValueError("not a preorder Motzkin word")
        parent = self.parents()
        for i, a in enumerate(self.arity):
            b = self.binder[i]
            if a != 0:
                if b != -1:
                    raise ValueError(f"internal node {i} carries a binder")
                continue
            x = parent[i]
            while x != -1 and x != b:
                x = parent[x]
            if x == -1 or self.arity[b] != 1:
                raise ValueError(f"leaf {i} is not bound by a unary ancestor")

    def pointer_counts(self) -> dict[int, int]:
        """Unary position -> number of leaves it binds (zeros included)."""
        counts = {i: 0 for i, a in enumerate(self.arity) if a == 1}
        for b in self.binder:
            if b >= 0:
                counts[b] += 1
        return counts

    def counts(self) -> tuple[int, int, int]:
        """(leaves, unary nodes, binary nodes)."""
        return self.arity.count(0), self.arity.count(1), self.arity.count(2)


def to_debruijn(t: EnrichedTree) -> Term:
    pos = 0

    def go(unary_stack: list[int]) -> Term:
        nonlocal pos
        i = pos
        pos += 1
        a = t.arity[i]
        if a == 0:
            b = t.binder[i]
            # de Bruijn index: 1 + number of unary nodes strictly between
            depth = len(unary_stack) - unary_stack.index(b)
            return Var(depth)
        if a == 1:
            return Abs(go(unary_stack + [i]))
        left = go(unary_stack)
        return App(left, go(unary_stack))

    return go([])


def from_debruijn(term: Term) -> EnrichedTree:
    arity: list[int] = []
    binder: list[int] = []

    def go(x: Term, unary_stack: list[int]) -> None:
        i = len(arity)
        if isinstance(x, Var):
            if not 1 <= x.index <= len(unary_stack):
                raise ValueError(f"open term: variable {x.index} at depth {len(unary_stack)}")
            arity.append(0)
            binder.append(unary_stack[-x.index])
        elif isinstance(x, Abs):
            arity.append(1)
            binder.append(-1)
            go(x.body, unary_stack + [i])
        else:
            arity.append(2)
            binder.append(-1)
            go(x.left, unary_stack)
            go(x.right, unary_stack)

    go(term, [])
    return EnrichedTree(tuple(arity), tuple(binder))
