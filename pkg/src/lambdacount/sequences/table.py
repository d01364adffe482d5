from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional


class RouteMismatch(RuntimeError):
    """Two independent computations of the same count disagree."""

    def __init__(self, what: str, index, left, right):
        self.what = what
        self.index = index
        super().__init__(f"{what}: routes disagree at index {index}: {left} != {right}")


FAMILIES = (
    "catalan",
    "motzkin",
    "motzkin-leaf-bounded",
    "bci",
    "linearized",
    "bck",
    "closed",
    "closed-debruijn",
)

# families that need a parameter p >= 1
PARAMETRIC = {"motzkin-leaf-bounded", "bci", "linearized", "bck"}


@dataclass(frozen=True)
class Family:
    tag: str
    p: Optional[int] = None

    def __post_init__(self):
        if self.tag not in FAMILIES:
            raise ValueError(f"unknown family {self.tag!r}")
        if self.tag in PARAMETRIC:
            if self.p is None or self.p < 1:
                raise ValueError(f"family {self.tag} needs p >= 1")
        elif self.p is not None:
            raise ValueError(f"family {self.tag} takes no p")

    def __str__(self) -> str:
        return self.tag if self.p is None else f"{self.tag}({self.p})"


@dataclass
class CountTable:
    """Counts of one family keyed by size, with the route that produced them.

    Tables only grow: :meth:`append` refuses to overwrite an index.  Sizes
    missing from ``values`` are off the family's support and count zero.
    """

    family: Family
    route: str
    values: dict[int, int] = field(default_factory=dict)

    def __getitem__(self, n: int) -> int:
        return self.values.get(n, 0)

    def __contains__(self, n: int) -> bool:
        return n in self.values

    def __len__(self) -> int:
        return len(self.values)

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.values.items()))

    def append(self, n: int, value: int) -> None:
        if n in self.values:
            raise ValueError(f"index {n} already present in {self.family} table")
        if value < 0:
            raise ValueError(f"negative count at {n}")
        self.values[n] = int(value)

    @property
    def max_index(self) -> int:
        return max(self.values) if self.values else -1

    def dense(self, n_max: int, start: int = 0) -> list[int]:
        """Values at ``start..n_max`` with zeros off-support."""
        return [self.values.get(n, 0) for n in range(start, n_max + 1)]


def compare_tables(what: str, a: CountTable, b: CountTable, n_max: int, start: int = 1) -> None:
    """Raise :class:`RouteMismatch` at the first index where ``a`` and ``b`` differ."""
    for n in range(start, n_max + 1):
        if a[n] != b[n]:
            raise RouteMismatch(what, n, a[n], b[n])
