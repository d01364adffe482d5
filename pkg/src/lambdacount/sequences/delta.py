"""The grafting kernel delta_{n,l} of the closed-term recurrence.

``delta_{n,l} = [z^{n-1-l}] (1 - 2 z M(z))^{-l}`` counts the ways a closed
term of size ``l`` is expanded into one of size ``n`` under a new unary root.
The reference value is the zeta sum; the factorial double sum covers the
``r >= 1`` part and the ``r = 0`` part contributes exactly 1 when ``l = n-1``.

The fast path runs two D-finite recurrences (one in ``n`` to generate rows,
one mixing ``n`` and ``l`` as a consistency check).  Both are only trusted
after they reproduce the direct sums on every ``(n, l)`` with ``n <= 60``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from ..exactnum import as_int, big

VALIDATION_N = 60


class DeltaValidationError(RuntimeError):
    """The fast recurrences disagree with the direct sums."""

    def __init__(self, n: int, l: int, fast, direct):
        self.n, self.l = n, l
        super().__init__(
            f"fast delta recurrence disagrees with the direct sum at (n={n}, l={l}): "
            f"{fast} != {direct}; fast path disabled"
        )


def delta_direct(n: int, l: int, p_cap: Optional[int] = None) -> int:
    """``delta_{n,l}`` from the factorial double sum.

    With ``p_cap`` the outer index ``t`` (the number of leaves bound by the new
    root inside the grafted Motzkin trees) is capped, giving the BCK(p) kernel.
    """
    if not 1 <= l <= n - 1:
        raise ValueError(f"delta needs 1 <= l <= n-1, got n={n}, l={l}")
    s = n - l - 1
    total = Fraction(1 if s == 0 else 0)
    t_max = s // 2 if p_cap is None else min(p_cap, s // 2)
    for t in range(1, t_max + 1):
        for r in range(1, t + 1):
            a, b, c = n - l - 2 - r, t - r, s - 2 * t
            if a < 0 or b < 0 or c < 0:
                raise ValueError(f"negative factorial argument at n={n}, l={l}, t={t}, r={r}")
            num = r * 2**r * math.comb(l - 1 + r, r) * math.factorial(a)
            den = math.factorial(t) * math.factorial(b) * math.factorial(c)
            total += Fraction(num, den)
    return as_int(total, f"delta_{{{n},{l}}}")


def delta_zeta(n: int, l: int) -> int:
    """``sum_r C(l-1+r, l-1) zeta_{n-l-1, r}`` (the defining sum)."""
    from .basic import zeta

    s = n - l - 1
    return sum(math.comb(l - 1 + r, l - 1) * zeta(s, r) for r in range(s // 2 + 1))


@dataclass
class DeltaCache:
    """Memoized ``delta_{n,l}``; ``p_cap`` selects the truncated (BCK) kernel."""

    p_cap: Optional[int] = None
    values: dict = field(default_factory=dict)

    def __call__(self, n: int, l: int) -> int:
        key = (n, l)
        v = self.values.get(key)
        if v is None:
            v = self.values[key] = delta_direct(n, l, self.p_cap)
        return v


def delta_rows(n_max: int) -> Iterator[tuple[int, list]]:
    """Yield ``(n, row)`` with ``row[l] = delta_{n,l}`` for ``n = 2..n_max``.

    Rows come from the recurrence

        (n-l)(l-n-1) d[n+2,l] + (n-l)(2n-l) d[n+1,l] - l(n-1) d[n+1,l+1]
            - 4l(n-1) d[n,l+1] + (n-1)(3n-2l+1) d[n,l] = 0,

    whose leading coefficient is nonzero for ``l < n``; the two entries
    ``l = n+1`` and ``l = n`` of row ``n+2`` are the boundary values 1 and 0.
    Entries are ``gmpy2.mpz`` when available.
    """
    r0 = [big(0), big(1)]
    if n_max >= 2:
        yield 2, r0
    r1 = [big(0), big(0), big(1)]
    if n_max >= 3:
        yield 3, r1
    for N in range(4, n_max + 1):
        n = N - 2
        row = [big(0)] * N
        for l in range(1, N - 2):
            b0 = r0[l + 1] if l + 1 <= n - 1 else 0
            num = (
                (n - l) * (2 * n - l) * r1[l]
                - l * (n - 1) * r1[l + 1]
                - 4 * l * (n - 1) * b0
                + (n - 1) * (3 * n - 2 * l + 1) * r0[l]
            )
            q, rem = divmod(num, (n - l) * (n + 1 - l))
            if rem:
                raise DeltaValidationError(N, l, "non-integral", "integer")
            row[l] = q
        row[N - 1] = big(1)
        yield N, row
        r0, r1 = r1, row


def _d(rows: dict, n: int, l: int) -> int:
    row = rows.get(n)
    if row is None or not 1 <= l < len(row):
        return 0
    return row[l]


def wide_recurrence_residual(rows: dict, n: int, l: int) -> int:
    """Residual of the five-term recurrence reaching to ``l+2``; zero when it holds."""
    d = lambda a, b: _d(rows, a, b)  # noqa: E731
    return int(
        (n - l) * (n + 1 - l) * (n - 2 * l - 2) * d(n + 2, l)
        - (n - l) * (2 * n * n - 6 * n * l - 5 * n + 2 * l * l + 3 * l + 1) * d(n + 1, l)
        - (n - 1) * (3 * n * n - 2 * n * l + n - l * l - 9 * l - 8) * d(n, l)
        + 20 * (n - 1) * l * (l + 1) * d(n, l + 2)
        + 2 * (n - 1) * (5 * n - 9 * l - 12) * l * d(n, l + 1)
    )


def row_recurrence_residual(rows: dict, n: int, l: int) -> int:
    d = lambda a, b: _d(rows, a, b)  # noqa: E731
    return int(
        (n - l) * (l - n - 1) * d(n + 2, l)
        + (n - l) * (2 * n - l) * d(n + 1, l)
        - l * (n - 1) * d(n + 1, l + 1)
        - 4 * l * (n - 1) * d(n, l + 1)
        + (n - 1) * (3 * n - 2 * l + 1) * d(n, l)
    )


_fast = {"status": None, "error": None, "rows": {}}


def validate_delta_fast(n_max: int = VALIDATION_N) -> None:
    """Compare the fast rows with :func:`delta_direct` on all ``n <= n_max``.

    Also checks that both printed recurrences annihilate the direct values.
    Raises :class:`DeltaValidationError` at the first disagreement and
    disables the fast path for the rest of the process.
    """
    direct = {n: [0] + [delta_direct(n, l) for l in range(1, n)] for n in range(2, n_max + 1)}
    try:
        for n, row in delta_rows(n_max):
            for l in range(1, n):
                if row[l] != direct[n][l]:
                    raise DeltaValidationError(n, l, int(row[l]), direct[n][l])
        for n in range(2, n_max - 1):
            for l in range(1, n + 2):
                if wide_recurrence_residual(direct, n, l) or row_recurrence_residual(direct, n, l):
                    raise DeltaValidationError(n + 2, l, "nonzero residual", 0)
    except DeltaValidationError as e:
        _fast["status"], _fast["error"] = False, e
        raise
    _fast["status"] = True


def fast_path_status() -> tuple[bool, Optional[Exception]]:
    """Validate on first use; returns ``(enabled, error)``."""
    if _fast["status"] is None:
        try:
            validate_delta_fast()
        except DeltaValidationError:
            pass
    return bool(_fast["status"]), _fast["error"]


def delta_fast(n: int, l: int) -> int:
    """``delta_{n,l}`` from the validated recurrences."""
    if not 1 <= l <= n - 1:
        raise ValueError(f"delta needs 1 <= l <= n-1, got n={n}, l={l}")
    ok, err = fast_path_status()
    if not ok:
        raise err
    rows = _fast["rows"]
    if n not in rows:
        for m, row in delta_rows(n):
            rows.setdefault(m, [int(x) for x in row])
    return rows[n][l]


def b_direct(n: int, l: int, t: int) -> Optional[Fraction]:
    """``b_{n,l,t}``, the inner ``r``-sum of the double sum; None where undefined."""
    if t < 0 or n - l - 1 - 2 * t < 0 or n - l - 2 - t < 0:
        return None
    total = Fraction(0)
    for r in range(1, t + 1):
        num = r * 2**r * math.comb(l - 1 + r, r) * math.factorial(n - l - 2 - r)
        den = math.factorial(t) * math.factorial(t - r) * math.factorial(n - l - 1 - 2 * t)
        total += Fraction(num, den)
    return total


def b_recurrence_failures(n_max: int) -> list[tuple[str, int, int, int]]:
    """Points where either b-recurrence fails, over all defined ``n, l <= n_max``."""
    bad = []
    for n in range(1, n_max + 1):
        for l in range(1, n_max + 1):
            for t in range(1, n_max // 2 + 1):
                v0, vl, vn = b_direct(n, l, t), b_direct(n, l + 1, t), b_direct(n + 1, l, t)
                if None not in (v0, vl, vn):
                    e = (
                        (-l * l - 2 * n * t - 2 * l * t - l - n + n * n) * v0
                        + (2 * l * t - 2 * n * l + 2 * l * l + 4 * l) * vl
                        + (-4 * t * t - 2 * t + 4 * n * t - 4 * l * t - n * n + 2 * n * l - l + n - l * l) * vn
                    )
                    if e:
                        bad.append(("l-shift", n, l, t))
                vt = b_direct(n, l, t + 1)
                if None not in (v0, vt, vn):
                    e = (
                        (2 * n - t - 2) * (n - l - 2 * t - 2) * (n - l - 2 * t - 1) * v0
                        - t * (t + 1) * (n - l - t - 2) * vt
                        - (n - l - 2 * t - 2) * (n - l - 2 * t - 1) * (n - l - 2 * t) * vn
                    )
                    if e:
                        bad.append(("t-shift", n, l, t))
    return bad
