"""Acceptance criteria, one test per criterion.

Each test records a one-line PASS/FAIL verdict with the measured numbers; the
lines are printed in the pytest terminal summary (see conftest.py) and when
the file is run directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import random
import sys
import time
from collections import Counter

import pytest
from scipy.stats import chisquare

from lambdacount import asymptotics as asy
from lambdacount.exactnum import Series
from lambdacount.oracle import Constraint, count_via_oracle, enumerate_terms
from lambdacount.sampler import SamplerState, rank_closed, sample_bci, sample_closed, unrank_closed
from lambdacount.sequences import (
    alpha_multinomial,
    alpha_series,
    bci_counts,
    bci_size,
    bck_counts,
    bck_counts_bivar,
    bck_counts_delta,
    catalan,
    closed_counts,
    closed_counts_debruijn,
    closed_counts_indirect,
    closed_list,
    delta_direct,
    delta_fast,
    fast_path_status,
    phi_list,
    q_poly,
    q_poly_closed,
    q_poly_sum,
)
from lambdacount.sequences.bci import delta_apply_bivar, delta_apply_coeffwise
from lambdacount.terms import to_debruijn

VERDICTS: dict[int, str] = {}


def record(k: int, ok: bool, detail: str) -> None:
    VERDICTS[k] = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(VERDICTS[k])


def first_mismatch(a, b, indices):
    return next((n for n in indices if a[n] != b[n]), None)


# 1 --------------------------------------------------------------- published constants

PUBLISHED = {
    2: (1.048668, 0.981017),
    3: (1.0046726194, 2.19232485),
    4: (1.0006911656, 6.17349476),
    5: (1.0001221936, 19.2515312),
}


def test_criterion_1_table_reproduction():
    t0 = time.perf_counter()
    worst = 0.0
    parts = []
    for p, (a_ref, A_ref) in PUBLISHED.items():
        a = asy.compute_ap(p, 500).value
        A = a * asy.compute_Bp(p)
        ea, eA = abs(a / a_ref - 1), abs(A / A_ref - 1)
        worst = max(worst, ea, eA)
        parts.append(f"p={p}: a={a:.10f} A={A:.8f} (rel {max(ea, eA):.1e})")
    partial2 = asy.compute_ap(2, 500).partial
    ok = worst <= 1e-4
    record(1, ok, f"worst rel err {worst:.2e} <= 1e-4; " + "; ".join(parts)
           + f"; p=2 without tail {partial2:.7f} (rel {abs(partial2 / PUBLISHED[2][0] - 1):.1e}); "
           f"{time.perf_counter() - t0:.1f}s")
    assert ok


# 2 ------------------------------------------------- Euler-Maclaurin constant

PRINTED_EML = 1.0844375142


@pytest.mark.xfail(strict=True, reason="the printed constant differs from exp(-int_1^2 log Gamma) = e/sqrt(2 pi) "
                                       "by 3.7e-8; a 1e-9 match is not attainable (see decisions ledger)")
def test_criterion_2_eml_constant():
    got = asy.eml_base_constant()
    exact = math.e / math.sqrt(2 * math.pi)
    err = abs(got - PRINTED_EML)
    ok = err <= 1e-9
    record(2, ok, f"quadrature {got:.13f} vs printed {PRINTED_EML} (abs err {err:.1e}, tol 1e-9); "
                  f"quadrature vs e/sqrt(2pi) {abs(got - exact):.1e}")
    assert ok


# 3 -------------------------------------------------------- oracle equivalence


def oracle_counts(c: Constraint, sizes):
    return {n: count_via_oracle(n, c) for n in sizes}


def test_criterion_3_oracle_equivalence():
    t0 = time.perf_counter()
    problems = []
    sizes = range(1, 13)
    o = oracle_counts(Constraint.closed(), sizes)
    for t in (closed_counts(12), closed_counts_indirect(12, check=False), closed_counts_debruijn(12, check=False)):
        n = first_mismatch(t, o, sizes)
        if n is not None:
            problems.append(f"closed {t.route} at {n}")
    bci1 = bci_counts(1, 5)
    o = oracle_counts(Constraint.bci(1), range(1, 15))
    if first_mismatch(bci1, o, range(1, 15)) is not None or [bci1[n] for n in (2, 5, 8)] != [1, 5, 60]:
        problems.append("bci(1)")
    bci1_vals = [o[n] for n in (2, 5, 8, 11, 14)]
    bci2 = bci_counts(2, 3)
    o = oracle_counts(Constraint.bci(2), (4, 9, 14))
    if any(bci2[n] != o[n] for n in (4, 9, 14)) or [bci2[4], bci2[9]] != [1, 49]:
        problems.append("bci(2)")
    bci2_vals = [o[n] for n in (4, 9, 14)]
    for p in (1, 2):
        o = oracle_counts(Constraint.bck(p), sizes)
        for t in (bck_counts(p, 12), bck_counts_bivar(p, 12, check=False), bck_counts_delta(p, 12, check=False)):
            n = first_mismatch(t, o, sizes)
            if n is not None:
                problems.append(f"bck({p}) {t.route} at {n}")
    ok = not problems
    record(3, ok, f"closed n<=12 (3 routes), BCI(1) sizes 2..14 = {bci1_vals}, BCI(2) sizes 4,9,14 = {bci2_vals}, "
                  f"BCK(1)/BCK(2) n<=12 (3 routes each) all equal the oracle"
                  + (f"; mismatches: {problems}" if problems else "") + f"; {time.perf_counter() - t0:.1f}s")
    assert ok


# 4 ------------------------------------------------------ route equivalence


def test_criterion_4_routes_at_scale():
    t0 = time.perf_counter()
    problems = []
    a = closed_counts(400)
    for t in (closed_counts_indirect(400, check=False), closed_counts_debruijn(400, check=False)):
        n = first_mismatch(a, t, range(1, 401))
        if n is not None:
            problems.append(f"closed {t.route} at {n}")
    for p in (1, 2, 3):
        y = bck_counts(p, 100)
        for t in (bck_counts_bivar(p, 100, check=False), bck_counts_delta(p, 100, check=False)):
            n = first_mismatch(y, t, range(1, 101))
            if n is not None:
                problems.append(f"bck({p}) {t.route} at {n}")
    fast_ok, err = fast_path_status()
    if not fast_ok:
        problems.append(f"delta fast path disabled: {err}")
    else:
        bad = next(((n, l) for n in range(2, 61) for l in range(1, n) if delta_fast(n, l) != delta_direct(n, l)), None)
        if bad:
            problems.append(f"delta at {bad}")
    ok = not problems
    record(4, ok, "closed 3 routes n<=400, BCK 3 routes p<=3 n<=100, delta fast = direct n<=60"
                  + (f"; mismatches: {problems}" if problems else "") + f"; {time.perf_counter() - t0:.1f}s")
    assert ok


# 5 ---------------------------------------------------------- identity suite


def test_criterion_5_identities():
    t0 = time.perf_counter()
    bad_q = [(p, n) for p in range(1, 9) for n in range(1, 201) if q_poly_sum(p, n) != q_poly_closed(p, n)]
    bad_a = [(l, p) for p in range(1, 13) for l in range(1, p + 1) if alpha_multinomial(l, p) != alpha_series(l, p)]
    rng = random.Random(20240)
    bad_d = []
    trials = 0
    for p in range(1, 6):
        for _ in range(10):
            deg = rng.randint(0, 40)
            s = Series([rng.randint(-10**6, 10**6) for _ in range(deg + 1)])
            x, y = delta_apply_coeffwise(p, s), delta_apply_bivar(p, s)
            trials += 1
            if x.coeffs != y.coeffs[: x.order + 1]:
                bad_d.append(p)
    ok = not (bad_q or bad_a or bad_d)
    record(5, ok, f"Q_p routes p<=8 n<=200: {len(bad_q)} mismatches; alpha routes p<=12: {len(bad_a)}; "
                  f"Delta_p routes on {trials} random polys (deg<=40, p<=5): {len(bad_d)}; {time.perf_counter() - t0:.1f}s")
    assert ok


# 6 ---------------------------------------------------- asymptotic convergence


def test_criterion_6_convergence():
    t0 = time.perf_counter()
    A2 = asy.compute_ap(2, 500).value * asy.compute_Bp(2)
    ratios = [asy.bci_ratio(2, j, A2) for j in range(50, 301)]
    r300 = ratios[-1]
    dev = [abs(r - 1) for r in ratios]
    monotone = all(b <= a for a, b in zip(dev, dev[1:]))
    with_table = asy.bci_ratio(2, 300, PUBLISHED[2][1])
    fit = asy.bci1_fit(3000)
    decade = fit.last_decade_change()
    last_ten = fit.change_over(fit.sizes[-10])
    ok = 0.99 <= r300 <= 1.01 and monotone and decade < 0.01
    record(6, ok, f"p=2 ratio at n=300 {r300:.9f} (with printed A_2: {with_table:.6f}), |ratio-1| nonincreasing on "
                  f"[50,300]: {monotone}; BCI(1) ratio change sizes {fit.sizes[-1] // 10}..{fit.sizes[-1]}: "
                  f"{decade:.2e} < 1e-2 (last 10 support points: {last_ten:.1e}; fitted C = {fit.fitted_constant:.5f}); {time.perf_counter() - t0:.1f}s")
    assert ok


# 7 --------------------------------------------------------- lambda corridor


def test_criterion_7_lambda_corridor():
    t0 = time.perf_counter()
    reports = asy.lambda_bound_table(100, 3000)
    lo, hi = asy.BoundReport.corridor()
    outside = [r.n for r in reports if not r.in_corridor()]
    half = [r for r in reports if r.n >= 1550]
    gaps = [r.gap_to_lower() for r in half]
    rises = [r.n for r, a, b in zip(half[1:], gaps, gaps[1:]) if b > a]
    vals = [r.normalized for r in reports]
    ok = not outside and not rises
    record(7, ok, f"normalized exponent in [{min(vals):.4f}, {max(vals):.4f}] within [{lo:.4f}, {hi:.4f}] for "
                  f"100<=n<=3000 ({len(outside)} outside); gap to lower edge nonincreasing on 1550..3000 "
                  f"({len(rises)} rises); {time.perf_counter() - t0:.1f}s")
    assert ok


# 8 -------------------------------------------------------- sampler uniformity


def test_criterion_8_sampler():
    t0 = time.perf_counter()
    state = SamplerState(8)
    support = sorted({to_debruijn(t) for t in enumerate_terms(8)}, key=repr)
    counts = Counter(sample_closed(8, state) for _ in range(100_000))
    p_closed = chisquare([counts[t] for t in support]).pvalue
    closed_ok = set(counts) <= set(support) and p_closed > 0.001
    cells_closed = len(support)
    state = SamplerState(5)
    support = sorted(set(enumerate_terms(5, Constraint.bci(1))), key=repr)
    counts = Counter(sample_bci(1, 5, state) for _ in range(100_000))
    p_bci = chisquare([counts[t] for t in support]).pvalue
    bci_ok = set(counts) <= set(support) and p_bci > 0.001
    cells_bci = len(support)
    n_round = 0
    round_ok = True
    for n in range(2, 10):
        for t in enumerate_terms(n):
            db = to_debruijn(t)
            n_round += 1
            if unrank_closed(n, rank_closed(db)) != db:
                round_ok = False
    ok = closed_ok and bci_ok and round_ok
    record(8, ok, f"chi-square p-values: closed n=8 ({cells_closed} cells) {p_closed:.3f}, BCI(1) size 5 "
                  f"({cells_bci} cells) {p_bci:.3f} (need > 0.001); unrank/rank round-trip on {n_round} closed terms n<=9: {round_ok}; "
                  f"{time.perf_counter() - t0:.1f}s")
    assert ok


# 9 ------------------------------------------------------------ invariant suite


def test_criterion_9_invariants():
    t0 = time.perf_counter()
    problems = []
    for p in range(1, 11):
        phi = phi_list(p, 6)
        if phi[1] != catalan(p - 1):
            problems.append(f"seed p={p}")
        t = bci_counts(p, 6)
        for n in range(1, bci_size(p, 6) + 1):
            if (n in t) != ((n + 1) % (2 * p + 1) == 0):
                problems.append(f"support p={p} n={n}")
        if p <= 5 and count_via_oracle(2 * p, Constraint.bci(p)) != catalan(p - 1):
            problems.append(f"oracle seed p={p}")
    lam = closed_list(60)
    for p in range(1, 6):
        g, f = bci_counts(p, 20), bck_counts(p, 60)
        problems += [f"sandwich p={p} n={n}" for n in range(1, 61) if not g[n] <= f[n] <= lam[n]]
    for n in range(1, 21):
        for p in range(n, 21):
            if bck_counts(p, 20)[n] != lam[n]:
                problems.append(f"saturation p={p} n={n}")
    for p in range(1, 6):
        phi = phi_list(p, 201)
        problems += [f"growth p={p} n={n}" for n in range(1, 201) if phi[n + 1] < q_poly(p, n) * phi[n]]
    ok = not problems
    record(9, ok, "BCI seeds and support p<=10; sandwich g<=f<=lambda p<=5 n<=60; saturation p>=n n<=20; "
                  "phi_{n+1} >= Q_p(n) phi_n p<=5 n<=200"
                  + (f"; failures: {problems[:5]}" if problems else "") + f"; {time.perf_counter() - t0:.1f}s")
    assert ok


if __name__ == "__main__":  # pragma: no cover
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
