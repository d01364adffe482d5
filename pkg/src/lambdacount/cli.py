"""Command-line interface: ``lambdacount {count,verify,asymptotics,sample,cache}``.

Exit codes: 0 success, 1 verification or internal failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Optional

from . import __version__
from .sequences import (
    FAMILIES,
    PARAMETRIC,
    ROUTES,
    CountTable,
    DeltaValidationError,
    Family,
    RouteMismatch,
    alpha_multinomial,
    alpha_series,
    count_table,
    first_index,
    q_poly_closed,
    q_poly_sum,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _family(args) -> Family:
    if args.family in PARAMETRIC and args.p is None:
        raise UsageError(f"--p is required for family {args.family}")
    try:
        return Family(args.family, args.p if args.family in PARAMETRIC else None)
    except ValueError as e:
        raise UsageError(str(e)) from e


# ------------------------------------------------------------------- count


def _get_table(fam: Family, max_size: int, route: Optional[str], use_cache: bool, cache_dir) -> CountTable:
    if use_cache and route is None:
        from .cache import cached_table

        return cached_table(fam, max_size, cache_dir)
    return count_table(fam, max_size, route)


def cmd_count(args, out) -> int:
    fam = _family(args)
    if args.route is not None and args.route not in ROUTES[fam.tag]:
        raise UsageError(f"family {fam.tag} has routes: {', '.join(ROUTES[fam.tag])}")
    if args.max_size < first_index(fam):
        raise UsageError("--max-size is below the first index of the family")
    table = _get_table(fam, args.max_size, args.route, args.cache, args.cache_dir)
    rows = [(n, table[n]) for n in range(first_index(fam), args.max_size + 1)]
    if args.format == "csv":
        out.write("index,value\n")
        for n, v in rows:
            out.write(f"{n},{v}\n")
    elif args.format == "json":
        doc = {"family": fam.tag, "p": fam.p, "values": [{"n": n, "count": str(v)} for n, v in rows]}
        out.write(json.dumps(doc) + "\n")
    else:
        width = len(str(args.max_size))
        for n, v in rows:
            out.write(f"{n:>{width}}  {v}\n")
    return EXIT_OK


# ------------------------------------------------------------------ verify


def _first_diff(a: CountTable, b: CountTable, n_max: int, start: int = 1) -> Optional[int]:
    for n in range(start, n_max + 1):
        if a[n] != b[n]:
            return n
    return None


def _oracle_table(fam: Family, n_max: int) -> CountTable:
    from .oracle import Constraint, count_via_oracle

    c = Constraint.closed() if fam.tag == "closed" else Constraint(fam.tag, fam.p)
    t = CountTable(fam, "oracle")
    for n in range(1, n_max + 1):
        v = count_via_oracle(n, c, cap=max(n_max, 16))
        if v:
            t.append(n, v)
    return t


def _check_routes(label: str, tables: list[CountTable], n_max: int) -> tuple[bool, str]:
    names = " = ".join(t.route for t in tables)
    for t in tables[1:]:
        n = _first_diff(tables[0], t, n_max)
        if n is not None:
            return False, f"{label}: {tables[0].route} vs {t.route} first disagree at index {n}"
    return True, f"{label}: {names} (n <= {n_max})"


def _verify_family(spec: str, max_size: int, oracle_max: int) -> list[tuple[bool, str]]:
    tag, _, p = spec.partition(":")
    if tag in ("delta", "identities"):
        return _verify_special(tag)
    try:
        fam = Family(tag, int(p) if p else None)
    except ValueError as e:
        raise UsageError(f"bad family spec {spec!r}: {e}") from e
    if tag not in ("closed", "bci", "bck"):
        raise UsageError(f"verify supports closed, bci:P, bck:P, delta, identities; got {spec!r}")
    results = []
    try:
        routes = [count_table(fam, max_size, r) for r in ROUTES[tag]]
    except (RouteMismatch, DeltaValidationError) as e:
        return [(False, f"{fam}: {e}")]
    if len(routes) > 1:
        results.append(_check_routes(str(fam), routes, max_size))
    m = min(max_size, oracle_max)
    oracle = _oracle_table(fam, m)
    ok, msg = _check_routes(f"{fam} vs oracle", [routes[0], oracle], m)
    results.append((ok, msg))
    return results


def _verify_special(tag: str) -> list[tuple[bool, str]]:
    from .sequences import delta_direct, delta_fast, fast_path_status

    if tag == "delta":
        ok, err = fast_path_status()
        if not ok:
            return [(False, f"delta: fast path disabled: {err}")]
        for n in range(2, 61):
            for l in range(1, n):
                if delta_fast(n, l) != delta_direct(n, l):
                    return [(False, f"delta: fast vs direct first disagree at (n={n}, l={l})")]
        return [(True, "delta: fast recurrence = direct double sum (n <= 60)")]
    out = []
    bad = next(((p, n) for p in range(1, 9) for n in range(1, 201) if q_poly_sum(p, n) != q_poly_closed(p, n)), None)
    out.append((bad is None, "identities: Q_p sum = closed form (p <= 8, 1 <= n <= 200)" + (f" fails at {bad}" if bad else "")))
    bad = next(((l, p) for p in range(1, 13) for l in range(1, p + 1) if alpha_multinomial(l, p) != alpha_series(l, p)), None)
    out.append((bad is None, "identities: alpha multinomial = series (p <= 12)" + (f" fails at {bad}" if bad else "")))
    return out


DEFAULT_VERIFY = ["closed", "bci:1", "bci:2", "bck:1", "bck:2", "delta", "identities"]


def cmd_verify(args, out) -> int:
    specs = args.families or DEFAULT_VERIFY
    if args.oracle_max > 16:
        raise UsageError("--oracle-max is capped at 16")
    failures = 0
    for spec in specs:
        for ok, msg in _verify_family(spec, args.max_size, args.oracle_max):
            failures += not ok
            out.write(f"{'PASS' if ok else 'FAIL'}  {msg}\n")
    out.write(f"{'all checks passed' if not failures else f'{failures} check(s) failed'}\n")
    return EXIT_OK if not failures else EXIT_FAIL


# ------------------------------------------------------------- asymptotics


def cmd_asymptotics(args, out) -> int:
    from . import asymptotics as asy

    w = out.write
    if args.family == "bci":
        if args.p is None or args.p < 2:
            raise UsageError("asymptotics for bci needs --p >= 2")
        c = asy.BciConstants.compute(args.p, args.terms)
        rep = asy.compute_ap(args.p, args.terms)
        for k, v in vars(c).items():
            w(f"{k:12s} {v!r}\n")
        w(f"{'a_p partial':12s} {rep.partial!r}  (K_p at {args.terms} exact factors)\n")
        w(f"{'a_p tail':12s} {rep.tail!r}  (log of estimated remaining factors)\n")
        w(f"{'last step':12s} {rep.last_step:.3e}\n")
        w(f"{'B_p (EML)':12s} {asy.compute_Bp_eml(args.p)!r}\n")
        for j in ([args.n] if args.n else [50, 100, 200, 300]):
            w(f"ratio exact/estimate at j={j}: {asy.bci_ratio(args.p, j, c.A_p)!r}\n")
    elif args.family == "bci1":
        n = args.n or 2999  # largest support point <= 3000
        try:
            g = asy.bci1_growth(n)
        except ValueError as e:
            raise UsageError(str(e)) from e
        fit = asy.bci1_fit(n)
        w(f"size                 {n}\n")
        w(f"growth exponent      {g!r}\n")
        w(f"ratio g_n/exp(.)     {fit.ratios[-1]!r}  (fitted constant C, not a theorem)\n")
        w(f"change over last decade {fit.last_decade_change():.3e}\n")
    elif args.family == "closed":
        n = args.n or 1000
        if n < 3:
            raise UsageError("--n must be >= 3")
        if args.epsilon <= 0:
            raise UsageError("--epsilon must be positive")
        r = asy.lambda_bounds(n, args.epsilon)
        lo, hi = r.corridor()
        for k, v in vars(r).items():
            w(f"{k:16s} {v!r}\n")
        w(f"{'normalized':16s} {r.normalized!r}  (corridor [{lo:.4f}, {hi:.4f}])\n")
        lo_u, mid, hi_u = asy.n_u_bracket(n)
        w(f"n/W(en) bracket  {lo_u!r} <= {mid!r} <= {hi_u!r}\n")
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown family {args.family}")
    return EXIT_OK


# ------------------------------------------------------------------ sample


def cmd_sample(args, out) -> int:
    from . import sampler, terms

    try:
        state = sampler.SamplerState(args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from e
    if args.count < 0:
        raise UsageError("--count must be >= 0")
    if args.family == "closed":
        if sampler.closed_count(args.size) == 0:
            raise UsageError(f"there are no closed terms of size {args.size}")
        draw: Callable = lambda: sampler.sample_closed(args.size, state)  # noqa: E731
    else:
        if args.p is None or args.p < 1:
            raise UsageError("sampling bci needs --p >= 1")
        from .sequences import bci_index

        if bci_index(args.p, args.size) is None:
            raise UsageError(f"BCI({args.p}) has no terms of size {args.size}")
        draw = lambda: terms.to_debruijn(sampler.sample_bci(args.p, args.size, state))  # noqa: E731
    fmt = {
        "sexpr": terms.to_sexpr,
        "named": terms.to_named,
        "json": terms.to_json,
        "dot": terms.to_dot,
    }[args.format]
    for i in range(args.count):
        t = draw()
        out.write((terms.to_dot(t, f"term{i}") if args.format == "dot" else fmt(t)) + "\n")
    return EXIT_OK


# ------------------------------------------------------------------- cache


def cmd_cache(args, out) -> int:
    from . import cache

    path = (Path(args.cache_dir) if args.cache_dir else cache.default_cache_dir()) / cache.CACHE_FILE
    if args.action == "show":
        cf = cache.cache_load(path, spot_check=False)
        out.write(f"{path} (format {cf.format_version})\n")
        for e in cf.entries:
            out.write(f"{str(e.family):24s} route={e.route} up to {max(e.values, default=-1)} ({len(e.values)} values, v{e.tool_version})\n")
    elif args.action == "check":
        cf = cache.cache_load(path)
        out.write(f"spot check passed for {len(cf.entries)} entr{'y' if len(cf.entries) == 1 else 'ies'}\n")
    elif args.action == "fill":
        if args.family is None or args.max_size is None:
            raise UsageError("cache fill needs --family and --max-size")
        fam = _family(args)
        t = cache.cached_table(fam, args.max_size, args.cache_dir)
        out.write(f"{fam}: cached up to {t.max_index}\n")
    elif args.action == "clear":
        if path.exists():
            path.unlink()
        out.write(f"removed {path}\n")
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lambdacount", description="Exact counts, checks and samples of lambda-terms.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="print a count table")
    c.add_argument("--family", required=True, choices=FAMILIES)
    c.add_argument("--p", type=int)
    c.add_argument("--max-size", type=int, required=True)
    c.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    c.add_argument("--route", help="alternative route (see ROUTES); disables the cache")
    c.add_argument("--cache", action="store_true", help="read and extend the on-disk cache")
    c.add_argument("--cache-dir")
    c.set_defaults(func=cmd_count)

    v = sub.add_parser("verify", help="cross-check routes against each other and the oracle")
    v.add_argument("families", nargs="*", help="closed, bci:P, bck:P, delta, identities (default: all of a standard set)")
    v.add_argument("--max-size", type=int, default=12)
    v.add_argument("--oracle-max", type=int, default=12)
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("asymptotics", help="constants, convergence ratios and bound corridors")
    a.add_argument("--family", required=True, choices=("bci", "bci1", "closed"))
    a.add_argument("--p", type=int)
    a.add_argument("--n", type=int)
    a.add_argument("--epsilon", type=float, default=0.1)
    a.add_argument("--terms", type=int, default=500, help="exact factors used for a_p")
    a.set_defaults(func=cmd_asymptotics)

    s = sub.add_parser("sample", help="uniform random terms")
    s.add_argument("--family", required=True, choices=("closed", "bci"))
    s.add_argument("--p", type=int)
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=("sexpr", "named", "json", "dot"), default="sexpr")
    s.set_defaults(func=cmd_sample)

    k = sub.add_parser("cache", help="manage the table cache")
    k.add_argument("action", choices=("show", "check", "fill", "clear"))
    k.add_argument("--family", choices=FAMILIES)
    k.add_argument("--p", type=int)
    k.add_argument("--max-size", type=int)
    k.add_argument("--cache-dir")
    k.set_defaults(func=cmd_cache)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    from .cache import CacheError

    try:
        return args.func(args, out)
    except UsageError as e:
        print(f"lambdacount: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (RouteMismatch, DeltaValidationError, ArithmeticError) as e:
        print(f"lambdacount: internal failure: {e}", file=sys.stderr)
        return EXIT_FAIL
    except CacheError as e:
        print(f"lambdacount: cache error: {e}", file=sys.stderr)
        return EXIT_FAIL
    except BrokenPipeError:  # pragma: no cover - e.g. piped into head
        return EXIT_OK

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
