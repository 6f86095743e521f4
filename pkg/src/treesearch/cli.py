"""Command-line front end.

Exact numbers are printed as decimal strings ("p/q" for rationals) so that
nothing is lost at hundreds of digits. Exit status: 0 on success, 1 when a
check fails, 2 on bad usage or out-of-range input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import asymptotics as asy
from . import closed_forms as cf
from . import gw
from . import series as ser
from .enumeration import MAX_EXHAUSTIVE_N, enumerate_totals, oracle_xy_sum


class UsageError(Exception):
    pass


def _exact(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _parse_grid(text: str) -> list[float]:
    """``a:b:step`` (inclusive of b) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid must look like a:b:step, got {text!r}")
        a, b, step = (Fraction(p) for p in parts)
        if step <= 0:
            raise UsageError("grid step must be positive")
        out, x = [], a
        while x <= b:
            out.append(float(x))
            x += step
        return out
    return [float(p) for p in text.split(",") if p.strip()]


def _threads(args) -> int:
    return args.threads if args.threads is not None else gw.default_threads()


# --- subcommands ------------------------------------------------------------

def cmd_exact(args) -> int:
    n, l = args.n, args.level
    if n < 0 or not 0 <= l <= n:
        raise UsageError(f"need n >= 0 and 0 <= level <= n, got n={n}, level={l}")
    count = cf.level_count(n, l)
    out = {
        "n": str(n), "level": str(l),
        "totalD": _exact(cf.total_d(n, l)),
        "totalB": _exact(cf.total_b(n, l)),
        "totalDTrunc": _exact(cf.total_d_trunc(n, l)),
        "levelCount": _exact(count),
        "expectedDfs": _exact(Fraction(cf.total_d(n, l), count)) if count else None,
        "expectedBfs": _exact(Fraction(cf.total_b(n, l), count)) if count else None,
    }
    _emit(out)
    return 0


def cmd_oracle_check(args) -> int:
    if not 0 <= args.max_n <= MAX_EXHAUSTIVE_N:
        raise UsageError(f"--max-n must lie in 0..{MAX_EXHAUSTIVE_N}")
    names = ["totalD", "totalB", "totalB_alt", "totalDTrunc", "levelCount", "takacs1", "takacs2",
             "seriesB", "seriesD"]
    order = max(args.max_n, 1)
    b_ser = {l: ser.b_series(l, order) for l in range(1, args.max_n + 1)}
    d_ser = {l: ser.d_series(l, order) for l in range(1, args.max_n + 1)}
    failures = 0
    print("n " + " ".join(names))
    for n in range(args.max_n + 1):
        t = enumerate_totals(n, workers=_threads(args))
        ok = dict.fromkeys(names, True)
        for l in range(n + 1):
            ok["totalD"] &= t.total_d[l] == cf.total_d(n, l)
            ok["totalB"] &= t.total_b[l] == cf.total_b(n, l)
            ok["totalB_alt"] &= t.total_b[l] == cf.total_b_alt(n, l)
            ok["totalDTrunc"] &= t.total_d_trunc[l] == cf.total_d_trunc(n, l)
            ok["levelCount"] &= t.level_count[l] == cf.level_count(n, l)
            ok["takacs1"] &= t.moment_v1[l] == cf.takacs_moment(n, l, 1)
            ok["takacs2"] &= t.moment_v2[l] == cf.takacs_moment(n, l, 2)
            if l >= 1:
                ok["seriesB"] &= b_ser[l][n] == t.total_b[l]
                ok["seriesD"] &= d_ser[l][n] == 2 * (t.total_d[l] - t.total_d_trunc[l])
        failures += sum(not v for v in ok.values())
        print(f"{n} " + " ".join("pass" if ok[k] else "FAIL" for k in names))
    return 1 if failures else 0


def cmd_series_check(args) -> int:
    N, L = args.order, args.max_l
    if args.dump:
        if args.dump == "catalan":
            s = ser.catalan_series(N)
        elif args.dump == "b":
            s = ser.b_series(args.l, N)
        elif args.dump == "d":
            s = ser.d_series(args.l, N)
        else:
            s = ser.f_eval_series(args.l, Fraction(args.x0), Fraction(args.y0), N)
        sys.stdout.write(ser.series_to_csv(s))
        return 0
    results = {}
    b_ok = d_ok = forms_ok = True
    for l in range(1, L + 1):
        b, d, d2 = ser.b_series(l, N), ser.d_series(l, N), ser.d_series_product_form(l, N)
        for n in range(N + 1):
            b_ok &= b[n] == cf.total_b(n, l)
            want = 2 * cf.trunc_difference(n, l) if l <= n else 0
            d_ok &= d[n] == want
        forms_ok &= d == d2
    c = ser.catalan_series(N)
    results["b_series"] = b_ok
    results["d_series"] = d_ok
    results["d_forms_agree"] = forms_ok
    results["catalan_functional_equation"] = c == 1 + (c * c).shift(1)
    f_ok = True
    for l in range(0, 5):
        for x0, y0 in [(Fraction(1, 2), Fraction(3)), (Fraction(-1), Fraction(2, 3)), (Fraction(2), Fraction(-1, 5))]:
            s = ser.f_eval_series(l, x0, y0, min(N, 10))
            f_ok &= all(s[n] == oracle_xy_sum(n, l, x0, y0) for n in range(min(N, 10) + 1))
    results["f_eval_vs_enumeration"] = f_ok
    rep = ser.verify_lemmas(max(N, 2))
    out = {"order": N, "max_l": L, "checks": results,
           "lemmas": {"first_failure": rep.first_failure, "fderiv2_sign": rep.fderiv2_sign,
                      "passed": rep.passed}}
    _emit(out)
    return 0 if all(results.values()) and rep.passed else 1


def cmd_threshold(args) -> int:
    if args.do_lambda:
        lam = asy.solve_lambda(args.tol)
        _emit({"lambda": f"{lam:.6f}", "lambda_full": repr(lam),
               "residual": repr(asy.crossover_function(lam)), "tol": repr(args.tol)})
        return 0
    if args.n is None or args.n < 1:
        raise UsageError("threshold needs --n N (N >= 1) or --lambda")
    rep = asy.lambda_n(args.n)
    _emit({"n": str(rep.n), "lstar": str(rep.lstar), "unique": rep.unique,
           "ratio": repr(rep.ratio), "exact_scan": rep.exact_scan})
    return 0


def cmd_asymptotics(args) -> int:
    n = args.n
    if n < 1:
        raise UsageError("--n must be at least 1")
    s_values = _parse_grid(args.s_grid)
    root = n ** 0.5
    worst = 0.0
    for s in s_values:
        l = min(n, int(s * root + 1e-9))
        worst = max(worst, abs(asy.scaled_total_b(n, l) - asy.totalb_asymptotic(s)))
    exact, approx = asy.average_level_pair(n)
    l, lhs, rhs = asy.exp_bound_check(n, args.eps)
    out = {
        "n": str(n),
        "max_abs_error": repr(worst),
        "error_times_sqrt_n": repr(worst * root),
        "average_level_exact": _exact(exact),
        "average_level_asymptotic": repr(approx),
        "local_limit_constant": repr(asy.local_limit_constant(n)),
        "exp_bound": {"eps": repr(args.eps), "l": str(l), "lhs": repr(lhs), "rhs": repr(rhs), "holds": lhs <= rhs},
    }
    _emit(out)
    return 0 if lhs <= rhs else 1


def cmd_gw_sim(args) -> int:
    law = gw.parse_law(args.law)
    threads = _threads(args)
    if args.sweep:
        n_list = [int(x) for x in args.n_list.split(",")] if args.n_list else [args.n]
        rows = gw.scaling_sweep(law, _parse_grid(args.s_grid), n_list, args.samples, args.seed, threads)
        sys.stdout.write(gw.sweep_csv(rows))
        return 0
    if args.level is None:
        raise UsageError("gw-sim needs --level (or --sweep)")
    cfg = gw.SimConfig(args.n, law, args.samples, args.seed, args.level)
    if args.stat == "S":
        reports = [("S", gw.mc_estimate_S(cfg, threads))]
    else:
        v, h = gw.mc_estimate_occupation(cfg, threads)
        reports = [("v", v), ("h", h)]
    print("law,n,l,stat,samples,mean,stderr,target")
    for name, r in reports:
        target = "" if r.target is None else repr(r.target)
        print(f"{law.name},{cfg.n},{cfg.level},{name},{r.samples},{r.mean!r},{r.stderr!r},{target}")
    return 0


def cmd_conjecture(args) -> int:
    if args.l not in cf.A_TABLE:
        raise UsageError(f"--l must lie in 1..{max(cf.A_TABLE)}")
    if args.n_from < 0 or args.n_to < args.n_from:
        raise UsageError("need 0 <= --n-from <= --n-to")
    rep = cf.conjecture_check(args.l, range(args.n_from, args.n_to + 1))
    fitted = {p: cf.fit_conjecture_polynomial(args.l, p) for p in ("odd", "even")}
    out = {
        "l": args.l, "n_from": args.n_from, "n_to": args.n_to,
        "matches": {k: {"odd": a, "even": b} for k, (a, b) in rep.matches.items()},
        "first_failure": {k: {"odd": a, "even": b} for k, (a, b) in rep.first_failure.items()},
        "reading": rep.reading,
        "degenerate": rep.degenerate,
        "tabulated": {"odd": [str(c) for c in cf.A_TABLE[args.l]], "even": [str(c) for c in cf.B_TABLE[args.l]]},
        "fitted_rising": {p: None if f is None else [str(c) for c in f] for p, f in fitted.items()},
    }
    _emit(out)
    ok = rep.reading is not None or (rep.degenerate and len(rep.consistent) == len(cf.READINGS))
    return 0 if ok else 1


def cmd_plot_data(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    sys.stdout.write(asy.plot_csv(args.n, _parse_grid(args.s_grid)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treesearch", description="BFS versus DFS on random ordered trees.")
    p.add_argument("--threads", type=int, default=None,
                   help="worker cap (default: $TREESEARCH_THREADS or 1); never changes results")
    # accepted after the subcommand as well; SUPPRESS keeps it from clobbering the top-level value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    q = sub.add_parser("exact", help="closed-form totals at one (n, level)")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--level", type=int, required=True)
    q.set_defaults(func=cmd_exact)

    q = sub.add_parser("oracle-check", help="enumeration vs closed forms vs series")
    q.add_argument("--max-n", type=int, default=10)
    q.set_defaults(func=cmd_oracle_check)

    q = sub.add_parser("series-check", help="generating-function checks, or dump one series")
    q.add_argument("--order", type=int, default=30)
    q.add_argument("--max-l", type=int, default=8)
    q.add_argument("--dump", choices=["catalan", "b", "d", "f"])
    q.add_argument("--l", type=int, default=1)
    q.add_argument("--x0", default="1")
    q.add_argument("--y0", default="1")
    q.set_defaults(func=cmd_series_check)

    q = sub.add_parser("threshold", help="integer threshold for n, or the constant lambda")
    q.add_argument("--n", type=int)
    q.add_argument("--lambda", dest="do_lambda", action="store_true")
    q.add_argument("--tol", type=float, default=1e-12)
    q.set_defaults(func=cmd_threshold)

    q = sub.add_parser("asymptotics", help="error of the leading-order totalB formula at one n")
    q.add_argument("--n", type=int, default=10_000)
    q.add_argument("--s-grid", default="0.2:1.6:0.2")
    q.add_argument("--eps", type=float, default=0.2)
    q.set_defaults(func=cmd_asymptotics)

    q = sub.add_parser("gw-sim", help="Monte Carlo on conditioned Galton-Watson trees")
    q.add_argument("--law", default="geometric", help="geometric | poisson | binomial:M | mary:M")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--level", type=int)
    q.add_argument("--samples", type=int, default=10_000)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--stat", choices=["S", "occupation"], default="S")
    q.add_argument("--sweep", action="store_true", help="scaling table over --s-grid and --n-list")
    q.add_argument("--s-grid", default="0.4:1.6:0.4")
    q.add_argument("--n-list")
    q.set_defaults(func=cmd_gw_sim)

    q = sub.add_parser("conjecture", help="compare the tabulated polynomials with exact differences")
    q.add_argument("--l", type=int, required=True)
    q.add_argument("--n-from", type=int, default=1)
    q.add_argument("--n-to", type=int, default=40)
    q.set_defaults(func=cmd_conjecture)

    q = sub.add_parser("plot-data", help="exact vs asymptotic totalB over an s grid")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--s-grid", default="0:2:0.05")
    q.set_defaults(func=cmd_plot_data)
    return p


def main(argv=None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        # exact totals run to thousands of digits
        sys.set_int_max_str_digits(0)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None and args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"treesearch {args.command}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
