"""hyperell: experiments on zeros of quadratic L-functions over F_q[x].

Exit codes: 0 success, 1 a check or integrity failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import platform
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import __version__
from .ensemble import (
    BudgetError,
    CacheError,
    accumulate_moments,
    cache_path,
    default_cache_dir,
    get_moments,
    load_cache,
    nonvanishing_proportion,
    one_level_average,
    pair_correlation_exact,
    save_cache,
    simple_zero_proportion,
    verify_sample,
)
from .fqx import FieldError, hyperelliptic_count, parse_field
from .ratios import (
    RatiosDomainError,
    a_euler,
    exact_logderiv_average,
    exact_ratio_average,
    ratios_logderiv,
    ratios_one_level,
    ratios_R,
    soft_bound,
    zeta_q,
)
from .suites import SUITES, run_suite
from .testfn import TestFunctionError, testfn_make
from .theorems import (
    WindowError,
    corollary_constants,
    thm1_rhs,
    thm2_rhs,
)

EXACT_BASELINE_MAX_G = 4


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- output


def _jsonable(x):
    if isinstance(x, Fraction):
        return {"exact": str(x), "decimal": float(x)}
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def _metadata(started: float) -> dict:
    return {
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "elapsed_s": round(time.time() - started, 3),
        "host": platform.node(),
        "python": platform.python_version(),
        "version": __version__,
    }


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return f"{float(v):.12g}"
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, complex):
        return f"{v.real:.10g}{v.imag:+.3g}i"
    return str(v)


def emit(args, payload: dict, rows: list[tuple], started: float) -> None:
    """Print the report in the requested format.

    ``rows`` are (name, value[, note]) lines used for table and CSV output;
    JSON carries the full payload with metadata in its own object.
    """
    if args.out == "json":
        doc = {"command": args.command, "config": _config(args), "result": _jsonable(payload),
               "metadata": _metadata(started)}
        print(json.dumps(doc, indent=2, sort_keys=True))
    elif args.out == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["term_name", "exact_rational", "decimal"])
        for row in rows:
            name, v = row[0], row[1]
            if isinstance(v, Fraction):
                w.writerow([name, str(v), repr(float(v))])
            elif isinstance(v, (int, float)) and not isinstance(v, bool):
                w.writerow([name, "", repr(float(v))])
            else:
                w.writerow([name, "", str(v)])
        sys.stdout.write(buf.getvalue())
    else:
        width = max((len(r[0]) for r in rows), default=10)
        for row in rows:
            note = f"   {row[2]}" if len(row) > 2 and row[2] else ""
            exact = f"  ({row[1]})" if isinstance(row[1], Fraction) and row[1].denominator != 1 and len(str(row[1])) < 40 else ""
            print(f"{row[0]:<{width}}  {_fmt(row[1])}{exact}{note}")


def _config(args) -> dict:
    keys = ("field", "g", "N", "Nmax", "testfn", "K", "Kprime", "tol", "force", "seed", "budget", "suite",
            "action", "alpha", "beta", "r")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


# ---------------------------------------------------------------- config helpers


def _field(args):
    try:
        F = parse_field(args.field)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    if F.p == 2:
        raise UsageError(f"q = {F.q} is even; quadratic characters need odd q")
    return F


def _genus(args) -> int:
    if args.g is None or args.g < 0:
        raise UsageError("--g must be a non-negative integer")
    return args.g


def _testfn(args, default_N: int):
    N = args.N if args.N is not None else default_N
    spec = args.testfn or f"fejer:{N + 1}"
    try:
        return testfn_make(spec, args.N)
    except TestFunctionError as exc:
        raise UsageError(str(exc)) from exc


def _moments(args, F, g: int, Nmax: int):
    cache_dir = args.cache_dir
    return get_moments(F, g, max(Nmax, 1), cache_dir, args.threads, args.budget)


# ---------------------------------------------------------------- commands


def cmd_verify(args) -> int:
    started = time.time()
    F = _field(args)
    g = _genus(args)
    checks = run_suite(args.suite, F, g, args.tol, args.seed)
    ok = all(c.passed for c in checks)
    rows = [(("PASS " if c.passed else "FAIL ") + c.name, c.residual, f"n={c.count} {c.detail}".strip())
            for c in checks]
    emit(args, {"passed": ok, "checks": [c.as_dict() for c in checks]}, rows, started)
    return 0 if ok else 1


def cmd_density(args) -> int:
    started = time.time()
    F = _field(args)
    g = _genus(args)
    tf = _testfn(args, max(g, 1))
    if g == 0:
        emit(args, {"average": 0.0, "note": "H_1 curves have genus 0 and no zeros"},
             [("exact average", 0.0, "no zeros at genus 0")], started)
        return 0
    try:
        rep = thm1_rhs(tf, F.q, g, args.K, args.Kprime, args.force)
    except WindowError as exc:
        raise UsageError(str(exc)) from exc
    mc = _moments(args, F, g, tf.N)
    exact = one_level_average(tf, mc)
    res = exact - float(rep.total)
    res0 = exact - float(rep.total_without_secondary)
    pred = ratios_one_level(tf, F.q, g)
    payload = {
        "testfn": tf.name,
        "N": tf.N,
        "H": mc.H,
        "exact_average": exact,
        "theorem": rep.as_dict(),
        "residual": res,
        "residual_without_secondary": res0,
        "ratio_residual_to_scale": abs(res) / rep.error_scale,
        "ratios_prediction": pred.as_dict(),
        "ratios_residual": exact - float(pred.total),
    }
    rows = [(f"theorem: {n}", v) for n, v in rep.parts]
    rows += [
        ("theorem total", rep.total, "forced outside window" if rep.forced else f"K={rep.K} K'={rep.Kprime}"),
        ("exact average", exact, f"|H| = {mc.H}"),
        ("residual", res),
        ("residual without secondary terms", res0),
        ("predicted error scale", rep.error_scale),
        ("|residual| / scale", abs(res) / rep.error_scale),
        ("ratios prediction", pred.total),
        ("ratios residual", exact - float(pred.total)),
    ]
    emit(args, payload, rows, started)
    return 0


def cmd_paircorr(args) -> int:
    started = time.time()
    F = _field(args)
    g = _genus(args)
    tf = _testfn(args, max(g - 1, 1))
    if g == 0:
        emit(args, {"average": 0.0}, [("exact average", 0.0, "no zeros at genus 0")], started)
        return 0
    try:
        rep = thm2_rhs(tf, F.q, g, args.K, args.Kprime, args.force)
    except WindowError as exc:
        raise UsageError(str(exc)) from exc
    mc = _moments(args, F, g, tf.N)
    exact = pair_correlation_exact(tf, mc)
    res = exact - rep.total
    payload = {
        "testfn": tf.name,
        "N": tf.N,
        "H": mc.H,
        "exact_average": exact,
        "theorem": rep.as_dict(),
        "residual": res,
        "residual_without_secondary": exact - rep.total_without_secondary,
        "ratio_residual_to_scale": abs(float(res)) / rep.error_scale,
    }
    rows = [(f"theorem: {n}", v) for n, v in rep.parts]
    rows += [
        ("theorem total", rep.total, "forced outside window" if rep.forced else f"K={rep.K} K'={rep.Kprime}"),
        ("exact average", exact, f"|H| = {mc.H}"),
        ("residual", res),
        ("predicted error scale", rep.error_scale),
        ("|residual| / scale", abs(float(res)) / rep.error_scale),
    ]
    emit(args, payload, rows, started)
    return 0


def _reference_rows():
    c = corollary_constants()
    return c, [
        ("reference: asymptotic nonvanishing bound", c["p0_bound"], "optimal test function, large g"),
        ("reference: Fejer-pair nonvanishing bound", c["fejer_nonvanishing"]),
        ("reference: asymptotic simple-zero bound", c["simple_bound"], "large g"),
        ("reference: Fejer-pair simple-zero bound", c["fejer_simple"]),
    ]


def cmd_nonvanishing(args) -> int:
    started = time.time()
    F = _field(args)
    g = _genus(args)
    mc = _moments(args, F, g, 1)
    p = nonvanishing_proportion(mc)
    c, ref = _reference_rows()
    payload = {"H": mc.H, "nonvanishing": mc.nonvanishing, "proportion": p,
               "central_orders": mc.central_orders, "reference": c}
    rows = [("nonvanishing at the central point", p, f"{mc.nonvanishing} of {mc.H}")] + ref
    emit(args, payload, rows, started)
    return 0


def cmd_simplezeros(args) -> int:
    started = time.time()
    F = _field(args)
    g = _genus(args)
    mc = _moments(args, F, g, 1)
    p = simple_zero_proportion(mc)
    c, ref = _reference_rows()
    payload = {"H": mc.H, "simple_zeros": mc.simple_zeros, "proportion": p, "reference": c}
    if p is None:
        rows = [("simple-zero proportion", "undefined", "no zeros at genus 0")] + ref
    else:
        rows = [("simple-zero proportion", p, f"{mc.simple_zeros} of {2 * g * mc.H} zeros")] + ref
    emit(args, payload, rows, started)
    return 0


def cmd_ratios(args) -> int:
    started = time.time()
    F = _field(args)
    g = _genus(args)
    if g < 1:
        raise UsageError("the ratios comparison needs g >= 1")
    q = F.q
    tf = _testfn(args, 2 * g)
    try:
        R = ratios_R(q, g, args.alpha, args.beta)
        ld = ratios_logderiv(q, g, args.r)
    except RatiosDomainError as exc:
        raise UsageError(str(exc)) from exc
    diag = a_euler(q, args.r, args.r)
    anti = a_euler(q, -1j * args.r, 1j * args.r)[0]
    anti_closed = zeta_q(q, 2) / zeta_q(q, 2 - 2j * args.r)
    pred = ratios_one_level(tf, q, g)
    bound = soft_bound(q, g)
    payload = {
        "A(r;r) - 1": abs(diag[0] - 1),
        "A(r;r) tail bound": diag[1],
        "A(-ir;ir) vs closed form": abs(anti - anti_closed),
        "R": R,
        "logderiv": ld,
        "one_level": pred.as_dict(),
        "soft_bound": bound,
    }
    rows = [
        ("|A(r;r) - 1|", abs(diag[0] - 1)),
        ("|A(-ir;ir) - zeta(2)/zeta(2-2ir)|", abs(anti - anti_closed)),
        ("conjectured ratio average", R, f"alpha={args.alpha} beta={args.beta}"),
        ("conjectured L'/L average", ld, f"r={args.r}"),
        ("ratios 1-level prediction", pred.total),
        ("soft bound 10 q^(-g-1/2+0.1g)", bound),
    ]
    status = 0
    if g <= EXACT_BASELINE_MAX_G and hyperelliptic_count(q, 2 * g + 1) <= (args.budget or 2e7):
        er = exact_ratio_average(str(F), g, args.alpha, args.beta)
        el = exact_logderiv_average(str(F), g, args.r)
        mc = _moments(args, F, g, tf.N)
        e1 = one_level_average(tf, mc)
        payload.update({"exact_ratio": er, "exact_logderiv": el, "exact_one_level": e1,
                        "ratio_residual": abs(R - er), "logderiv_residual": abs(ld - el),
                        "one_level_residual": abs(e1 - float(pred.total))})
        rows += [
            ("exact ratio average", er),
            ("|ratio residual|", abs(R - er)),
            ("exact L'/L average", el),
            ("|L'/L residual|", abs(ld - el)),
            ("exact 1-level average", e1),
            ("|1-level residual|", abs(e1 - float(pred.total))),
        ]
    else:
        rows.append(("exact baselines", "skipped", f"g > {EXACT_BASELINE_MAX_G} or over budget"))
    emit(args, payload, rows, started)
    return status


def cmd_cache(args) -> int:
    started = time.time()
    F = _field(args)
    g = _genus(args)
    Nmax = args.Nmax or args.N or 2 * max(g, 1)
    cache_dir = Path(args.cache_dir)
    path = cache_path(cache_dir, str(F), g, Nmax)
    if args.action == "build":
        if path.exists():
            mc = load_cache(cache_dir, str(F), g, Nmax)
            note = "already present"
        else:
            mc = accumulate_moments(F, g, Nmax, args.threads, args.budget)
            save_cache(mc, cache_dir)
            note = "written"
        emit(args, {"path": str(path), "status": note, "H": mc.H},
             [("cache file", str(path), note), ("H", mc.H)], started)
        return 0
    mc = load_cache(cache_dir, str(F), g, Nmax)
    if args.action == "info":
        emit(args, {"path": str(path), "cache": mc.to_json()},
             [("cache file", str(path)), ("field", mc.field), ("g", mc.g), ("Nmax", mc.Nmax), ("H", mc.H),
              ("nonvanishing", mc.nonvanishing), ("simple zeros", mc.simple_zeros)], started)
        return 0
    mc.check_invariants()
    rep = verify_sample(F, g, fraction=0.01, seed=args.seed)
    ok = rep["mismatches"] == 0
    emit(args, {"path": str(path), "sample": rep, "passed": ok},
         [("invariants", "ok"), ("sampled discriminants", rep["checked"]), ("mismatches", rep["mismatches"])],
         started)
    return 0 if ok else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="3", help="q, or p^k, or p^k:c0,c1,... for an explicit modulus")
    common.add_argument("--g", type=int, default=1, help="genus; discriminants have degree 2g+1")
    common.add_argument("--N", type=int, default=None, help="test-function support")
    common.add_argument("--Nmax", type=int, default=None, help="largest moment index to cache")
    common.add_argument("--testfn", default=None, help="fejer:M | delta0 | file:PATH (default fejer:N+1)")
    common.add_argument("--K", type=int, default=None)
    common.add_argument("--Kprime", type=int, default=None)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--cache-dir", default=None,
                        help="moment cache directory (default $HYPERELL_CACHE_DIR; without either, nothing is cached)")
    common.add_argument("--out", choices=("table", "json", "csv"), default="table")
    common.add_argument("--force", action="store_true", help="evaluate theorems outside their N window")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None, help="max q^(2g+1) polynomials to enumerate")

    parser = argparse.ArgumentParser(prog="hyperell", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("verify", parents=[common], help="run identity and consistency checks")
    p.add_argument("suite", choices=SUITES)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("density", parents=[common], help="1-level density: exact vs theorem")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("paircorr", parents=[common], help="pair correlation: exact vs theorem")
    p.set_defaults(func=cmd_paircorr)

    p = sub.add_parser("nonvanishing", parents=[common], help="exact proportion with L(1/2) != 0")
    p.set_defaults(func=cmd_nonvanishing)

    p = sub.add_parser("simplezeros", parents=[common], help="exact proportion of simple zeros")
    p.set_defaults(func=cmd_simplezeros)

    p = sub.add_parser("ratios", parents=[common], help="ratios-recipe predictions vs exact averages")
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=0.1)
    p.add_argument("--r", type=float, default=0.1)
    p.set_defaults(func=cmd_ratios)

    p = sub.add_parser("cache", parents=[common], help="build, inspect or verify the moment cache")
    p.add_argument("action", choices=("build", "info", "verify"))
    p.set_defaults(func=cmd_cache)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not getattr(args, "command", None):
        parser.print_help()
        return 2
    if args.cache_dir is None and (args.command == "cache" or os.environ.get("HYPERELL_CACHE_DIR")):
        args.cache_dir = str(default_cache_dir())
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CacheError as exc:
        print(f"cache error: {exc}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
