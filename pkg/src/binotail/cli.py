"""Command-line surface for the bound families and certification sweeps.

Subcommands
    eval        every applicable bound at one (n, k, p), with tightness
    sweep       per-point bound values and ratios over a grid
    verify      certification suites with process exit codes
    conjecture  ratio-cap scan with monotonicity evidence and a fixed-k slice
    compare     bracket-width comparison against the normal-comparison bounds
    limits      convergence tables along an n-schedule

Artifacts are deterministic: fixed column orders, '.' decimal separator,
LF terminators, floats at 17 significant digits, key-sorted JSON stamped
"schema": 1; two runs on one configuration are byte-identical.  Rational
inputs are accepted as "a/b" and feed the exact arithmetic losslessly;
decimal inputs are converted to their exact decimal rational and flagged
with a warning field in the output.  With --out, the sweep, verify,
conjecture, compare, and limits artifacts gain a companion PNG figure
with the same stem unless --no-figure is passed.

Exit codes: 0 success or no violations, 1 violations found, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import report
from .bounds import (
    chernoff_upper,
    ferrante_upper,
    ratio_bounds,
    reverse_chernoff_pair,
    tail_bounds,
    upper_tail_bounds,
    upper_tail_ratio_bounds,
)
from .exact import (
    BinomialParams,
    TailTable,
    lower_tail_exact,
    pmf_exact,
    upper_tail_exact,
)
from .mckay import crossover_f_star, mckay_ratio_bounds, mckay_tail_bounds
from .validate import (
    GridSpec,
    K_RULES,
    RATIO_CAP_GLOBAL,
    RATIO_CAP_INTERIOR,
    SUITE_IDS,
    conjecture_scan,
    conjecture_slice,
    convergence_suite,
    run_suite,
)

# Suites whose published grid runs to a different n ceiling than the rest.
_SUITE_N_MAX = {"phi_band": 2000}
_DEFAULT_N_MAX = 300

_EVAL_COLUMNS = ("bound", "scale", "log", "value", "tightness", "note")
_SWEEP_COLUMNS = ("n", "k", "p", "f", "pmf", "tail", "ratio",
                  "L", "U", "ratio_over_L", "b_down", "b_up")
_CONJ_COLUMNS = ("quantity", "value", "n", "k", "p")
_COMPARE_COLUMNS = ("n", "k", "p", "f", "width_ratio_ours",
                    "width_ratio_mckay", "width_tail_ours",
                    "width_chernoff_pair", "tighter")
_LIMIT_COLUMNS = ("track", "n", "k", "value", "target", "gap", "x_eff")


# ---------------------------------------------------------------------------
# argument parsing helpers
# ---------------------------------------------------------------------------


def _parse_rational(text: str, name: str, warnings: list) -> Fraction:
    """Lossless "a/b" parse; decimal literals convert exactly but warn."""
    text = text.strip()
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"{name} must be a rational like 3/10, got {text!r}"
                         ) from exc
    if "/" not in text and value.denominator != 1:
        warnings.append(
            f"decimal {name}={text} interpreted as the exact rational "
            f"{value}; prefer a/b form for grid inputs")
    return value


def _parse_int_list(text: str, name: str) -> tuple:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ValueError(f"{name} must be a comma list of integers") from exc
    if not values:
        raise ValueError(f"{name} must be a nonempty comma list of integers")
    return values


def _artifact_comments(command: str, details: Sequence[str],
                       warnings: Sequence[str]) -> list:
    comments = [f"binotail {command}"]
    comments.extend(details)
    comments.extend(f"warning: {w}" for w in warnings)
    return comments


def _emit(args, text: str, *, render=None) -> None:
    """Route the artifact to --out or stdout; render the figure if asked."""
    if args.out:
        report.write_text(args.out, text)
        if render is not None and not args.no_figure:
            render(report.figure_path(args.out))
    else:
        sys.stdout.write(text)


def _sat(value: Fraction) -> float:
    try:
        return float(value)
    except OverflowError:
        return math.inf


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def _log_of(value: float) -> float:
    return math.log(value) if value > 0 else -math.inf


def _eval_rows(n: int, k: int, p: Fraction, tail: str,
               want_exact: bool) -> list:
    """(bound, scale, log, value, tightness, note) rows for one point."""
    params = BinomialParams(n, k, p)
    lower = tail == "lower"
    exact_tail = (lower_tail_exact if lower else upper_tail_exact)(n, k, p)
    exact_pmf = pmf_exact(n, k, p)
    tail_ref = _sat(exact_tail.value)
    pmf_ref = _sat(exact_pmf.value)
    ratio_ref = _sat(exact_tail.value / exact_pmf.value)
    rows = []

    def add(bound, scale, value, ref, note=""):
        rows.append((bound, scale, _log_of(value), value,
                     value / ref if ref > 0 else math.inf, note))

    def add_skipped(bound, scale, note):
        rows.append((bound, scale, None, None, None, note))

    if want_exact:
        add("exact", "tail", tail_ref, tail_ref)

    degenerate = k == 0 or k == n
    if degenerate:
        add("L", "ratio", 1.0, ratio_ref)
        add("U", "ratio", 1.0, ratio_ref)
        for bound, scale in (("b_down", "tail"), ("b_up", "tail"),
                             ("chernoff", "tail"), ("reverse_type", "pmf"),
                             ("reverse_ash", "pmf"), ("ferrante", "tail"),
                             ("mckay_down", "tail"), ("mckay_up", "tail")):
            add_skipped(bound, scale, "degenerate endpoint")
        return rows

    rb = ratio_bounds(params) if lower else upper_tail_ratio_bounds(params)
    add("L", "ratio", rb.lower, ratio_ref)
    add("U", "ratio", rb.upper, ratio_ref)

    tb = tail_bounds(params) if lower else upper_tail_bounds(params)
    add("b_down", "tail", tb.b_down.value, tail_ref)
    add("b_up", "tail", tb.b_up.value, tail_ref)
    add("chernoff", "tail", tb.chernoff.value, tail_ref)
    add("reverse_type", "pmf", tb.reverse_type.value, pmf_ref)
    add("reverse_ash", "pmf", tb.reverse_ash.value, pmf_ref)
    if tb.ferrante is not None:
        add("ferrante", "tail", tb.ferrante.value, tail_ref)
    else:
        add_skipped("ferrante", "tail", "prefactor pole at k = pn")

    if Fraction(k) == p * n:
        add_skipped("mckay_down", "tail", "pole at the mean k = pn")
        add_skipped("mckay_up", "tail", "pole at the mean k = pn")
    else:
        bracket = mckay_tail_bounds(params, tail=tail)
        add("mckay_down", "tail", bracket.lo, tail_ref)
        add("mckay_up", "tail", bracket.hi, tail_ref)
    return rows


def cmd_eval(args) -> int:
    warnings: list = []
    p = _parse_rational(args.p, "p", warnings)
    rows = _eval_rows(args.n, args.k, p, args.tail, args.exact)
    details = [f"point: n={args.n} k={args.k} p={p} tail={args.tail}"]
    if args.format == "json":
        payload = {
            "command": "eval",
            "params": {"n": args.n, "k": args.k, "p": str(p),
                       "tail": args.tail},
            "warnings": warnings,
            "bounds": [dict(zip(_EVAL_COLUMNS, row)) for row in rows],
        }
        text = report.json_text(payload)
    else:
        text = report.csv_text(
            _EVAL_COLUMNS, rows,
            comments=_artifact_comments("eval", details, warnings),
            digits=args.precision)
    _emit(args, text)
    return 0


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _sweep_grid(args, warnings: list) -> GridSpec:
    if args.n_max is not None:
        n_values = tuple(range(1, args.n_max + 1))
    else:
        n_values = _parse_int_list(args.n, "--n")
    if args.p_step is not None:
        p_values = tuple(Fraction(j, args.p_step)
                         for j in range(1, args.p_step))
    else:
        p_values = tuple(_parse_rational(tok, "p", warnings)
                         for tok in args.p.split(","))
    return GridSpec(n_values=n_values, p_values=p_values, k_rule=args.k_rule)


def _sweep_rows(grid: GridSpec) -> list:
    rows = []
    for n in grid.n_values:
        for p in grid.p_values:
            table = TailTable(n, p)
            kmax_ratio = (p.numerator * n) // p.denominator
            for k in grid.k_range(n, p):
                pmf = _sat(table.pmf(k))
                tail = _sat(table.cdf(k))
                if k <= kmax_ratio:
                    ratio = _sat(table.cdf(k) / table.pmf(k))
                    if k == 0:
                        L = U = 1.0
                    else:
                        rb = ratio_bounds(BinomialParams(n, k, p))
                        L, U = rb.lower, rb.upper
                    over = ratio / L
                    if 1 <= k <= min(kmax_ratio, n - 1):
                        tb = tail_bounds(BinomialParams(n, k, p))
                        b_down, b_up = tb.b_down.value, tb.b_up.value
                    else:
                        b_down = b_up = None
                else:
                    ratio = L = U = over = b_down = b_up = None
                rows.append((n, k, p, k / n, pmf, tail, ratio,
                             L, U, over, b_down, b_up))
    return rows


def cmd_sweep(args) -> int:
    warnings: list = []
    grid = _sweep_grid(args, warnings)
    rows = _sweep_rows(grid)
    details = [f"grid: {grid.describe()}"]
    if args.format == "json":
        text = report.json_text({
            "command": "sweep",
            "grid": grid.describe(),
            "warnings": warnings,
            "columns": list(_SWEEP_COLUMNS),
            "rows": [[str(p) if isinstance(p, Fraction) else p
                      for p in row] for row in rows],
        })
    else:
        text = report.csv_text(
            _SWEEP_COLUMNS, rows,
            comments=_artifact_comments("sweep", details, warnings),
            digits=args.precision)
    points = [(row[0], row[1], row[2], row[9])
              for row in rows if row[9] is not None]
    _emit(args, text, render=lambda path: report.save_sweep_figure(
        points, path, cap=float(RATIO_CAP_GLOBAL)))
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verify_grid(suite: str, args) -> GridSpec:
    n_max = args.n_max or _SUITE_N_MAX.get(suite, _DEFAULT_N_MAX)
    return GridSpec.default(n_max=n_max, p_step=args.p_step,
                            k_rule=args.k_rule)


def cmd_verify(args) -> int:
    warnings: list = []
    x_step = _parse_rational(args.x_step, "x-step", warnings)
    suites = list(SUITE_IDS) if args.suite == "all" else [args.suite]
    summaries = []
    details = []
    for suite in suites:
        grid = _verify_grid(suite, args)
        if suite == "gaussian":
            summary = run_suite(suite, grid, x_max=args.x_max, x_step=x_step)
            details.append(f"{suite} grid: x in [0, {args.x_max}] "
                           f"step {x_step}")
        else:
            summary = run_suite(suite, grid)
            details.append(f"{suite} grid: {grid.describe()}")
        summaries.append(summary)
        status = "PASS" if summary.passed else "FAIL"
        print(f"{suite}: {status} ({summary.points_checked} points, "
              f"{len(summary.violations)} violations)", file=sys.stderr)

    if args.format == "json":
        text = report.json_text(report.summaries_payload(
            summaries, extra={"command": "verify", "warnings": warnings,
                              "grids": details}))
    else:
        counts = [f"{s.suite}: {'PASS' if s.passed else 'FAIL'}"
                  for s in summaries]
        text = report.csv_text(
            report.VIOLATION_COLUMNS, report.violation_rows(summaries),
            comments=_artifact_comments("verify", details + counts, warnings),
            digits=args.precision)
    _emit(args, text,
          render=lambda path: report.save_verify_figure(summaries, path))
    return 0 if all(s.passed for s in summaries) else 1


# ---------------------------------------------------------------------------
# conjecture
# ---------------------------------------------------------------------------


def _witness_point(entry) -> tuple:
    if isinstance(entry, (list, tuple)) and len(entry) == 3:
        return entry[0], entry[1], entry[2]
    return None, None, None


def cmd_conjecture(args) -> int:
    grid = GridSpec.default(n_max=args.n_max, p_step=args.p_step)
    summary = conjecture_scan(grid, refine_step=args.refine_step,
                              refine_span=args.refine_span)
    slice_ns = _parse_int_list(args.slice_n, "--slice-n")
    trace = conjecture_slice(args.slice_k, slice_ns)
    witness = summary.extremal_witness

    rows = []
    n, k, p = _witness_point(witness.get("argmax"))
    rows.append(("global-max", witness.get("value"), n, k, p))
    rows.append(("global-cap", float(RATIO_CAP_GLOBAL), None, None,
                 witness.get("cap_exact")))
    n, k, p = _witness_point(witness.get("interior_argmax"))
    rows.append(("interior-max", witness.get("interior_max"), n, k, p))
    rows.append(("interior-cap", RATIO_CAP_INTERIOR, None, None, None))
    checks = witness.get("monotonicity_checks", {})
    for name in sorted(checks):
        rows.append((f"monotone-{name}-comparisons", checks[name],
                     None, None, None))
    for row in trace["rows"]:
        rows.append((f"slice-k{trace['k']}", row["ratio"], row["n"],
                     trace["k"], str(Fraction(trace["k"], row["n"]))))

    details = [f"grid: {grid.describe()}",
               f"violations: {len(summary.violations)}",
               f"slice k={trace['k']}: strictly_increasing="
               f"{trace['strictly_increasing']} below_cap={trace['below_cap']}"]
    if args.format == "json":
        text = report.json_text({
            "command": "conjecture",
            "grid": grid.describe(),
            "scan": summary.as_dict(),
            "slice": trace,
        })
    else:
        text = report.csv_text(
            _CONJ_COLUMNS, rows,
            comments=_artifact_comments("conjecture", details, ()),
            digits=args.precision)
    _emit(args, text, render=lambda path: report.save_conjecture_figure(
        trace, witness, path))
    return 0 if summary.passed else 1


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------


def _compare_ks(n: int, p: Fraction, points: int) -> list:
    k_lo = -((-p.numerator * n) // p.denominator) + 1
    k_hi = n - 1
    if k_lo > k_hi:
        raise ValueError("no admissible upper-tail k for this (n, p)")
    count = max(2, min(points, k_hi - k_lo + 1))
    step = (k_hi - k_lo) / (count - 1)
    return sorted({k_lo + round(i * step) for i in range(count)})


def cmd_compare(args) -> int:
    warnings: list = []
    p = _parse_rational(args.p, "p", warnings)
    n = args.n
    f_star = crossover_f_star(p).f_star
    rows = []
    for k in _compare_ks(n, p, args.points):
        params = BinomialParams(n, k, p)
        rb = upper_tail_ratio_bounds(params)
        mb = mckay_ratio_bounds(params)
        tb = upper_tail_bounds(params)
        w_ours = rb.upper / rb.lower
        w_mckay = mb.hi / mb.lo
        w_tail = math.exp(tb.b_up.log - tb.b_down.log)
        reverse_log = max(tb.reverse_type.log, tb.reverse_ash.log)
        w_pair = math.exp(tb.chernoff.log - reverse_log)
        rows.append((n, k, p, k / n, w_ours, w_mckay, w_tail, w_pair,
                     "ours" if w_ours <= w_mckay else "mckay"))

    details = [f"point set: n={n}, p={p}, {len(rows)} upper-tail k",
               f"crossover f* = {f_star:.15g}"]
    if args.format == "json":
        text = report.json_text({
            "command": "compare",
            "against": args.against,
            "f_star": f_star,
            "warnings": warnings,
            "columns": list(_COMPARE_COLUMNS),
            "rows": [[str(c) if isinstance(c, Fraction) else c for c in row]
                     for row in rows],
        })
    else:
        text = report.csv_text(
            _COMPARE_COLUMNS, rows,
            comments=_artifact_comments("compare", details, warnings),
            digits=args.precision)
    fig_rows = [(row[3], row[4], row[7], row[5]) for row in rows]
    _emit(args, text, render=lambda path: report.save_compare_figure(
        fig_rows, f_star, path))
    return 0


# ---------------------------------------------------------------------------
# limits
# ---------------------------------------------------------------------------


def cmd_limits(args) -> int:
    warnings: list = []
    f = _parse_rational(args.f, "f", warnings)
    p = _parse_rational(args.p, "p", warnings)
    schedule = _parse_int_list(args.schedule, "--schedule")
    # Final-gap tolerances bind only once the schedule reaches the n at
    # which each limit is published: 1e4 for the large-deviation track,
    # 1e6 for the moderate and central-limit tracks.
    last = schedule[-1]
    summary = convergence_suite(
        f, p, schedule, clt_x=args.x,
        large_dev_tol=0.005 if last >= 10**4 else 1.0,
        moderate_tol=0.05 if last >= 10**6 else 1.0,
        clt_tol=0.05 if last >= 10**6 else 1.0)
    tracks = summary.extremal_witness["tracks"]

    rows = []
    for name in ("large_dev", "moderate", "clt"):
        track = tracks.get(name)
        if track is None:
            continue
        for row in track["rows"]:
            k = row.get("k", int(f * row["n"]) if (f * row["n"]).denominator == 1
                        else None)
            target = row.get("target", track.get("limit"))
            rows.append((name, row["n"], k, row["value"], target,
                         row["gap"], row.get("x_eff")))

    details = [f"tracks: f={f} p={p} x={args.x} "
               f"schedule={','.join(str(n) for n in schedule)}",
               f"violations: {len(summary.violations)}"]
    if args.format == "json":
        text = report.json_text({
            "command": "limits",
            "params": {"f": str(f), "p": str(p), "x": args.x,
                       "schedule": list(schedule)},
            "warnings": warnings,
            "summary": summary.as_dict(),
        })
    else:
        text = report.csv_text(
            _LIMIT_COLUMNS, rows,
            comments=_artifact_comments("limits", details, warnings),
            digits=args.precision)
    _emit(args, text,
          render=lambda path: report.save_limits_figure(tracks, path))
    return 0 if summary.passed else 1


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------


def _add_output_options(sub) -> None:
    sub.add_argument("--format", choices=("csv", "json"), default="csv",
                     help="artifact format (default csv)")
    sub.add_argument("--out", help="write the artifact here instead of stdout")
    sub.add_argument("--precision", type=int, default=17,
                     help="significant digits for CSV floats (default 17)")
    sub.add_argument("--no-figure", action="store_true",
                     help="skip the companion PNG next to --out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="binotail",
        description="Certified binomial tail bounds: evaluation, sweeps, "
                    "verification suites, and convergence tables.")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("eval", help="all bounds at one (n, k, p)")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--k", type=int, required=True)
    sub.add_argument("--p", required=True, help='rational like 1/2')
    sub.add_argument("--tail", choices=("lower", "upper"), default="lower")
    sub.add_argument("--exact", action="store_true",
                     help="include the exact tail value row")
    _add_output_options(sub)
    sub.set_defaults(func=cmd_eval)

    sub = subs.add_parser("sweep", help="per-point bound values over a grid")
    sub.add_argument("--n", default="10,30,100,300",
                     help="comma list of n (default 10,30,100,300)")
    sub.add_argument("--n-max", type=int,
                     help="use n = 1..n_max instead of --n")
    sub.add_argument("--p", default="1/4,1/2,3/4",
                     help="comma list of rational p (default 1/4,1/2,3/4)")
    sub.add_argument("--p-step", type=int,
                     help="use the full lattice p = j/p_step instead of --p")
    sub.add_argument("--k-rule", choices=K_RULES, default="lower-tail-k")
    _add_output_options(sub)
    sub.set_defaults(func=cmd_sweep)

    sub = subs.add_parser("verify", help="run certification suites")
    sub.add_argument("--suite", default="all",
                     choices=tuple(SUITE_IDS) + ("all",))
    sub.add_argument("--n-max", type=int,
                     help=f"grid ceiling (default {_DEFAULT_N_MAX}, "
                          f"phi_band {_SUITE_N_MAX['phi_band']})")
    sub.add_argument("--p-step", type=int, default=20)
    sub.add_argument("--k-rule", choices=K_RULES, default="all-k")
    sub.add_argument("--x-max", type=float, default=10.0,
                     help="gaussian suite abscissa ceiling")
    sub.add_argument("--x-step", default="1/100",
                     help="gaussian suite abscissa step (rational)")
    sub.add_argument("--threads", type=int,
                     help="thread count for the screening passes")
    _add_output_options(sub)
    sub.set_defaults(func=cmd_verify)

    sub = subs.add_parser("conjecture", help="ratio-cap scan evidence")
    sub.add_argument("--n-max", type=int, default=_DEFAULT_N_MAX)
    sub.add_argument("--p-step", type=int, default=20)
    sub.add_argument("--refine-step", type=int, default=100)
    sub.add_argument("--refine-span", type=int, default=3)
    sub.add_argument("--slice-k", type=int, default=12)
    sub.add_argument("--slice-n", default="25,50,100,200,400,800,1600")
    sub.add_argument("--threads", type=int)
    _add_output_options(sub)
    sub.set_defaults(func=cmd_conjecture)

    sub = subs.add_parser("compare",
                          help="bracket widths across the upper tail")
    sub.add_argument("--against", choices=("mckay",), default="mckay")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--p", required=True)
    sub.add_argument("--points", type=int, default=60,
                     help="number of sampled k (default 60)")
    _add_output_options(sub)
    sub.set_defaults(func=cmd_compare)

    sub = subs.add_parser("limits", help="convergence tables along a schedule")
    sub.add_argument("--f", default="3/10")
    sub.add_argument("--p", default="1/2")
    sub.add_argument("--schedule", default="10,100,1000,10000")
    sub.add_argument("--x", type=float, default=1.0,
                     help="central-limit offset (default 1)")
    _add_output_options(sub)
    sub.set_defaults(func=cmd_limits)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", None):
        os.environ["BINOTAIL_THREADS"] = str(args.threads)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: cannot write artifact: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
