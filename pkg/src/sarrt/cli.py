"""Command-line entry point: ``python -m sarrt <subcommand> ...``.

Exit status is 0 on success, 1 when ``verify`` finds a failing check and 2 on
usage errors (bad flags or law strings).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from .constants import TABLE1_COLUMNS, format_table1, solve_constants, table1
from .dag_sim import MODES, build_kdag, greedy_distance, reduction_check
from .distributions import LAW_GRAMMAR, parse_law
from .montecarlo import DEFAULT_SEED, STATISTICS, ExperimentPlan, default_threads, run_plan
from .rate_function import RateEvaluator, psi
from .report import RenderSpec, csv_text, json_text, render_svg
from .streams import RandomStream, derive_key
from .tree_sim import (
    build_depths,
    path_event_probability,
    renewal_bounds_batch,
    rotation_inequality_check,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n\nlaw grammar:\n{LAW_GRAMMAR}")
        sys.exit(EXIT_USAGE)


def _law(text):
    try:
        return parse_law(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc).splitlines()[0]) from None


def _int(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


def _int_list(text):
    return [_int(s) for s in text.split(",") if s]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sarrt", description="Depths and heights of scaled attachment random recursive trees.",
                epilog=f"law grammar:\n{LAW_GRAMMAR}\nSARRT_THREADS sets the default --threads.",
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, law=True, sim=False):
        if law:
            sp.add_argument("--law", type=_law, default=parse_law("uniform"), help="attachment law (default uniform)")
        sp.add_argument("--format", choices=("text", "csv", "json"), default="text")
        sp.add_argument("--out", help="write to this file instead of stdout")
        if sim:
            sp.add_argument("--seed", type=_int, default=DEFAULT_SEED, help=f"default {DEFAULT_SEED}")
            sp.add_argument("--threads", type=_int, default=default_threads(),
                            help="worker threads (default $SARRT_THREADS or 1)")

    sp = sub.add_parser("constants", help="1/mu, alpha_max, alpha_min for a law")
    common(sp)
    sp = sub.add_parser("table1", help="constants for max/min of k uniforms, k = 1..kmax")
    common(sp, law=False)
    sp.add_argument("--kmax", type=_int, default=5)
    sp = sub.add_parser("simulate", help="Monte Carlo convergence rows")
    common(sp, sim=True)
    sp.add_argument("--n", type=_int_list, default=[1000, 10_000, 100_000], help="comma-separated node counts")
    sp.add_argument("--trials", type=_int, default=500)
    sp.add_argument("--stats", type=lambda s: s.split(","), default=["d_last", "height", "min_depth"],
                    help=f"comma-separated subset of {','.join(STATISTICS)}")
    sp = sub.add_parser("verify", help="renewal, rotation, path-event and k-DAG checks")
    common(sp, law=False, sim=True)
    sp.add_argument("--n", type=_int, default=100_000)
    sp.add_argument("--trials", type=_int, default=2000)
    sp = sub.add_parser("dag", help="greedy min/max-label root distances in a random k-DAG")
    common(sp, law=False, sim=True)
    sp.add_argument("--n", type=_int, default=100_000)
    sp.add_argument("--k", type=_int, default=2)
    sp.add_argument("--trials", type=_int, default=10)
    sp = sub.add_parser("render", help="SVG drawing of one tree")
    common(sp, sim=True)
    sp.add_argument("--n", type=_int, default=500)
    sp.add_argument("--canvas", type=_int, default=800)
    sp = sub.add_parser("rate", help="Lambda, Lambda* and Psi at given points")
    common(sp)
    sp.add_argument("--z", type=float, nargs="+", default=[], help="points z < 0 for Lambda*(z)")
    sp.add_argument("--lam", type=float, nargs="+", default=[], help="points for Lambda(lam)")
    sp.add_argument("--c", type=float, nargs="+", default=[], help="points c > 0 for Psi(c)")
    return p


# ---------------------------------------------------------------------------


def _table(header, rows, fmt) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows([[format(v, ".17g") if isinstance(v, float) else v for v in r] for r in rows])
        return buf.getvalue()
    return "\n".join("  ".join(str(v) for v in r) for r in [header, *rows]) + "\n"


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _constants(a):
    c = solve_constants(a.law)
    rows = [(a.law.spec(), c.one_over_mu, c.alpha_max, c.alpha_min, c.clt_scale)]
    header = ("law", "one_over_mu", "alpha_max", "alpha_min", "clt_scale")
    if a.format == "text":
        return (f"law        {rows[0][0]}\n1/mu       {c.one_over_mu:.10g}\nalpha_max  {c.alpha_max:.10g}\n"
                f"alpha_min  {c.alpha_min:.10g}\nclt_scale  {c.clt_scale if c.clt_scale is None else f'{c.clt_scale:.10g}'}\n")
    return _table(header, rows, a.format)


def _table1(a):
    rows = table1(a.kmax)
    if a.format == "text":
        return format_table1(rows) + "\n"
    return _table(TABLE1_COLUMNS, rows, a.format)


def _simulate(a):
    plan = ExperimentPlan(a.law, a.n, a.trials, a.seed, a.stats, a.threads)
    rows = run_plan(plan)
    if a.format == "json":
        return json_text(rows)
    if a.format == "csv":
        return csv_text(rows)
    lines = [f"law {plan.law.spec()}  trials {plan.trials}  seed {plan.seed}"]
    for r in rows:
        parts = [f"n={r.n}"]
        for name, s in r.stats.items():
            parts.append(f"{name}: mean {s.mean:.4f} (/log n {s.ratio:.4f}) var {s.variance:.4f}")
        if r.clt is not None:
            parts.append(f"clt: mean {r.clt.mean:.4f} var {r.clt.variance:.4f} skew {r.clt.skewness:.4f} "
                         f"kurt {r.clt.excess_kurtosis:.4f} ks {r.clt.ks:.4f}")
        if r.error:
            parts.append(f"error: {r.error}")
        lines.append("  ".join(parts))
    return "\n".join(lines) + "\n"


def verify_checks(n: int, trials: int, seed: int) -> list[tuple[str, bool, str]]:
    """(name, passed, detail) for each path-level check."""
    out = []
    law = parse_law("uniform")
    keys = np.array([derive_key(seed, n, i) for i in range(trials)], dtype=np.uint64)
    r = renewal_bounds_batch(n, law, keys)
    viol = int(np.count_nonzero(r["d_exact"] > r["d_hat"]))
    frac = float(np.mean(r["d_bar"] <= r["d_exact"]))
    out.append(("renewal sandwich", viol == 0 and frac >= 0.99,
                f"d_exact > d_hat in {viol} trials, d_bar <= d_exact in {frac:.4f}"))

    beta = math.exp(-0.5)
    rc = rotation_inequality_check(law, 10, beta, max(trials * 50, 10_000), seed=seed)
    out.append(("rotation inequality", rc.passed, f"lhs {rc.lhs:.5f} rhs/t {rc.rhs / 10:.5f}"))

    t, c, delta = 12, 2.0, 0.1
    n_event = max(n, math.ceil(t * beta**-t))
    est = path_event_probability("A", n_event, law, t, beta, max(trials * 5, 10_000), seed=seed)
    lo, hi = beta**t / t, beta ** ((psi(RateEvaluator(law), c) - delta) * t)
    ok = est.ci_high >= lo and est.ci_low <= hi
    out.append(("path-event sandwich", ok, f"estimate {est.estimate:.5f} in [{lo:.3g}, {hi:.3g}]"))

    mism = sum(reduction_check(10_000, k, seed + s) for k in (1, 2, 3, 5) for s in range(5))
    out.append(("k-DAG reduction", mism == 0, f"{mism} mismatches"))
    return out


def _verify(a):
    checks = verify_checks(a.n, a.trials, a.seed)
    if a.format == "text":
        text = "".join(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}\n" for name, ok, detail in checks)
    else:
        text = _table(("check", "passed", "detail"), checks, a.format)
    return text, all(ok for _, ok, _ in checks)


def _dag(a):
    rows = []
    for trial in range(a.trials):
        dag = build_kdag(a.n, a.k, RandomStream(a.seed, trial))
        rows.append((trial, *(greedy_distance(dag, a.n, m) for m in MODES)))
    header = ("trial", "r_minus", "r_plus")
    if a.format != "text":
        return _table(header, rows, a.format)
    arr = np.array([r[1:] for r in rows], dtype=float)
    ln = math.log(a.n)
    return (_table(header, rows, "text")
            + f"mean r_minus/log n {arr[:, 0].mean() / ln:.4f}  mean r_plus/log n {arr[:, 1].mean() / ln:.4f}\n")


def _rate(a):
    ev = RateEvaluator(a.law)
    rows = [("Lambda", x, ev.cumulant(x)) for x in a.lam]
    rows += [("Lambda*", z, ev.legendre_dual(z)) for z in a.z]
    rows += [("Psi", c, psi(ev, c)) for c in a.c]
    if a.format == "text":
        return "".join(f"{f}({x:g}) = {v:.12g}\n" for f, x, v in rows)
    return _table(("function", "at", "value"), rows, a.format)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    if getattr(a, "threads", 1) < 1:
        parser.error("--threads must be >= 1")
    try:
        if a.command == "render":
            if not a.out:
                parser.error("render needs --out")
            t = build_depths(a.n, a.law, RandomStream(a.seed, 0), keep_parents=True)
            render_svg(t, RenderSpec(canvas=a.canvas), a.out)
            return EXIT_OK
        if a.command == "verify":
            text, ok = _verify(a)
            _emit(text, a.out)
            return EXIT_OK if ok else EXIT_FAILED
        handler = {"constants": _constants, "table1": _table1, "simulate": _simulate,
                   "dag": _dag, "rate": _rate}[a.command]
        _emit(handler(a), a.out)
    except ValueError as exc:
        parser.error(str(exc))
    return EXIT_OK


def main() -> None:
    sys.exit(run())
