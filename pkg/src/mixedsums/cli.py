"""Configuration-driven experiment runner.

Every module is exposed as a subcommand emitting machine-readable reports
(JSON and RFC-4180 CSV, schema_version tagged).  Identical configurations
produce byte-identical output files: no timestamps or machine identifiers
are written, reductions run in fixed order, and JSON keys are sorted.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import re
import sys
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1


# -- output helpers -----------------------------------------------------------


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_json(obj, path: Path) -> None:
    obj = dict(obj)
    obj["schema_version"] = SCHEMA_VERSION
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n")


def write_csv(rows: list[dict], path: Path) -> None:
    if not rows:
        path.write_text("")
        return
    fieldnames = list(rows[0].keys())
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)


def _emit(args, stem: str, summary: dict | None = None, rows: list[dict] | None = None) -> None:
    out = _out_dir(args)
    fmt = args.format
    if summary is not None and fmt in ("json", "both"):
        write_json(summary, out / f"{stem}.json")
        print(f"wrote {out / (stem + '.json')}")
    if rows is not None and fmt in ("csv", "both"):
        write_csv(rows, out / f"{stem}.csv")
        print(f"wrote {out / (stem + '.csv')}")


# -- argument plumbing ---------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theta", default="sqrt:2", help="angle: sqrt:d, const:pi, const:e, rat:a/q")
    p.add_argument("--bits", type=int, default=256, help="certified precision budget for the angle")
    p.add_argument("--weight", default="bump", choices=("bump", "flat"))
    p.add_argument("--out-dir", default=os.environ.get("MIXEDSUMS_OUTDIR", "."))
    p.add_argument("--format", default="both", choices=("json", "csv", "both"))
    p.add_argument("--threads", type=int, default=os.cpu_count(), help="worker threads for counting sweeps")


def _theta(args):
    from .diophantine import Theta

    return Theta.parse(args.theta, bits=args.bits)


def _weight(args):
    from .weights import WeightFunction

    return WeightFunction.from_name(args.weight)


_XRULE = re.compile(r"^(?:(\d+)\*)?r(?:\^([\d.]+))?(?:/(\d+))?$")


def parse_x_rule(rule: str, r: int) -> int:
    """x from a rule: an integer literal, or [C*]r[^p][/d] (result ceiled)."""
    rule = rule.strip()
    if rule.isdigit():
        return int(rule)
    m = _XRULE.match(rule)
    if not m:
        raise ValueError(f"cannot parse x-rule {rule!r}")
    coef = int(m.group(1) or 1)
    power = float(m.group(2) or 1.0)
    div = int(m.group(3) or 1)
    return math.ceil(coef * r**power / div)


def _r_grid(spec: str) -> list[int]:
    from .arith import is_prime, primes_up_to

    if spec.startswith("primes-up-to:"):
        return [int(p) for p in primes_up_to(int(spec.split(":", 1)[1]))]
    rs = [int(tok) for tok in spec.split(",") if tok.strip()]
    for r in rs:
        if not is_prime(r):
            raise ValueError(f"r = {r} is not prime")
    return rs


def _complex_pair(z: complex) -> list[float]:
    return [z.real, z.imag]


# -- subcommands -----------------------------------------------------------------


def cmd_moments(args) -> int:
    from .arith import PrimeModulus
    from .sums import family_sums, moment_report

    theta, w = _theta(args), _weight(args)
    rows, summaries = [], {}
    for r in _r_grid(args.r_grid):
        pm = PrimeModulus(r)
        for rule in args.x_rule.split(","):
            x = parse_x_rule(rule, r)
            fs = family_sums(pm, x, theta, w)
            mr = moment_report(fs)
            summaries[f"r={r},x={x}"] = mr.to_dict()
            if args.per_character:
                rows.extend(
                    {"r": r, "x": x, "theta": args.theta, "weight": args.weight,
                     "j": j, "re": float(v.real), "im": float(v.imag)}
                    for j, v in enumerate(fs.values)
                )
            else:
                d = mr.to_dict()
                d.update(theta=args.theta, weight=args.weight)
                rows.append(d)
    _emit(args, "moments", {"config": vars_public(args), "moments": summaries}, rows)
    return 0


def cmd_poisson(args) -> int:
    from .arith import PrimeModulus
    from .characters import Character
    from .poisson import DualSetup, dyadic_fourth_moment_bound, poisson_residual, principal_tail

    if not 3 * args.delta + 4 < 4 * args.A:
        print(f"error: --delta/--A must satisfy 3*delta+4 < 4*A "
              f"(got 3*{args.delta}+4 = {3 * args.delta + 4} >= 4*{args.A} = {4 * args.A})", file=sys.stderr)
        return 2
    theta, w = _theta(args), _weight(args)
    pm = PrimeModulus(args.r)
    setup = DualSetup(pm, args.x, theta, delta=args.delta)
    m_max = args.m_max or math.ceil(100 * (2 + pm.r / args.x))
    if args.characters == "all":
        js = range(pm.r - 1)
    else:
        n = int(args.characters)
        js = sorted({round(i * (pm.r - 1) / n) % (pm.r - 1) for i in range(n)})
    residuals = {str(j): poisson_residual(Character(pm, j), setup, w, m_max).residual for j in js}
    tail = principal_tail(setup, w, args.A)
    asm = dyadic_fourth_moment_bound(pm, args.x, theta, w, delta=args.delta, A=args.A, j_max=args.j_max)
    summary = {
        "config": vars_public(args),
        "k": setup.k,
        "theta_prime": setup.theta_prime.mid,
        "m_max": m_max,
        "residuals": residuals,
        "tail": {"abs": abs(tail.tail), "envelope": tail.envelope, "ratio": tail.ratio,
                 "dominant_m": tail.dominant_m},
        "dyadic_levels": [row.to_dict() for row in asm.rows],
        "dyadic_total_bound": asm.total_bound,
        "measured_m4": asm.measured_m4,
    }
    rows = [{"j": j, "residual": res} for j, res in residuals.items()]
    _emit(args, "poisson", summary, rows)
    worst = max(residuals.values())
    print(f"k={setup.k} worst residual {worst:.3e} (tolerance {1e-6 * math.sqrt(args.x):.3e})")
    return 0 if worst <= 1e-6 * math.sqrt(args.x) else 1


def cmd_count(args) -> int:
    from .counting import (
        count_ab_congruence,
        count_quadruple_congruence,
        count_surface_box,
        dyadic_tail_sum,
        hyperbola_class_count,
        pigeonhole_count,
        surface_sweep,
    )
    from .diophantine import reduce_mod_r

    theta = _theta(args)
    rows = []
    kind = args.kind
    if kind == "ab":
        rows.append(count_ab_congruence(args.d, args.q).to_row())
    elif kind == "surface":
        rows.append(count_surface_box(args.S, args.P, args.T, args.box_constant).to_row())
    elif kind == "quadruple":
        k, _ = reduce_mod_r(theta, args.r)
        lo, hi = (int(t) for t in args.interval.split(":"))
        rows.append(count_quadruple_congruence((lo, hi), k, args.r).to_row())
    elif kind == "pigeonhole":
        k, _ = reduce_mod_r(theta, args.r)
        rows.append(pigeonhole_count(args.N, args.M, k, args.r, c=args.c).to_row())
    elif kind == "sweep":
        k, _ = reduce_mod_r(theta, args.r)
        rows.append(surface_sweep(args.T, args.r, k, args.box_constant, args.eps, threads=args.threads).to_row())
    elif kind == "hyperbola":
        count = hyperbola_class_count(args.u, args.v, args.S, args.T, args.P, args.box_constant)
        t_over_s = args.T / args.S
        bound = t_over_s * math.log(2 + t_over_s)
        rows.append({"kind": "hyperbola_class", "u": args.u, "v": args.v, "S": args.S,
                     "T": args.T, "P": args.P, "count": count, "bound": bound,
                     "ratio": count / bound})
    elif kind == "dyadic":
        rep = dyadic_tail_sum(args.s, args.j_max)
        rows.append({"kind": "dyadic_tail", "s": args.s, "j_max": args.j_max,
                     "count": rep.upper, "bound": 4.0 * max(1, args.s), "ratio": rep.ratio})
    _emit(args, f"count_{kind}", {"config": vars_public(args), "rows": rows}, rows)
    return 0


def cmd_dioph(args) -> int:
    from .diophantine import PrecisionError, check_diophantine_floor, resonant_set

    theta = _theta(args)
    summary: dict = {"config": vars_public(args)}
    try:
        cf = theta.continued_fraction(args.depth)
        summary["continued_fraction"] = {"quotients": cf.quotients,
                                         "convergents": [[p, q] for p, q in cf.convergents]}
    except PrecisionError as exc:
        summary["continued_fraction"] = {"error": str(exc)}
    if args.Q:
        fc = check_diophantine_floor(theta, args.C, args.Q)
        summary["floor_check"] = {
            "passed": fc.passed, "C": fc.C, "Q": fc.q_max, "failure_q": fc.failure_q,
            "witness_q": fc.witness_q, "witness_ratio": fc.witness_ratio,
            "indeterminate": fc.indeterminate,
        }
    if args.x:
        rs = resonant_set(theta, args.x, args.eps)
        summary["resonant_set"] = {
            "x": rs.x, "eps": rs.eps, "k_max": rs.k_max, "members": rs.members,
            "min_gap": rs.min_gap, "indeterminate": rs.indeterminate,
        }
    _emit(args, "dioph", summary, None)
    ok = summary.get("floor_check", {}).get("passed", True)
    return 0 if ok else 1


def cmd_shortsum(args) -> int:
    from .shortsum import scale_decomposition

    theta = _theta(args)
    rows = []
    for x in (int(t) for t in args.x_list.split(",")):
        d = scale_decomposition(x, theta)
        rows.append({
            "x": x, "theta": args.theta,
            "offdiag_re": d.offdiag, "offdiag_im": 0.0,
            "case1": d.case1, "case2": d.case2, "case3": d.case3,
            "ratio_to_x2": d.ratio_to_x2,
        })
    _emit(args, "shortsum", {"config": vars_public(args), "rows": rows}, rows)
    return 0


def cmd_dist(args) -> int:
    from .arith import PrimeModulus
    from .sums import distribution_probe

    theta, w = _theta(args), _weight(args)
    rep = distribution_probe(PrimeModulus(args.r), args.x, theta, w)
    _emit(args, "dist", {"config": vars_public(args), "probe": rep.to_dict()}, None)
    print(f"E|Z| = {rep.abs_mean:.4f} (complex-gaussian reference {rep.reference_abs_mean:.4f}), "
          f"E|Z|^4 = {rep.abs_4_mean:.4f}, KS(|Z|^2, Exp(1)) = {rep.ks_exponential:.4f}")
    return 0


def cmd_verify(args) -> int:
    if args.full:
        from .acceptance import run_acceptance

        results = run_acceptance(verbose=True)
        summary = {
            "config": vars_public(args),
            "criteria": [
                {"id": r.cid, "name": r.name, "passed": r.passed, "within_budget": r.within_budget,
                 "expected_failure": r.expected_failure, "details": r.details}
                for r in results
            ],
        }
        _emit(args, "verify_full", summary, None)
        hard_failures = [r for r in results if not r.ok and not r.expected_failure]
        unexpected_pass = [r for r in results if r.ok and r.expected_failure]
        for r in unexpected_pass:
            print(f"note: {r.cid} passed but was expected to fail")
        if args.strict:
            return 0 if not hard_failures and not any(r.expected_failure and not r.ok for r in results) else 1
        return 0 if not hard_failures else 1
    return _verify_identities(args)


def _verify_identities(args) -> int:
    from .arith import PrimeModulus
    from .characters import character_matrix
    from .sums import family_sums, geometric_sum, moment_report

    theta, w = _theta(args), _weight(args)
    pm = PrimeModulus(args.r)
    checks = []

    fs = family_sums(pm, args.x, theta, w)
    mr = moment_report(fs)
    checks.append(("second_moment_identity", mr.second_moment_rel_error < 1e-10,
                   {"rel_error": mr.second_moment_rel_error}))
    if pm.r <= 2048:
        direct = family_sums(pm, args.x, theta, w, method="direct")
        err = float(np.max(np.abs(fs.values - direct.values)))
        checks.append(("dft_vs_direct", err <= 1e-8 * math.sqrt(max(args.x, 1)), {"max_err": err}))
    if pm.r <= 512:
        C = character_matrix(pm)
        err = float(np.max(np.abs(C @ C.conj().T / (pm.r - 1) - np.eye(pm.r - 1))))
        checks.append(("orthogonality", err < 1e-10, {"max_err": err}))
    checks.append(("cauchy_schwarz", mr.abs_moment_1**2 <= mr.moment_2 * (1 + 1e-12), {}))
    holder = mr.abs_moment_1 ** (2 / 3) * mr.moment_4 ** (1 / 3)
    checks.append(("holder_chain", mr.moment_2 <= holder * (1 + 1e-12), {"rhs": holder}))
    g = geometric_sum(100, float(theta))
    checks.append(("geometric_closed_form", g.bound_ratio <= 1.0 + 1e-9, {"ratio": g.bound_ratio}))

    passed = all(ok for _, ok, _ in checks)
    summary = {
        "config": vars_public(args),
        "checks": [{"name": n, "passed": ok, **d} for n, ok, d in checks],
        "passed": passed,
    }
    _emit(args, "verify", summary, None)
    for name, ok, _ in checks:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}")
    return 0 if passed else 1


def cmd_bench(args) -> int:
    from .bench import format_table, run_benchmarks

    rows = run_benchmarks(T=args.T, r=args.r, n4_size=args.n4_size)
    print(format_table(rows))
    _emit(args, "bench", None, rows)
    return 0


def vars_public(args) -> dict:
    skip = {"func", "out_dir", "format", "threads"}
    return {k: v for k, v in vars(args).items() if k not in skip and not k.startswith("_")}


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixedsums",
        description="Mixed character sum experiments: family moments, dual-side identities, congruence counts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="family sums and moment reports over an (r, x) grid")
    _add_common(p)
    p.add_argument("--r-grid", required=True, help="comma list of primes, or primes-up-to:N")
    p.add_argument("--x-rule", default="r/2", help="comma list of rules: int, r, r/2, r^0.6, 2*r^0.5")
    p.add_argument("--per-character", action="store_true", help="CSV rows per character instead of per grid point")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("poisson", help="dual-sum residuals, tail class, dyadic assembly")
    _add_common(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--m-max", type=int, default=None)
    p.add_argument("--A", type=float, default=6.0)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--j-max", type=int, default=8)
    p.add_argument("--characters", default="20", help="number of characters, or 'all'")
    p.set_defaults(func=cmd_poisson)

    p = sub.add_parser("count", help="exact congruence counts against their envelopes")
    _add_common(p)
    p.add_argument("--kind", required=True,
                   choices=("ab", "surface", "quadruple", "pigeonhole", "sweep", "hyperbola", "dyadic"))
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--q", type=int, default=101)
    p.add_argument("--S", type=int, default=1)
    p.add_argument("--P", type=int, default=0)
    p.add_argument("--T", type=int, default=100)
    p.add_argument("--u", type=int, default=1)
    p.add_argument("--v", type=int, default=1)
    p.add_argument("--N", type=int, default=50)
    p.add_argument("--M", type=int, default=100)
    p.add_argument("--r", type=int, default=10007)
    p.add_argument("--c", type=float, default=1 / 3)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--j-max", type=int, default=50_000)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--box-constant", type=float, default=1.0)
    p.add_argument("--interval", default="-4:4", help="lo:hi for the quadruple count")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("dioph", help="continued fractions, approximation floor, resonant set")
    _add_common(p)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--C", type=float, default=0.07)
    p.add_argument("--Q", type=int, default=0, help="scan limit for the floor check (0 skips)")
    p.add_argument("--x", type=float, default=0, help="scale for the resonant set (0 skips)")
    p.add_argument("--eps", type=float, default=0.1)
    p.set_defaults(func=cmd_dioph)

    p = sub.add_parser("shortsum", help="off-diagonal sum diagnostics")
    _add_common(p)
    p.add_argument("--x-list", default="16,64,256")
    p.set_defaults(func=cmd_shortsum)

    p = sub.add_parser("dist", help="family distribution probe")
    _add_common(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("verify", help="identity battery; --full runs the acceptance criteria")
    _add_common(p)
    p.add_argument("--r", type=int, default=101)
    p.add_argument("--x", type=int, default=60)
    p.add_argument("--full", action="store_true")
    p.add_argument("--strict", action="store_true",
                   help="with --full: nonzero exit even for the documented expected failure")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="compare compiled and pure counting kernels")
    _add_common(p)
    p.add_argument("--T", type=int, default=200)
    p.add_argument("--r", type=int, default=1009)
    p.add_argument("--n4-size", type=int, default=1500)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
