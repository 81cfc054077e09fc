"""``nsgave`` command line: bench, solve, verify, oracle-compare.

Exit codes: 0 success, 2 non-convergence, 3 input error, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import sys

from . import io as problem_io
from .bench import oracle_compare, rows_to_csv, rows_to_markdown, run_bench
from .core import GaveProblem, HlcpProblem, gave_solution_to_hlcp, hlcp_residual, hlcp_to_gave
from .errors import GaveError, InvalidConfig, ProblemFormatError
from .nsna import DEFAULT_GAMMA_RULE, SolverConfig, Status, solve
from .problems import TABLE_BLOCK_DIMS, TABLE_CELLS, ExampleSpec, example_hlcp, random_solvable_gave
from .trace import check_trace, read_trace_csv, write_trace_csv
from .verify import (
    MAX_ORACLE_DIM,
    MAX_SWEEP_DIM,
    bd_nonsingularity_sample,
    gave_w_property,
    sigma_sufficient_condition,
    sign_enumeration_oracle,
)

EXIT_OK = 0
EXIT_NOT_CONVERGED = 2
EXIT_INPUT = 3
EXIT_INVARIANT = 4


def _gamma(value: str):
    if value == DEFAULT_GAMMA_RULE:
        return DEFAULT_GAMMA_RULE
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--gamma takes a number or '{DEFAULT_GAMMA_RULE}'") from None


def _solver_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("solver")
    g.add_argument("--tol", type=float, default=1e-7)
    g.add_argument("--max-iter", type=int, default=100)
    g.add_argument("--theta", type=float, default=0.2)
    g.add_argument("--delta", type=float, default=0.8)
    g.add_argument("--mu0", type=float, default=0.01)
    g.add_argument("--gamma", type=_gamma, default=DEFAULT_GAMMA_RULE, help="number in (0,1) or 'paper'")
    g.add_argument("--monotone", action="store_true", help="compare against M(z) instead of C in the line search")


def _output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("md", "csv"), default="md")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)


def _instance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("problem", nargs="?", help="problem file ('gave n' or 'hlcp n' text format)")
    p.add_argument("--example", type=int, choices=(1, 2))
    p.add_argument("--m", type=int, default=16, help="block dimension, n = m^2")
    p.add_argument("--xi", type=float, default=0.0)
    p.add_argument("--zeta", type=float, default=0.0)
    p.add_argument("--random-n", type=int)
    p.add_argument("--export", help="write the instance to this file before running")


def _config(args) -> SolverConfig:
    return SolverConfig(
        theta=args.theta,
        delta=args.delta,
        mu0=args.mu0,
        gamma=args.gamma,
        tol=args.tol,
        max_iter=args.max_iter,
        monotone=args.monotone,
    )


def _load_instance(args) -> GaveProblem | HlcpProblem:
    chosen = sum(x is not None for x in (args.problem, args.example, args.random_n))
    if chosen != 1:
        raise InvalidConfig("give exactly one of: a problem file, --example, --random-n")
    if args.problem is not None:
        try:
            inst = problem_io.read_problem(args.problem)
        except OSError as exc:
            raise ProblemFormatError(f"{args.problem}: {exc.strerror}") from None
    elif args.example is not None:
        inst = example_hlcp(ExampleSpec(args.example, args.m, args.xi, args.zeta))
    else:
        inst = random_solvable_gave(args.random_n, args.seed)
    if args.export:
        problem_io.write_problem(inst, args.export)
    return inst


def _as_gave(inst) -> GaveProblem:
    return hlcp_to_gave(inst) if isinstance(inst, HlcpProblem) else inst


def _emit_kv(rows: list[tuple[str, object]], fmt: str, out) -> None:
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["check", "value"])
        w.writerows(rows)
    else:
        width = max(len(k) for k, _ in rows)
        for k, v in rows:
            out.write(f"{k.ljust(width)} : {v}\n")


def cmd_bench(args, out) -> int:
    families = [args.example] if args.example else [1, 2]
    if args.xi is not None or args.zeta is not None:
        cells = [(f, args.xi or 0.0, args.zeta or 0.0) for f in families]
    else:
        cells = [c for c in TABLE_CELLS if c[0] in families]
    dims = args.m or TABLE_BLOCK_DIMS
    specs = [ExampleSpec(f, m, xi, zeta) for f, xi, zeta in cells for m in dims]
    rows = run_bench(specs, _config(args), repeats=args.repeats, with_monotone=args.with_monotone, jobs=args.jobs)
    render = rows_to_csv if args.format == "csv" else rows_to_markdown
    text = render(rows, include_cpu=not args.no_cpu)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    out.write(text)
    return EXIT_OK if all(r.status == str(Status.CONVERGED) for r in rows) else EXIT_NOT_CONVERGED


def cmd_solve(args, out) -> int:
    inst = _load_instance(args)
    cfg = _config(args)
    report = solve(_as_gave(inst), cfg)
    rows: list[tuple[str, object]] = [
        ("status", report.status),
        ("iterations", report.iterations),
        ("res", f"{report.res:.6e}"),
        ("mu", f"{report.mu:.6e}"),
        ("gamma", f"{report.gamma:.6e}"),
        ("time", f"{report.wall_time:.4f}s"),
    ]
    if isinstance(inst, HlcpProblem):
        rows.append(("hlcp_res", f"{hlcp_residual(inst, gave_solution_to_hlcp(report.x)):.6e}"))
    if report.violation:
        rows.append(("violation", report.violation))
    if args.trace:
        write_trace_csv(report.trace, args.trace)
        rows.append(("trace", args.trace))
        if args.check:
            problems = check_trace(read_trace_csv(args.trace), delta=cfg.delta)
            rows.append(("trace_check", "ok" if not problems else f"{len(problems)} violations"))
            for msg in problems:
                rows.append(("trace_violation", msg))
            if problems:
                _emit_kv(rows, args.format, out)
                return EXIT_INVARIANT
    if args.solution:
        with open(args.solution, "w", encoding="utf-8") as fh:
            fh.write("\n".join(repr(float(v)) for v in report.x) + "\n")
    _emit_kv(rows, args.format, out)
    if report.status is Status.INVARIANT_VIOLATION:
        return EXIT_INVARIANT
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_verify(args, out) -> int:
    inst = _load_instance(args)
    p = _as_gave(inst)
    rows: list[tuple[str, object]] = [("n", p.n)]
    if p.n <= MAX_SWEEP_DIM:
        w = gave_w_property(p.a, p.b_mat)
        rows.append(("w_property", "yes" if w.holds else "no"))
        rows.append(("w_representatives", w.n_representatives))
        if not w.holds:
            # vertex d of the failing representative: '+' takes A+B's column, '-' takes A-B's
            rows.append(("w_witness", "".join("-" if c else "+" for c in w.witness)))
    else:
        rows.append(("w_property", f"skipped (exact sweep limited to n <= {MAX_SWEEP_DIM})"))
    bd = bd_nonsingularity_sample(p.a, p.b_mat, samples=args.samples, seed=args.seed)
    rows.append(("bd_sample", "singular witness found" if bd.singular else "no singular witness"))
    if bd.singular:
        rows.append(("bd_witness", " ".join(f"{v:.6g}" for v in bd.witness)))
    rows.append(("bd_samples", bd.samples))
    rows.append(("bd_margin", f"{bd.margin:.6e}"))
    sig = sigma_sufficient_condition(p.a, p.b_mat)
    rows.append(("sigma_condition", "yes" if sig.holds else "no"))
    rows.append(("sigma_min_a", f"{sig.sigma_min_a:.10g}"))
    rows.append(("sigma_max_b", f"{sig.sigma_max_b:.10g}"))
    rows.append(("sigma_margin", f"{sig.margin:.6e}"))
    if p.n <= MAX_ORACLE_DIM:
        orc = sign_enumeration_oracle(p)
        rows.append(("oracle_solutions", orc.count))
    _emit_kv(rows, args.format, out)
    return EXIT_OK


def _n_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    try:
        lo_i, hi_i = int(lo), int(hi or lo)
    except ValueError:
        raise argparse.ArgumentTypeError("--n takes N or LO:HI") from None
    if not 1 <= lo_i <= hi_i <= 12:
        raise argparse.ArgumentTypeError("--n must satisfy 1 <= LO <= HI <= 12")
    return lo_i, hi_i


def cmd_oracle_compare(args, out) -> int:
    lo, hi = args.n
    res = oracle_compare(lo, hi, args.count, args.seed, _config(args))
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["instances", "max_relative_deviation", "mismatches"])
        w.writerow([res.count, f"{res.max_deviation:.6e}", len(res.mismatches)])
    else:
        out.write(res.summary() + "\n")
    for m in res.mismatches:
        out.write(f"mismatch: {m}\n")
    return EXIT_OK if res.ok else EXIT_NOT_CONVERGED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nsgave", description="Smoothing Newton solver for A x + B|x| = b")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bench", help="reproduce the benchmark tables")
    p.add_argument("--example", type=int, choices=(1, 2))
    p.add_argument("--m", type=int, action="append", help="block dimension (repeatable)")
    p.add_argument("--xi", type=float)
    p.add_argument("--zeta", type=float)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--with-monotone", action="store_true", help="add monotone-mode rows")
    p.add_argument("--no-cpu", action="store_true", help="omit timing columns (byte-deterministic output)")
    p.add_argument("--output")
    _solver_flags(p)
    _output_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("solve", help="solve one instance")
    _instance_flags(p)
    _solver_flags(p)
    _output_flags(p)
    p.add_argument("--trace", help="write the per-iteration trace as CSV")
    p.add_argument("--check", action="store_true", help="re-validate the written trace")
    p.add_argument("--solution", help="write x, one value per line")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="solvability checks")
    _instance_flags(p)
    _output_flags(p)
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle-compare", help="solver vs. sign enumeration on random instances")
    p.add_argument("--n", type=_n_range, default=(2, 10), help="N or LO:HI (max 12)")
    p.add_argument("--count", type=int, default=200)
    _solver_flags(p)
    _output_flags(p)
    p.set_defaults(func=cmd_oracle_compare)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (GaveError, ValueError, OSError) as exc:
        sys.stderr.write(f"nsgave: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
