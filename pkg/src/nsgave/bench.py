"""Benchmark tables and the solver-vs-oracle sweep."""

from __future__ import annotations

import csv
import io
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, field, fields, replace

import numpy as np

from .nsna import SolverConfig, Status, solve
from .problems import ExampleSpec, example_gave, random_solvable_gave
from .verify import sign_enumeration_oracle

# Published iteration counts for n = 256, 1024, 2304, 4096, keyed by (family, xi, zeta).
PUBLISHED_ITER = {
    (1, 0.0, 0.0): [5, 5, 6, 6],
    (1, 0.0, 4.0): [5, 6, 7, 7],
    (1, 4.0, 0.0): [3, 3, 3, 3],
    (2, 0.0, 0.0): [4, 5, 6, 6],
    (2, 0.0, 4.0): [6, 7, 7, 8],
    (2, 4.0, 0.0): [3, 3, 3, 3],
}
# Iteration counts of the two monotone smoothing methods the tables compare
# against; reference numbers only, those methods are not implemented here.
BASELINE_ITER = {
    "JZ-MSNA": {
        (1, 0.0, 0.0): [6, 6, 8, 7],
        (1, 0.0, 4.0): [7, 8, 8, 9],
        (1, 4.0, 0.0): [4, 4, 5, 5],
        (2, 0.0, 0.0): [5, 6, 8, 7],
        (2, 0.0, 4.0): [8, 9, 10, 11],
        (2, 4.0, 0.0): [4, 4, 5, 5],
    },
    "TZ-MSNA": {
        (1, 0.0, 0.0): [6, 6, 7, 7],
        (1, 0.0, 4.0): [6, 7, 8, 8],
        (1, 4.0, 0.0): [4, 4, 4, 4],
        (2, 0.0, 0.0): [5, 6, 7, 7],
        (2, 0.0, 4.0): [7, 8, 9, 9],
        (2, 4.0, 0.0): [4, 4, 4, 4],
    },
}
_PUBLISHED_M = [16, 32, 48, 64]


def published_iterations(spec: ExampleSpec) -> int | None:
    row = PUBLISHED_ITER.get((spec.family, float(spec.xi), float(spec.zeta)))
    if row is None or spec.m not in _PUBLISHED_M:
        return None
    return row[_PUBLISHED_M.index(spec.m)]


@dataclass(frozen=True)
class BenchRow:
    method: str
    family: int
    m: int
    n: int
    xi: float
    zeta: float
    status: str
    iterations: int
    cpu: float
    res: float
    published_iter: int | None


@dataclass
class BenchResult:
    row: BenchRow
    report: object = field(repr=False, default=None)


def bench_one(spec: ExampleSpec, cfg: SolverConfig, repeats: int = 1, keep_report: bool = False) -> BenchResult:
    problem = example_gave(spec)
    times = []
    report = None
    for _ in range(max(1, repeats)):
        report = solve(problem, cfg)
        times.append(report.wall_time)
    row = BenchRow(
        method="NSNA-monotone" if cfg.monotone else "NSNA",
        family=spec.family,
        m=spec.m,
        n=spec.n,
        xi=spec.xi,
        zeta=spec.zeta,
        status=str(report.status),
        iterations=report.iterations,
        cpu=statistics.median(times),
        res=report.res,
        published_iter=published_iterations(spec),
    )
    return BenchResult(row, report if keep_report else None)


def _bench_task(args):
    spec, cfg, repeats = args
    return bench_one(spec, cfg, repeats).row


def run_bench(
    specs: list[ExampleSpec],
    cfg: SolverConfig | None = None,
    repeats: int = 3,
    with_monotone: bool = False,
    jobs: int = 1,
) -> list[BenchRow]:
    """Solve every spec from x0 = (2, ..., 2); rows come back in spec order."""
    cfg = cfg or SolverConfig()
    tasks = [(s, cfg, repeats) for s in specs]
    if with_monotone:
        mono = replace(cfg, monotone=True)
        tasks = [t for s in specs for t in ((s, cfg, repeats), (s, mono, repeats))]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_bench_task, tasks))
    return [_bench_task(t) for t in tasks]


def rows_to_csv(rows: list[BenchRow], include_cpu: bool = True) -> str:
    names = [f.name for f in fields(BenchRow)]
    if not include_cpu:
        names.remove("cpu")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for r in rows:
        d = dict(zip([f.name for f in fields(BenchRow)], astuple(r)))
        w.writerow(["" if d[k] is None else (f"{d[k]:.4e}" if k == "res" else d[k]) for k in names])
    return buf.getvalue()


def rows_to_markdown(rows: list[BenchRow], include_cpu: bool = True) -> str:
    head = ["Method", "Example", "xi", "zeta", "n", "Iter", "Published Iter", "Res", "Status"]
    if include_cpu:
        head.insert(6, "Cpu (s)")
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for r in rows:
        cells = [r.method, str(r.family), f"{r.xi:g}", f"{r.zeta:g}", str(r.n), str(r.iterations)]
        if include_cpu:
            cells.append(f"{r.cpu:.4f}")
        cells += ["" if r.published_iter is None else str(r.published_iter), f"{r.res:.4e}", r.status]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


@dataclass
class OracleComparison:
    count: int = 0
    max_deviation: float = 0.0
    mismatches: list[str] = field(default_factory=list)
    oracle_solution_counts: list[int] = field(default_factory=list)
    solver_iterations: list[int] = field(default_factory=list)
    elapsed: float = 0.0
    reports: list = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        if not self.count:
            return "oracle-compare: 0 instances"
        iters = self.solver_iterations
        return (
            f"oracle-compare: {self.count} instances, max relative deviation {self.max_deviation:.3e}, "
            f"mismatches {len(self.mismatches)}, iterations min/max {min(iters)}/{max(iters)}"
        )


def oracle_compare(
    n_min: int,
    n_max: int,
    count: int,
    seed: int,
    cfg: SolverConfig | None = None,
    rtol: float = 1e-6,
    keep_reports: bool = False,
) -> OracleComparison:
    """Solve ``count`` random uniquely solvable instances and diff against the oracle.

    Instance i has dimension ``n_min + i % (n_max - n_min + 1)`` and seed
    ``(seed, i)``.
    """
    cfg = cfg or SolverConfig()
    out = OracleComparison()
    start = time.perf_counter()
    span = n_max - n_min + 1
    for i in range(count):
        n = n_min + i % span
        p = random_solvable_gave(n, (seed, i))
        report = solve(p, cfg)
        oracle = sign_enumeration_oracle(p)
        out.count += 1
        out.oracle_solution_counts.append(oracle.count)
        out.solver_iterations.append(report.iterations)
        if keep_reports:
            out.reports.append(report)
        if report.status is not Status.CONVERGED:
            out.mismatches.append(f"instance {i} (n={n}): solver status {report.status}")
            continue
        if oracle.count != 1:
            out.mismatches.append(f"instance {i} (n={n}): oracle found {oracle.count} solutions")
            continue
        ref = oracle.solutions[0]
        dev = float(np.linalg.norm(report.x - ref) / max(np.linalg.norm(ref), np.finfo(float).tiny))
        out.max_deviation = max(out.max_deviation, dev)
        if dev > rtol:
            out.mismatches.append(f"instance {i} (n={n}): relative deviation {dev:.3e}")
    out.elapsed = time.perf_counter() - start
    return out
