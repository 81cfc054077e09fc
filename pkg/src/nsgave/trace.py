"""Per-iteration trace as CSV, plus a validator for emitted files."""

from __future__ import annotations

import csv
import math
import os
from typing import IO, Iterable, Union

from .nsna import IterationRecord

TRACE_COLUMNS = ["k", "mu", "merit", "c_avg", "beta", "alpha", "step_kind", "res", "direction_norm"]

PathOrFile = Union[str, os.PathLike, IO[str]]


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_trace_csv(records: Iterable[IterationRecord], dest: PathOrFile) -> None:
    def _write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for r in records:
            w.writerow([_cell(getattr(r, c)) for c in TRACE_COLUMNS])

    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", newline="", encoding="utf-8") as fh:
            _write(fh)
    else:
        _write(dest)


def _opt_float(s: str) -> float | None:
    return None if s == "" else float(s)


def read_trace_csv(src: PathOrFile) -> list[IterationRecord]:
    def _read(fh):
        reader = csv.DictReader(fh)
        if reader.fieldnames != TRACE_COLUMNS:
            raise ValueError(f"unexpected trace header {reader.fieldnames}")
        return [
            IterationRecord(
                k=int(row["k"]),
                mu=float(row["mu"]),
                merit=float(row["merit"]),
                c_avg=float(row["c_avg"]),
                beta=float(row["beta"]),
                alpha=_opt_float(row["alpha"]),
                step_kind=row["step_kind"],
                res=float(row["res"]),
                direction_norm=_opt_float(row["direction_norm"]),
            )
            for row in reader
        ]

    if isinstance(src, (str, os.PathLike)):
        with open(src, newline="", encoding="utf-8") as fh:
            return _read(fh)
    return _read(src)


def check_trace(records: list[IterationRecord], delta: float | None = None) -> list[str]:
    """Re-validate the solver invariants row by row; returns human-readable violations.

    Checked: mu > 0, beta < mu, merit <= C, constant beta/C ratio, strictly
    decreasing C and mu, step lengths in (0, 1] (and powers of ``delta`` for
    line-search steps when ``delta`` is given), and the mu update rule.
    """
    problems: list[str] = []
    gamma = None
    for i, r in enumerate(records):
        tag = f"row k={r.k}"
        if r.k != i:
            problems.append(f"{tag}: expected k={i}")
        if not r.mu > 0:
            problems.append(f"{tag}: mu={r.mu!r} not positive")
        if not r.beta < r.mu:
            problems.append(f"{tag}: beta={r.beta!r} >= mu={r.mu!r}")
        if not r.merit <= r.c_avg:
            problems.append(f"{tag}: merit={r.merit!r} > C={r.c_avg!r}")
        if r.c_avg > 0:
            g = r.beta / r.c_avg
            if gamma is None:
                gamma = g
            elif not math.isclose(g, gamma, rel_tol=1e-12):
                problems.append(f"{tag}: beta/C={g!r} differs from gamma={gamma!r}")
        if r.step_kind == "stop":
            if i != len(records) - 1:
                problems.append(f"{tag}: 'stop' row before the end of the trace")
            continue
        if r.step_kind not in ("full", "line_search"):
            problems.append(f"{tag}: unknown step kind {r.step_kind!r}")
            continue
        if r.alpha is None or not 0 < r.alpha <= 1:
            problems.append(f"{tag}: alpha={r.alpha!r} outside (0, 1]")
            continue
        if r.step_kind == "full" and r.alpha != 1.0:
            problems.append(f"{tag}: full step with alpha={r.alpha!r}")
        if r.step_kind == "line_search" and delta is not None:
            l = round(math.log(r.alpha) / math.log(delta))
            if not math.isclose(delta**l, r.alpha, rel_tol=1e-12):
                problems.append(f"{tag}: alpha={r.alpha!r} is not a power of delta={delta}")
        if i + 1 < len(records):
            nxt = records[i + 1]
            if not nxt.c_avg < r.c_avg:
                problems.append(f"{tag}: C does not decrease ({r.c_avg!r} -> {nxt.c_avg!r})")
            if not nxt.mu < r.mu:
                problems.append(f"{tag}: mu does not decrease ({r.mu!r} -> {nxt.mu!r})")
            expected = (1.0 - r.alpha) * r.mu + r.alpha * r.beta
            if not math.isclose(nxt.mu, expected, rel_tol=1e-14, abs_tol=0.0):
                problems.append(f"{tag}: mu update {nxt.mu!r} != (1-alpha)mu + alpha*beta = {expected!r}")
    return problems
