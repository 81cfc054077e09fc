"""Plain-text problem files.

Layout (whitespace separated, ``#`` starts a comment, blank lines ignored)::

    gave n
    <n rows of A>
    <n rows of B>
    <one row: b>

``hlcp n`` files hold M, N and q in the same way. Floats are written with
``repr`` so a write/read round trip is bit-exact.
"""

from __future__ import annotations

import io as _io
import os
from typing import IO, Union

import numpy as np

from .core import GaveProblem, HlcpProblem
from .errors import ProblemFormatError

PathOrFile = Union[str, os.PathLike, IO[str]]


def _fmt_row(row) -> str:
    return " ".join(repr(float(v)) for v in row)


def dumps(problem: GaveProblem | HlcpProblem) -> str:
    if isinstance(problem, GaveProblem):
        kind, blocks, vec = "gave", (problem.a, problem.b_mat), problem.rhs
    elif isinstance(problem, HlcpProblem):
        kind, blocks, vec = "hlcp", (problem.m_mat, problem.n_mat), problem.q
    else:
        raise TypeError(f"cannot serialize {type(problem).__name__}")
    lines = [f"{kind} {vec.shape[0]}"]
    for mat in blocks:
        lines.extend(_fmt_row(r) for r in mat)
    lines.append(_fmt_row(vec))
    return "\n".join(lines) + "\n"


def loads(text: str) -> GaveProblem | HlcpProblem:
    rows: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            rows.append((lineno, body.split()))
    if not rows:
        raise ProblemFormatError("empty problem file", 1)

    lineno, header = rows[0]
    if len(header) != 2 or header[0] not in ("gave", "hlcp"):
        raise ProblemFormatError(f"expected header 'gave n' or 'hlcp n', got {' '.join(header)!r}", lineno)
    kind = header[0]
    try:
        n = int(header[1])
    except ValueError:
        raise ProblemFormatError(f"dimension {header[1]!r} is not an integer", lineno) from None
    if n < 1:
        raise ProblemFormatError(f"dimension must be positive, got {n}", lineno)

    body = rows[1:]
    expected = 2 * n + 1
    if len(body) != expected:
        last = body[-1][0] if body else lineno
        raise ProblemFormatError(f"expected {expected} data rows after the header, found {len(body)}", last)

    values = np.empty((expected, n))
    for i, (ln, tokens) in enumerate(body):
        if len(tokens) != n:
            raise ProblemFormatError(f"expected {n} values, found {len(tokens)}", ln)
        try:
            values[i] = [float(t) for t in tokens]
        except ValueError as exc:
            raise ProblemFormatError(str(exc), ln) from None
        if not np.all(np.isfinite(values[i])):
            raise ProblemFormatError("non-finite value", ln)

    first, second, vec = values[:n], values[n : 2 * n], values[2 * n]
    try:
        if kind == "gave":
            return GaveProblem(first, second, vec)
        return HlcpProblem(first, second, vec)
    except ValueError as exc:
        raise ProblemFormatError(str(exc), lineno) from None


def write_problem(problem: GaveProblem | HlcpProblem, dest: PathOrFile) -> None:
    text = dumps(problem)
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        dest.write(text)


def read_problem(src: PathOrFile) -> GaveProblem | HlcpProblem:
    if isinstance(src, (str, os.PathLike)):
        with open(src, encoding="utf-8") as fh:
            return loads(fh.read())
    if isinstance(src, _io.TextIOBase) or hasattr(src, "read"):
        return loads(src.read())
    raise TypeError(f"cannot read a problem from {type(src).__name__}")
