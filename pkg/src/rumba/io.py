"""Text formats for matrices, vectors, and fiber dumps.

Matrix files: a header line ``N M`` followed by N lines of M
whitespace-separated signed integers.  Vector files: one line of
whitespace-separated integers.  Lines starting with ``#`` are comments.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .intlinalg import IntMatrix


def _content_lines(path) -> list[str]:
    lines = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    return lines


def read_matrix(path) -> IntMatrix:
    lines = _content_lines(path)
    if not lines:
        raise ValueError(f"{path}: empty matrix file")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"{path}: expected 'N M' header, got {lines[0]!r}")
    n, m = int(header[0]), int(header[1])
    if len(lines) != n + 1:
        raise ValueError(f"{path}: expected {n} data rows, found {len(lines) - 1}")
    rows = []
    for line in lines[1:]:
        vals = [int(v) for v in line.split()]
        if len(vals) != m:
            raise ValueError(f"{path}: row has {len(vals)} entries, expected {m}")
        rows.append(vals)
    return IntMatrix(np.array(rows, dtype=np.int64))


def write_matrix(path, a: IntMatrix, comment: str | None = None) -> None:
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"{a.rows} {a.cols}")
    for row in a.data:
        lines.append(" ".join(str(int(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_vector(path) -> np.ndarray:
    lines = _content_lines(path)
    if not lines:
        raise ValueError(f"{path}: empty vector file")
    vals = []
    for line in lines:
        vals.extend(int(v) for v in line.split())
    return np.array(vals, dtype=np.int64)


def write_vector(path, v, comment: str | None = None) -> None:
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(" ".join(str(int(x)) for x in np.asarray(v).ravel()))
    Path(path).write_text("\n".join(lines) + "\n")


def write_fiber_dump(path, elements, num_vars: int, seed) -> None:
    """One fiber element per line; header records dimension, count, seed."""
    lines = [f"# M={num_vars} count={len(elements)} seed={seed}"]
    for x in elements:
        lines.append(" ".join(str(int(v)) for v in x))
    Path(path).write_text("\n".join(lines) + "\n")


def read_fiber_dump(path) -> list[np.ndarray]:
    return [np.array([int(v) for v in line.split()], dtype=np.int64)
            for line in _content_lines(path)]
