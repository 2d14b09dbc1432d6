"""Typed loading and validation of sampler metrics files."""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SCHEMA = ("step", "iteration", "samples_in_fiber", "new_points",
          "cumulative_unique", "step_new_so_far", "elapsed_ms")


class SchemaError(ValueError):
    """The file's columns do not match the metrics schema."""


@dataclass(frozen=True)
class MetricsFrame:
    """One run's per-(step, iteration) counters."""

    label: str
    step: np.ndarray
    iteration: np.ndarray
    samples_in_fiber: np.ndarray
    new_points: np.ndarray
    cumulative_unique: np.ndarray
    step_new_so_far: np.ndarray
    elapsed_ms: np.ndarray

    def __len__(self) -> int:
        return len(self.step)

    def per_step_new(self) -> tuple[np.ndarray, np.ndarray]:
        """(steps, new-point totals), one entry per step."""
        steps = np.unique(self.step)
        totals = np.array([self.new_points[self.step == t].sum() for t in steps])
        return steps, totals

    def per_step_cumulative(self) -> tuple[np.ndarray, np.ndarray]:
        """(steps, cumulative unique after each step's last iteration)."""
        steps = np.unique(self.step)
        finals = np.array([self.cumulative_unique[self.step == t][-1] for t in steps])
        return steps, finals

    @staticmethod
    def load(path) -> "MetricsFrame":
        path = Path(path)
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError(f"{path}: empty file") from None
            if tuple(header) != SCHEMA:
                missing = set(SCHEMA) - set(header)
                extra = set(header) - set(SCHEMA)
                raise SchemaError(
                    f"{path}: column mismatch (missing {sorted(missing)}, "
                    f"unexpected {sorted(extra)})")
            rows = [row for row in reader if row]
        if not rows:
            raise SchemaError(f"{path}: no data rows")
        cols = list(zip(*rows))
        ints = {name: np.array([int(v) for v in cols[i]])
                for i, name in enumerate(SCHEMA[:-1])}
        elapsed = np.array([float(v) for v in cols[-1]])
        frame = MetricsFrame(label=path.stem, elapsed_ms=elapsed, **ints)
        diffs = np.diff(frame.cumulative_unique)
        if np.any(diffs < 0):
            warnings.warn(f"{path}: cumulative_unique decreases at row "
                          f"{int(np.argmax(diffs < 0)) + 1}", stacklevel=2)
        return frame
