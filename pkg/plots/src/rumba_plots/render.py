"""Four-panel diagnostic figure: one row per run.

Panel order (left to right): samples landing in the fiber per iteration,
new points per iteration, cumulative unique elements, new points per step.
Iteration-level panels are colored by step with a sequential colormap.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib import cm

from .metrics import MetricsFrame

PANEL_TITLES = ("samples in fiber / iteration", "new points / iteration",
                "cumulative unique", "new points / step")


def _scatter_by_step(ax, frame: MetricsFrame, values: np.ndarray, colors) -> None:
    row_index = np.arange(len(frame))
    steps = np.unique(frame.step)
    for t, color in zip(steps, colors):
        mask = frame.step == t
        ax.scatter(row_index[mask], values[mask], s=8, color=color)


def render_four_panel(frames: list[MetricsFrame], title: str | None = None):
    """Build (but do not save) the figure; one row of four panels per frame."""
    if not frames:
        raise ValueError("no metrics frames to render")
    n = len(frames)
    fig, axes = plt.subplots(n, 4, figsize=(16, 3.2 * n), squeeze=False)
    for row, frame in enumerate(frames):
        steps = np.unique(frame.step)
        colors = cm.viridis(np.linspace(0.0, 0.92, len(steps)))
        ax_fiber, ax_new, ax_cum, ax_step = axes[row]

        _scatter_by_step(ax_fiber, frame, frame.samples_in_fiber, colors)
        _scatter_by_step(ax_new, frame, frame.new_points, colors)

        # Panel 3 plots the cumulative_unique column as-is: no smoothing,
        # no resampling (asserted at value level by the test suite).
        ax_cum.plot(np.arange(len(frame)), frame.cumulative_unique,
                    color="tab:blue", label="cumulative_unique")

        step_ids, step_new = frame.per_step_new()
        ax_step.bar(step_ids, step_new,
                    color=colors if len(colors) == len(step_ids) else "tab:blue")

        for ax, panel_title in zip(axes[row], PANEL_TITLES):
            if row == 0:
                ax.set_title(panel_title, fontsize=10)
        ax_fiber.set_ylabel(frame.label, fontsize=9)
        ax_fiber.set_ylim(bottom=0)
        ax_step.set_xlabel("step")
        ax_cum.set_xlabel("iteration index")
        ax_new.set_xlabel("iteration index")
        ax_fiber.set_xlabel("iteration index")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    return fig


def save_figure(fig, path) -> None:
    fig.savefig(path, dpi=100)
    plt.close(fig)
