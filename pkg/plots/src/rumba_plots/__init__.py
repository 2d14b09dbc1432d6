"""Diagnostic figures for fiber-sampler metrics files.

Consumes only the metrics.csv contract (columns step, iteration,
samples_in_fiber, new_points, cumulative_unique, step_new_so_far,
elapsed_ms); never imports the sampler package.
"""

from .metrics import MetricsFrame, SchemaError
from .render import render_four_panel

__version__ = "0.1.0"

__all__ = ["MetricsFrame", "SchemaError", "render_four_panel"]
