"""Adaptive fiber sampler: discover nonnegative integer solutions of Ax = u
by Skellam-distributed combinations of a lattice kernel basis, with
conjugate Gamma-Poisson updates biasing draws toward productive directions."""

from .distributions import (
    GammaParams,
    RateVector,
    poisson_draw,
    posterior_update,
    sample_coefficient_vector,
    skellam_pmf,
    skellam_pmf_partials,
)
from .intlinalg import (
    IntegerOverflowError,
    IntMatrix,
    LatticeBasis,
    hermite_normal_form,
    kernel_lattice_basis,
    mat_vec,
    rank,
)
from .models import (
    ModelInstance,
    ak_fiber_size,
    ak_model,
    ds98_instance,
    independence_model,
    no3way_model,
    sparse_table,
)
from .oracle import enumerate_fiber, verify_subset
from .sampler import FiberStore, RunConfig, RunMetrics, rumba, sample_loop, select_next, update_loop

__version__ = "0.1.0"

__all__ = [
    "GammaParams", "RateVector", "poisson_draw", "posterior_update",
    "sample_coefficient_vector", "skellam_pmf", "skellam_pmf_partials",
    "IntegerOverflowError", "IntMatrix", "LatticeBasis",
    "hermite_normal_form", "kernel_lattice_basis", "mat_vec", "rank",
    "ModelInstance", "ak_fiber_size", "ak_model", "ds98_instance",
    "independence_model", "no3way_model", "sparse_table",
    "enumerate_fiber", "verify_subset",
    "FiberStore", "RunConfig", "RunMetrics", "rumba",
    "sample_loop", "select_next", "update_loop",
]
