"""Cycle-weighted interchange process on the complete graph."""

from ._cwip import (
    CrossConfig,
    analytic_two_point_n2,
    cli,
    colour,
    cycle_count,
    cycles,
    gw_survival,
    heisenberg_correlation,
    insert_delta_cycles,
    largest_cycle_experiment,
    loop_lengths,
    mcmc_sample,
    pd1_largest_part_mean,
    pd1_largest_part_reference,
    permutation,
    rejection_sample,
    sample_crosses,
)

__all__ = [
    "CrossConfig",
    "analytic_two_point_n2",
    "cli",
    "colour",
    "cycle_count",
    "cycles",
    "gw_survival",
    "heisenberg_correlation",
    "insert_delta_cycles",
    "largest_cycle_experiment",
    "loop_lengths",
    "mcmc_sample",
    "pd1_largest_part_mean",
    "pd1_largest_part_reference",
    "permutation",
    "rejection_sample",
    "sample_crosses",
]
