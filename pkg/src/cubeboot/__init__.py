"""Bootstrap percolation on hypercubes.

Simulation of the r-neighbor infection process on Q_n and the generalized
cube Q_{k,n}, with relaxed first-step schedules, Monte Carlo estimation of
the critical probability under an exact monotone coupling, distance
partitions and hypergraph 1-factorizations, and verified tail bounds.
"""

__version__ = "0.1.0"

from .cube import (
    CubeSpec,
    VertexSet,
    degree,
    hamming,
    infected_neighbor_counts,
    neighbors,
    sphere,
)
from .engine import (
    ThresholdSchedule,
    Trace,
    make_schedule,
    run_to_fixpoint,
    step,
    trace_dominates,
)
from .partition import (
    Factorization,
    Partition,
    baranyai,
    distance_partition,
    format_factorization,
    parse_factorization,
    sphere_partition,
    verify_factorization,
)
from .bounds import (
    WeightedBinomialSpec,
    chernoff_bound,
    exact_binom_tail,
    fkg_exact_check,
    independence_check,
    normal_upper_tail,
    small_p_tail_bound,
    weighted_binom_tail_bound,
    weighted_binom_tail_exact,
)
from .estimator import (
    PcEstimate,
    PercProbEstimate,
    TrialPlan,
    estimate_pc,
    exact_percolation_probability,
    percolation_probability,
    sample_initial,
    stabilization_profile,
    wilson_interval,
)

__all__ = [
    "CubeSpec", "VertexSet", "hamming", "degree", "neighbors", "sphere",
    "infected_neighbor_counts",
    "ThresholdSchedule", "Trace", "make_schedule", "step", "run_to_fixpoint",
    "trace_dominates",
    "Partition", "Factorization", "distance_partition", "sphere_partition",
    "baranyai", "verify_factorization", "format_factorization",
    "parse_factorization",
    "WeightedBinomialSpec", "chernoff_bound", "exact_binom_tail",
    "small_p_tail_bound", "weighted_binom_tail_bound",
    "weighted_binom_tail_exact", "normal_upper_tail", "fkg_exact_check",
    "independence_check",
    "TrialPlan", "PercProbEstimate", "PcEstimate", "sample_initial",
    "percolation_probability", "exact_percolation_probability", "estimate_pc",
    "stabilization_profile", "wilson_interval",
]
