"""Cascade clock recovery toolkit.

Simulates discrete-time spreading cascades on random graphs, applies
stretch distortion to their observation timelines, and recovers the
sampling clock with a greedy expectation-matching estimator and an
exact-likelihood dynamic-programming baseline, plus a reproducible
experiment harness.
"""

from .cascade import (
    CascadeParams,
    InfectionSequence,
    expected_next,
    frontier,
    load_sequence,
    log_likelihood_step,
    sample_next_step,
    save_sequence,
    simulate_ic,
    simulate_lt,
)
from .clockwork import (
    Clock,
    ObservedSequence,
    aggregate,
    distance,
    distance_bruteforce,
    is_consistent,
    load_clock,
    load_observed,
    save_clock,
    save_observed,
    stretch_distort,
)
from .estimators import (
    DPResult,
    EstimationInput,
    ExhaustiveLikelihoodEstimator,
    FastClockEstimator,
    LikelihoodDPEstimator,
    dp_mlp,
    exhaustive_best,
    fastclock,
)
from .exceptions import ConfigError, GraphFileError, InitialSetMismatchError
from .experiments import (
    ERGraphSpec,
    SBMGraphSpec,
    SweepRow,
    TrialConfig,
    TrialResult,
    run_trial,
    sweep,
    write_results,
)
from .graph import (
    Graph,
    degree_into,
    generate_er,
    generate_sbm,
    load_graph,
    neighborhood,
    save_graph,
)

__version__ = "0.1.0"

__all__ = [
    "CascadeParams",
    "Clock",
    "ConfigError",
    "DPResult",
    "ERGraphSpec",
    "EstimationInput",
    "ExhaustiveLikelihoodEstimator",
    "FastClockEstimator",
    "Graph",
    "GraphFileError",
    "InfectionSequence",
    "InitialSetMismatchError",
    "LikelihoodDPEstimator",
    "ObservedSequence",
    "SBMGraphSpec",
    "SweepRow",
    "TrialConfig",
    "TrialResult",
    "aggregate",
    "degree_into",
    "distance",
    "distance_bruteforce",
    "dp_mlp",
    "exhaustive_best",
    "expected_next",
    "fastclock",
    "frontier",
    "generate_er",
    "generate_sbm",
    "is_consistent",
    "load_clock",
    "load_graph",
    "load_observed",
    "load_sequence",
    "log_likelihood_step",
    "neighborhood",
    "run_trial",
    "sample_next_step",
    "save_clock",
    "save_graph",
    "save_observed",
    "save_sequence",
    "simulate_ic",
    "simulate_lt",
    "stretch_distort",
    "sweep",
    "write_results",
    "__version__",
]
