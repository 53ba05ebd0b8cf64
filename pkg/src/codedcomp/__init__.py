"""Coded distributed computation with partial recovery.

Tools for straggler-tolerant distributed matrix-vector multiplication where
the master may stop after recovering only a tolerated fraction of the result
blocks: randomized circular-shift code constructions and classical baselines,
a peeling decoder with an exact-elimination oracle, an event-driven straggler
simulator with exact small-system enumeration, and a linear-regression
training harness driven by the simulated iterations.
"""

from .blocks import (
    BlockPartition,
    CodedTask,
    ComputationAssignment,
    CumulativeType,
    DegreeVector,
    Message,
    partition_matrix,
    type_of,
    validate_degree_vector,
)
from .config import (
    DEFAULT_SEED,
    ConfigError,
    ExperimentConfig,
    TrainSettings,
    assignment_source,
    build_assignment,
    concrete_assignment,
    parse_config,
)
from .decoding import (
    PeelingDecoder,
    gc_aggregate,
    mcc_decode_values,
    recovery_threshold,
    rref_recoverable,
)
from .enumeration import (
    all_types,
    completion_cdf,
    enumerate_successful,
    success_table,
    successful_score_vector,
)
from .latency import (
    LatencyModel,
    prob_at_least,
    prob_exactly,
    sample_worker,
    type_probability,
)
from .regression import (
    Dataset,
    centralized_gd,
    generate_dataset,
    gram,
    loss,
    partial_gd_step,
    train,
)
from .schemes import (
    AssignmentMatrix,
    GroupPlan,
    build_gc,
    build_generalized_rcs,
    build_mcc,
    build_rcs,
    build_rcs_assignment,
    build_uc_mmc,
    hybrid_example,
    order_uniform,
    rcs_encode,
    worker_uniform,
)
from .simulate import (
    IterationOutcome,
    MonteCarloResult,
    message_times,
    monte_carlo,
    simulate_iteration,
    trial_rng,
)

__version__ = "0.1.0"

__all__ = [
    "AssignmentMatrix",
    "BlockPartition",
    "CodedTask",
    "ComputationAssignment",
    "ConfigError",
    "CumulativeType",
    "DEFAULT_SEED",
    "Dataset",
    "DegreeVector",
    "ExperimentConfig",
    "GroupPlan",
    "IterationOutcome",
    "LatencyModel",
    "Message",
    "MonteCarloResult",
    "PeelingDecoder",
    "TrainSettings",
    "all_types",
    "assignment_source",
    "build_assignment",
    "build_gc",
    "build_generalized_rcs",
    "build_mcc",
    "build_rcs",
    "build_rcs_assignment",
    "build_uc_mmc",
    "centralized_gd",
    "completion_cdf",
    "concrete_assignment",
    "enumerate_successful",
    "gc_aggregate",
    "generate_dataset",
    "gram",
    "hybrid_example",
    "loss",
    "mcc_decode_values",
    "message_times",
    "monte_carlo",
    "order_uniform",
    "parse_config",
    "partial_gd_step",
    "partition_matrix",
    "prob_at_least",
    "prob_exactly",
    "rcs_encode",
    "recovery_threshold",
    "rref_recoverable",
    "sample_worker",
    "simulate_iteration",
    "success_table",
    "successful_score_vector",
    "train",
    "trial_rng",
    "type_of",
    "type_probability",
    "validate_degree_vector",
    "worker_uniform",
]
