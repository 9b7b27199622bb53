"""Pragmatic information: how much a message moves a decision maker's beliefs, in bits."""

from .dist import (
    CodeLengths,
    Dist,
    Prior,
    convex_mix,
    expected_codelength_gap,
    huffman_code_lengths,
    ideal_code_lengths,
    kl_divergence,
    shannon_code_lengths,
    shannon_entropy,
)
from .errors import (
    ConvergenceError,
    DegenerateDistributionError,
    DimensionMismatchError,
    DistributionError,
    ParseError,
    PragmaticError,
    SchemaError,
    StationaryMismatchError,
    ZeroPriorError,
)
from .pragmatic import (
    DecompositionReport,
    IndependenceReport,
    IndependenceVerdict,
    JointEnsemble,
    MessageEnsemble,
    PartitionReport,
    Usefulness,
    chain_rule_residual,
    check_pragmatic_independence,
    conditional_pragmatic_info,
    decompose,
    definitive_ensemble,
    definitive_upper_bound,
    delta_ensemble,
    delta_prime_ensemble,
    ensemble_pragmatic_info,
    is_pragmatically_definitive,
    joint_pragmatic_info,
    marginal_posterior,
    mutual_information,
    partition_pragmatic_info,
    pragmatic_info_single,
    product_joint_ensemble,
)
from .bandit import (
    BanditState,
    SweepRow,
    laplace_estimate,
    sweep,
    trial_ensemble,
    trial_pragmatic_info,
    windowed_laplace,
)
from .ergodic import MessageSource, Trajectory, sample_trajectory, stationary_distribution

__version__ = "0.1.0"
