"""cycalign: joint alignment of cyclic labels from a faulty oracle.

Recovers n labels in {0, ..., k-1}, up to a global cyclic shift, from
noisy pairwise-difference queries that are correct with probability
1/k + delta and uniformly wrong otherwise. The recovery is a
non-adaptive seed-and-vote scheme using O(n log n / (k delta^2))
queries; companion modules provide exact small-instance maximum
likelihood, tail-probability evaluators, and a seeded experiment
harness.
"""

from .core import (
    DegenerateGridError,
    DegenerateLikelihoodError,
    DimensionMismatchError,
    IdentityPairError,
    InstanceTooLargeError,
    Labeling,
    MissingPairError,
    NoiseParams,
    QueryPlan,
    QueryTranscript,
    RegimeMixingError,
    RepeatQueryError,
    canonical_pair,
    lookup_oriented,
    shift_labeling,
)
from .oracle import FaultyOracle, noise_from_uniform, sample_noise
from .recovery import (
    RecoveryResult,
    SeedConfig,
    ValidityRegimeWarning,
    align_seed,
    effective_bias,
    estimate_pairwise_diff,
    extend_labels,
    plurality,
    recover_from_transcript,
    run_algorithm1,
    seed_rest_plan,
    seed_size,
    validity_threshold,
)
from .analysis import (
    LikelihoodSplit,
    TailEstimate,
    TailFit,
    TailSpec,
    brute_force_mle,
    fit_tail_exponent,
    hamming_after_best_shift,
    likelihood_split,
    log_likelihood,
    recover_success,
    tail_predictor,
    tail_probability_exact,
    tail_probability_mc,
    tail_regime,
    vote_probabilities,
)
from .harness import (
    ConfigError,
    ExperimentRecord,
    LemmaCheckReport,
    LemmaPoint,
    MleComparisonReport,
    SweepConfig,
    TrialOutcome,
    derive_trial_seed,
    full_pairwise_plan,
    parse_config_file,
    records_to_csv,
    records_to_json,
    run_lemma_check,
    run_mle_comparison,
    run_sweep,
    run_trial,
    run_trial_detailed,
    sample_truth,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DegenerateGridError",
    "DegenerateLikelihoodError",
    "DimensionMismatchError",
    "ExperimentRecord",
    "FaultyOracle",
    "IdentityPairError",
    "InstanceTooLargeError",
    "Labeling",
    "LemmaCheckReport",
    "LemmaPoint",
    "LikelihoodSplit",
    "MissingPairError",
    "MleComparisonReport",
    "NoiseParams",
    "QueryPlan",
    "QueryTranscript",
    "RecoveryResult",
    "RegimeMixingError",
    "RepeatQueryError",
    "SeedConfig",
    "SweepConfig",
    "TailEstimate",
    "TailFit",
    "TailSpec",
    "TrialOutcome",
    "ValidityRegimeWarning",
    "align_seed",
    "brute_force_mle",
    "canonical_pair",
    "derive_trial_seed",
    "effective_bias",
    "estimate_pairwise_diff",
    "extend_labels",
    "fit_tail_exponent",
    "full_pairwise_plan",
    "hamming_after_best_shift",
    "likelihood_split",
    "log_likelihood",
    "lookup_oriented",
    "noise_from_uniform",
    "parse_config_file",
    "plurality",
    "recover_from_transcript",
    "recover_success",
    "records_to_csv",
    "records_to_json",
    "run_algorithm1",
    "run_lemma_check",
    "run_mle_comparison",
    "run_sweep",
    "run_trial",
    "run_trial_detailed",
    "sample_noise",
    "sample_truth",
    "seed_rest_plan",
    "seed_size",
    "shift_labeling",
    "tail_predictor",
    "tail_probability_exact",
    "tail_probability_mc",
    "tail_regime",
    "validity_threshold",
    "vote_probabilities",
]
