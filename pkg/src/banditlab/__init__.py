"""banditlab: stochastic bandit simulation and regret-bound certification."""

from .core import (
    ArmStatistics,
    BanditInstance,
    UniformGapPrior,
    FiniteSupportPrior,
    GapProfile,
    PriorSpec,
    ProductBetaPrior,
    RegretTrace,
    RewardFamily,
    TwoPointPermutationPrior,
    gap_profile,
    update_statistics,
)
from .environments import (
    GAUSSIAN_SAMPLER,
    RngStream,
    reward_from_noise,
    reward_noise_block,
    sample_instance,
    sample_reward,
)
from .errors import (
    ConfigurationError,
    DegenerateWeightsError,
    QuadratureAccuracyError,
    VerificationError,
)
from .numerics import (
    gauss_tail_bounds,
    log_gauss_cdf,
    log_plus,
    log_trunc_gauss_integral,
    normalize_log_weights,
    quadrature,
)
from .policies import (
    BetaThompson,
    FinitePosterior,
    FiniteSupportThompson,
    MinGapThompson,
    MossPolicy,
    OraclePolicy,
    Policy,
    TwoPointThompson,
    UcbPolicy,
    moss_index,
    sum_sq_about,
)
from .simulation import (
    ExperimentConfig,
    PolicySpec,
    RegretSummary,
    build_policy,
    default_checkpoints,
    estimate_regret,
    run_episode,
)
from . import bounds

__version__ = "0.1.0"

__all__ = [
    "ArmStatistics",
    "BanditInstance",
    "UniformGapPrior",
    "BetaThompson",
    "ConfigurationError",
    "DegenerateWeightsError",
    "ExperimentConfig",
    "FinitePosterior",
    "FiniteSupportPrior",
    "FiniteSupportThompson",
    "GAUSSIAN_SAMPLER",
    "GapProfile",
    "MinGapThompson",
    "MossPolicy",
    "OraclePolicy",
    "Policy",
    "PolicySpec",
    "PriorSpec",
    "ProductBetaPrior",
    "QuadratureAccuracyError",
    "RegretSummary",
    "RegretTrace",
    "RewardFamily",
    "RngStream",
    "TwoPointPermutationPrior",
    "TwoPointThompson",
    "UcbPolicy",
    "VerificationError",
    "bounds",
    "build_policy",
    "default_checkpoints",
    "estimate_regret",
    "gap_profile",
    "gauss_tail_bounds",
    "log_gauss_cdf",
    "log_plus",
    "log_trunc_gauss_integral",
    "moss_index",
    "normalize_log_weights",
    "quadrature",
    "reward_from_noise",
    "reward_noise_block",
    "run_episode",
    "sample_instance",
    "sample_reward",
    "sum_sq_about",
    "update_statistics",
]
