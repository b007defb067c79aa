"""Rising rested bandits: Thompson-sampling policies, instance analytics,
distribution numerics, and a reproducible experiment harness."""

__version__ = "0.1.0"

from .curves import (
    BernoulliLaw,
    BoundedUniformLaw,
    ConstantCurve,
    ExponentialCurve,
    LinearCappedCurve,
    PolynomialCurve,
    RewardCurve,
    RewardLaw,
    TabulatedCurve,
)
from .instance import Arm, Instance, InvalidInstanceError, dump_instance, load_instance
from .analytics import (
    AnalysisReport,
    BoundTerms,
    SigmaReport,
    WindowedSigmaReport,
    build_report,
    gaps,
    growth_index,
    pseudo_regret,
    pull_bound_terms,
    sigma_complexity,
    wald_regret_bound,
    windowed_sigma_complexity,
)
from .constructions import (
    LowerBoundPair,
    lower_bound_instances,
    persistent_gap_pair,
    random_rising_instance,
    vanishing_gap_pair,
)
from .policies import (
    BetaSlidingWindowTS,
    GaussianSlidingWindowTS,
    Policy,
    PolicyConfig,
    SlidingWindowUCB,
    UCB1Policy,
    default_precision_scale,
    default_sw_window,
    make_policy,
)
from .harness import (
    Aggregate,
    RunRecord,
    SweepPoint,
    SweepResult,
    child_seed,
    evaluation_grid,
    run_batch,
    run_single,
    sweep,
)

__all__ = [
    "__version__",
    "Arm",
    "Instance",
    "InvalidInstanceError",
    "load_instance",
    "dump_instance",
    "RewardCurve",
    "RewardLaw",
    "ExponentialCurve",
    "PolynomialCurve",
    "LinearCappedCurve",
    "ConstantCurve",
    "TabulatedCurve",
    "BernoulliLaw",
    "BoundedUniformLaw",
    "AnalysisReport",
    "BoundTerms",
    "SigmaReport",
    "WindowedSigmaReport",
    "build_report",
    "gaps",
    "growth_index",
    "pseudo_regret",
    "pull_bound_terms",
    "sigma_complexity",
    "wald_regret_bound",
    "windowed_sigma_complexity",
    "LowerBoundPair",
    "lower_bound_instances",
    "vanishing_gap_pair",
    "persistent_gap_pair",
    "random_rising_instance",
    "Policy",
    "PolicyConfig",
    "BetaSlidingWindowTS",
    "GaussianSlidingWindowTS",
    "UCB1Policy",
    "SlidingWindowUCB",
    "make_policy",
    "default_precision_scale",
    "default_sw_window",
    "RunRecord",
    "Aggregate",
    "SweepPoint",
    "SweepResult",
    "run_single",
    "run_batch",
    "sweep",
    "child_seed",
    "evaluation_grid",
]
