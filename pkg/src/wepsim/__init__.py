"""Monte Carlo toolkit for weighted empirical processes on countable spaces.

Sparse signed-measure arithmetic, stick-breaking Dirichlet process
sampling with explicit truncation accounting, bracketing-entropy bounds
for the class of all indicator sets, Gaussian bridge limits, a local
empirical process simulator, and an experiment harness that verifies the
corresponding limit theorems by seeded Monte Carlo.
"""
from .backend import active_backend
from .bracketing import (
    BracketCover,
    DyadicEntropyProfile,
    IndicatorBracket,
    aj_partition,
    bracket_cover_l1,
    brute_force_bracket_number,
    dyadic_profile,
    entropy_integral_bound,
    jk_index,
    entropy_tail_bound,
    sqrt_mass_tail_sum,
    mk_count,
)
from .dirichlet import (
    DpParams,
    StickBreakingDraw,
    posterior_params,
    sample_dp,
    sample_dp_draw,
    sample_stick_weights,
)
from .harness import (
    ExperimentConfig,
    HypothesisGateError,
    check_ddb,
    check_weight_norm_conditions,
    ks_distance,
    run_experiment,
)
from .local_empirical import (
    LocalConfig,
    LocalDraw,
    NormalDensity,
    UniformDensity,
    drift_statistic,
    simulate_t_process,
    window_probability,
)
from .measures import (
    DiscreteMeasure,
    GeometricFamily,
    UniformFamily,
    WeightSeq,
    ZetaFamily,
    ddb_statistic,
    lr_norm,
    mix,
    signed_sup_norm,
    tv_distance,
)
from .processes import (
    GaussianFieldDraw,
    WeightedSample,
    bridge_sup_norm,
    gn_signed_measure,
    gn_sup_norm,
    multiplier_abs_sum,
    sample_bridge,
)
from .rng import derive_rng

__version__ = "0.1.0"

__all__ = [
    "BracketCover",
    "DiscreteMeasure",
    "DpParams",
    "DyadicEntropyProfile",
    "ExperimentConfig",
    "GaussianFieldDraw",
    "GeometricFamily",
    "HypothesisGateError",
    "IndicatorBracket",
    "LocalConfig",
    "LocalDraw",
    "NormalDensity",
    "StickBreakingDraw",
    "UniformDensity",
    "UniformFamily",
    "WeightSeq",
    "WeightedSample",
    "ZetaFamily",
    "active_backend",
    "aj_partition",
    "bracket_cover_l1",
    "bridge_sup_norm",
    "brute_force_bracket_number",
    "check_ddb",
    "check_weight_norm_conditions",
    "ddb_statistic",
    "derive_rng",
    "drift_statistic",
    "dyadic_profile",
    "entropy_integral_bound",
    "gn_signed_measure",
    "gn_sup_norm",
    "jk_index",
    "ks_distance",
    "entropy_tail_bound",
    "sqrt_mass_tail_sum",
    "lr_norm",
    "mix",
    "mk_count",
    "multiplier_abs_sum",
    "posterior_params",
    "run_experiment",
    "sample_bridge",
    "sample_dp",
    "sample_dp_draw",
    "sample_stick_weights",
    "signed_sup_norm",
    "simulate_t_process",
    "tv_distance",
    "window_probability",
]
