"""Event-driven simulation of mean-field particle systems with
heavy-tailed collateral jumps, their common-noise stable limit, and the
statistical experiments that compare the two."""

from .finite import (
    Decomposition,
    EventLog,
    NumericError,
    TimeChange,
    TrajectoryBundle,
    collateral_sums_fast,
    cumulated_intensity,
    decompose_trajectory,
    simulate_finite,
    transformed_event_times,
)
from .limit import (
    LimitBundle,
    StablePathGrid,
    conditional_iid_check,
    directing_measure_at,
    sample_stable_path,
    simulate_limit,
)
from .experiments import (
    EXPERIMENTS,
    ConfigError,
    ExperimentConfig,
    ExperimentResult,
    run_experiment,
)
from .measures import d_q, empirical_apply, ks_statistic, wasserstein1_1d, wasserstein_dq
from .model import Drift, InitialLaw, MainJump, ModelSpec, Rate
from .stable import (
    DoaLaw,
    StableParams,
    sample_doa,
    sample_stable_increment,
    sample_stable_increments,
    stable_target_of,
)
from .streams import SeedTree

__version__ = "0.1.0"
