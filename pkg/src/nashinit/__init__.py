"""Nash equilibrium approximation for n-player strategic-form games via
fictitious play with multi-start strategy initialization."""

from .engine import FPResult, FPRunConfig, fp_multi, fp_run, fp_run_all
from .experiments import (
    AggregateRow,
    ExperimentConfig,
    ExperimentResult,
    ResultRow,
    aggregate,
    k_sweep,
    run_experiment,
)
from .games import (
    EpsilonReport,
    Game,
    GameTooLargeError,
    MixedStrategy,
    StrategyProfile,
    action_values,
    best_response,
    epsilon,
    expected_utility,
    load_game,
    random_game,
    save_game,
)
from .initializers import (
    InitAlgorithm,
    InitBatch,
    InitScheme,
    init_classic,
    init_fppp,
    init_kmeans,
    init_macqueen,
    init_maximin_sampled,
    init_maximin_unsampled,
)
from .maximin import MaximinProblem, MaximinSolution, objective, project_simplex, solve
from .sampling import (
    SamplerConfig,
    SamplingScheme,
    l2_distance,
    sample_naive,
    sample_pool,
    sample_uniform,
    stream_rng,
)

__version__ = "0.1.0"
