"""Active learning for one-class classification with a pair of one-class SVMs."""

from .bench import (
    BenchReport,
    ConfusionCounts,
    GridSearchResult,
    StrategyReport,
    bacc,
    evaluate,
    grid_search,
    run_benchmark,
)
from .data import (
    Dataset,
    FoldPlan,
    SplitView,
    gen_two_cluster,
    load_csv,
    make_folds,
    rotate_roles,
    save_csv,
)
from .datasets import build_dataset, load_benchmark_dataset, write_benchmark_csvs
from .engine import (
    DecisionState,
    InteractiveOracle,
    ModelPair,
    PoolState,
    RunResult,
    SimulatedOracle,
    StoppingConfig,
    apply_labels,
    init_run,
    run,
    should_stop,
)
from .errors import ConfigurationError, CsvFormatError, OracleError, UndefinedMetricError
from .kde import GaussianKde, entropy_score, expected_margin_score, posterior
from .kernel import gram, rbf
from .ocsvm import OneClassSVM
from .strategy import (
    STRATEGY_KINDS,
    ScoredPool,
    StrategyConfig,
    agg_exploration,
    agg_similarity,
    normalize_dv,
    score_pool,
    select_batch,
)

__version__ = "0.1.0"

__all__ = [
    "BenchReport",
    "ConfigurationError",
    "ConfusionCounts",
    "CsvFormatError",
    "Dataset",
    "DecisionState",
    "FoldPlan",
    "GaussianKde",
    "GridSearchResult",
    "InteractiveOracle",
    "ModelPair",
    "OneClassSVM",
    "OracleError",
    "PoolState",
    "RunResult",
    "STRATEGY_KINDS",
    "ScoredPool",
    "SimulatedOracle",
    "SplitView",
    "StoppingConfig",
    "StrategyConfig",
    "StrategyReport",
    "UndefinedMetricError",
    "agg_exploration",
    "agg_similarity",
    "apply_labels",
    "bacc",
    "build_dataset",
    "evaluate",
    "expected_margin_score",
    "entropy_score",
    "gen_two_cluster",
    "gram",
    "grid_search",
    "init_run",
    "load_benchmark_dataset",
    "load_csv",
    "make_folds",
    "normalize_dv",
    "posterior",
    "rbf",
    "rotate_roles",
    "run",
    "run_benchmark",
    "save_csv",
    "score_pool",
    "select_batch",
    "should_stop",
    "write_benchmark_csvs",
]
