"""Dynamic-pricing laboratory.

A deterministic elasticity-based retail demand model, a tabular
Q-learning pricing agent, classical optimization baselines, and an
experiment harness that compares them product by product.
"""

from .baselines import (
    Method,
    Optimum,
    analytic_optimum,
    grid_search_optimum,
    line_search_optimum,
    profit_at,
)
from .catalog import (
    RejectReason,
    RowOutcome,
    ValidationReport,
    parse_catalog,
    sample_catalog,
    serialize_catalog,
)
from .domain import (
    DayModulation,
    DayType,
    MarketState,
    PriceGrid,
    ProductSpec,
    default_price_grid,
    demand,
    noisy_demand,
    reward,
    revenue_curve,
    zero_demand_price,
)
from .experiment import (
    ComparisonRow,
    CostPolicy,
    ExperimentConfig,
    derive_product_seed,
    export_revenue_curves,
    render_report,
    run_experiment,
)
from .qlearn import (
    GreedyOutcome,
    Hyperparams,
    QTable,
    TrainingTrace,
    epsilon_at,
    epsilon_schedule,
    evaluate_greedy,
    select_action,
    train,
    update_q,
)
from .rng import XorShift64, split_seed, splitmix64

__version__ = "0.1.0"

__all__ = [
    "ComparisonRow",
    "CostPolicy",
    "DayModulation",
    "DayType",
    "ExperimentConfig",
    "GreedyOutcome",
    "Hyperparams",
    "MarketState",
    "Method",
    "Optimum",
    "PriceGrid",
    "ProductSpec",
    "QTable",
    "RejectReason",
    "RowOutcome",
    "TrainingTrace",
    "ValidationReport",
    "XorShift64",
    "analytic_optimum",
    "default_price_grid",
    "demand",
    "derive_product_seed",
    "epsilon_at",
    "epsilon_schedule",
    "evaluate_greedy",
    "export_revenue_curves",
    "grid_search_optimum",
    "line_search_optimum",
    "noisy_demand",
    "parse_catalog",
    "profit_at",
    "render_report",
    "revenue_curve",
    "reward",
    "run_experiment",
    "sample_catalog",
    "select_action",
    "serialize_catalog",
    "split_seed",
    "splitmix64",
    "train",
    "update_q",
    "zero_demand_price",
]
