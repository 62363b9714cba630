"""Nash equilibria of a two-retailer complementary-goods pricing game with
mixed bundling and price-matching guarantees."""

from .conditions import (
    ConditionCheck,
    ConditionReport,
    HessianReport,
    UnknownSetError,
    check_condition_set,
    hessian_r1,
    hessian_r2,
)
from .equilibria import (
    DegenerateParamsError,
    EquilibriumResult,
    candidate_theorems,
    eq_T1,
    eq_T2,
    eq_T3,
    eq_T4,
    eq_T5a,
    eq_T5b,
)
from .market import (
    DemandProfile,
    EffectivePrices,
    InvalidParameterError,
    InvalidPriceError,
    MarketParams,
    PriceVector,
    Regime,
    Scenario,
    demands,
    effective_prices,
)
from .oracle import (
    OracleConfig,
    OracleOutcome,
    SingularSystemError,
    best_response_r1,
    best_response_r2,
    find_fixed_point,
    find_fixed_points,
)
from .policy import (
    PolicyComparison,
    SubgameSolution,
    compare_policies,
    solve_subgame,
)
from .profits import (
    AmbiguousKinkError,
    ProfitPair,
    profit_gradient_r1,
    profit_gradient_r2,
    profits,
)

__all__ = [
    "AmbiguousKinkError",
    "ConditionCheck",
    "ConditionReport",
    "DegenerateParamsError",
    "DemandProfile",
    "EffectivePrices",
    "EquilibriumResult",
    "HessianReport",
    "InvalidParameterError",
    "InvalidPriceError",
    "MarketParams",
    "OracleConfig",
    "OracleOutcome",
    "PolicyComparison",
    "PriceVector",
    "ProfitPair",
    "Regime",
    "Scenario",
    "SingularSystemError",
    "SubgameSolution",
    "UnknownSetError",
    "best_response_r1",
    "best_response_r2",
    "candidate_theorems",
    "check_condition_set",
    "compare_policies",
    "demands",
    "effective_prices",
    "eq_T1",
    "eq_T2",
    "eq_T3",
    "eq_T4",
    "eq_T5a",
    "eq_T5b",
    "find_fixed_point",
    "find_fixed_points",
    "hessian_r1",
    "hessian_r2",
    "profit_gradient_r1",
    "profit_gradient_r2",
    "profits",
    "solve_subgame",
]
