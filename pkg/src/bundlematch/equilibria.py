"""Closed-form equilibrium candidates, one per subgame/regime pair.

Six candidate solutions cover the strategy space:

  T1  bundling, r1 offers a PMG, regime pb1 >= pb2   (r2's PMG irrelevant)
  T2  bundling, r1 without a PMG, regime pb1 >= pb2  (r2's PMG irrelevant)
  T3  bundling, r2 offers a PMG, regime pb1 <= pb2   (r1's PMG irrelevant)
  T4  bundling, r2 without a PMG, regime pb1 <= pb2  (r1's PMG irrelevant)
  T5a no bundling, regime p1 + p2 >= pb2
  T5b no bundling, regime p1 + p2 <  pb2

Each function returns the regime's unique stationary point together with the
demands, profits, condition-set report, residuals, and a feasibility flag.
Infeasible candidates (ordering violated, a demand negative) are returned
with feasible=False rather than raised, so the selection layer can map
non-existence regions.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .conditions import ConditionReport, check_condition_set
from .market import (
    DemandProfile,
    MarketParams,
    PriceVector,
    Regime,
    Scenario,
    demands,
    effective_prices_in_regime,
)
from .profits import (
    ProfitPair,
    gradient_r1_in_regime,
    gradient_r2_in_regime,
    profits_in_regime,
)

FOC_RESIDUAL_TOL = 1e-8
FEASIBILITY_TOL = 1e-9


class DegenerateParamsError(ValueError):
    """Parameters make a closed-form denominator vanish."""


@dataclass(frozen=True)
class TheoremInfo:
    """Which subgames a candidate applies to and which regime it presumes."""

    theorem_id: str
    regime: Regime
    condition_set: str
    scenario: Scenario  # representative subgame incl. the PMG flag that matters


THEOREM_INFO: dict[str, TheoremInfo] = {
    "T1": TheoremInfo("T1", Regime.R1_HIGH, "A", Scenario.bundled(True, True)),
    "T2": TheoremInfo("T2", Regime.R1_HIGH, "B", Scenario.bundled(False, True)),
    "T3": TheoremInfo("T3", Regime.R1_LOW, "C", Scenario.bundled(True, True)),
    "T4": TheoremInfo("T4", Regime.R1_LOW, "D", Scenario.bundled(True, False)),
    "T5a": TheoremInfo("T5a", Regime.R1_HIGH, "E", Scenario.no_bundle()),
    "T5b": TheoremInfo("T5b", Regime.R1_LOW, "F", Scenario.no_bundle()),
}


@dataclass(frozen=True)
class EquilibriumResult:
    prices: PriceVector
    demands: DemandProfile
    profits: ProfitPair
    regime: Regime
    theorem_id: str
    condition_report: ConditionReport
    foc_residual: float
    feasible: bool

    def is_feasible(self, tol: float = FEASIBILITY_TOL) -> bool:
        """Ordering of the presumed regime holds, all demands and prices are
        nonnegative, the bundle is not priced above its parts, and the
        first-order conditions are satisfied."""
        r1_eq = self.prices.r1_bundle_equivalent()
        if self.regime is Regime.R1_HIGH:
            if r1_eq < self.prices.pb2 - tol:
                return False
        else:
            if r1_eq > self.prices.pb2 + tol:
                return False
        if self.demands.min() < -tol:
            return False
        if min(self.prices.present()) < -tol:
            return False
        if self.prices.pb1 is not None and self.prices.p1 + self.prices.p2 < self.prices.pb1 - tol:
            return False
        return self.foc_residual <= FOC_RESIDUAL_TOL


def _guard_denominator(value: float, description: str) -> float:
    if abs(value) < 1e-12:
        raise DegenerateParamsError(f"degenerate parameters: {description} vanishes")
    return value


def _assemble(params: MarketParams, theorem_id: str, prices: PriceVector) -> EquilibriumResult:
    info = THEOREM_INFO[theorem_id]
    scenario, regime = info.scenario, info.regime
    eff = effective_prices_in_regime(params, scenario, prices, regime)
    d = demands(params, scenario, prices, eff)
    pp = profits_in_regime(params, scenario, prices, regime)
    g1 = gradient_r1_in_regime(params, scenario, prices, regime)
    g2 = gradient_r2_in_regime(params, scenario, prices, regime)
    residual = max(float(np.max(np.abs(g1))), abs(g2))
    result = EquilibriumResult(
        prices=prices,
        demands=d,
        profits=pp,
        regime=regime,
        theorem_id=theorem_id,
        condition_report=check_condition_set(info.condition_set, params),
        foc_residual=residual,
        feasible=False,
    )
    return dataclasses.replace(result, feasible=result.is_feasible())


def _item_price_split(params: MarketParams, common: float) -> tuple[float, float]:
    """Split a common item-price level into p1, p2 using the base asymmetry
    and the cost difference (bundled regimes pb1 >= pb2 carry c/2 terms)."""
    p = params
    skew = 0.25 * (p.a_l_i1 - p.a_l_i2) / _guard_denominator(
        p.b_l * (1.0 - p.theta_l), "b_l (1 - theta_l)"
    )
    return skew + common + 0.5 * p.c1, -skew + common + 0.5 * p.c2


def eq_T1(params: MarketParams) -> EquilibriumResult:
    """Bundling with a PMG at retailer 1, regime pb1 >= pb2.

    Retailer 2 prices against its whole captive demand plus its strategic
    share; retailer 1's bundle price inherits a dependence on retailer 2's
    demand bases through the matched effective price.
    """
    p = params
    c = p.total_cost
    den_a = _guard_denominator(
        p.t1 * p.b_l * (1.0 + p.theta_l) + 2.0 * p.b_l * p.lambda_l, "bundle-price denominator"
    )
    den_r2 = _guard_denominator(2.0 * p.b_l + (1.0 - p.alpha) * p.b_s, "r2 demand slope")
    rival_level = (p.a_l_jb + p.a_q_jb + (1.0 - p.alpha) * p.a_s) / den_r2
    pb2 = 0.5 * (rival_level + c)
    pb1 = 0.5 * (
        ((p.a_l_i1 + p.a_l_i2) * p.lambda_l + (p.b_l * (1.0 + p.theta_l) + 2.0 * p.lambda_l) * p.a_l_ib)
        / den_a
        + (rival_level - c) * p.lambda_l**2 / den_a
        + c
    )
    common = -p.a_l_ib / (4.0 * p.lambda_l) + (2.0 * pb1 - c) * p.t1 / (4.0 * p.lambda_l)
    p1, p2 = _item_price_split(params, common)
    return _assemble(params, "T1", PriceVector(p1, p2, pb1, pb2))


def eq_T2(params: MarketParams) -> EquilibriumResult:
    """Bundling without a PMG at retailer 1, regime pb1 >= pb2.  Retailer 1
    prices on its own demand only; retailer 2 serves all strategic demand."""
    p = params
    c = p.total_cost
    k = p.b_l * (1.0 + p.theta_l) + 2.0 * p.lambda_l
    den = _guard_denominator(
        4.0 * p.b_l * k + 4.0 * p.b_l * (1.0 + p.theta_l) * p.lambda_l - p.lambda_l**2,
        "bundle-price denominator",
    )
    cross = p.b_l * (1.0 + p.theta_l) * p.lambda_l - p.lambda_l**2
    pb1 = 0.5 * (
        (3.0 * (p.a_l_i1 + p.a_l_i2) * p.lambda_l + 2.0 * k * (p.a_l_ib + p.a_q_ib)) / den
        + c * (1.0 + cross / den)
    )
    pb2 = 0.5 * ((p.a_l_jb + p.a_q_jb + p.a_s) / (2.0 * p.b_l + p.b_s) + c)
    p1, p2 = _low_or_unmatched_items(p, pb1, p.a_l_ib + p.a_q_ib, p.t1)
    return _assemble(params, "T2", PriceVector(p1, p2, pb1, pb2))


def _low_or_unmatched_items(
    p: MarketParams, pb1: float, captive_bases: float, slope: float
) -> tuple[float, float]:
    """Item prices when the price-aware segment pays pb1: a base-asymmetry
    skew, lopsided cost terms, and a level tied to the bundle price."""
    skew = 0.25 * (p.a_l_i1 - p.a_l_i2) / _guard_denominator(
        p.b_l * (1.0 - p.theta_l), "b_l (1 - theta_l)"
    )
    c = p.total_cost
    level = -captive_bases / (6.0 * p.lambda_l) + (2.0 * pb1 - c) * slope / (3.0 * p.lambda_l)
    p1 = skew + 5.0 * p.c1 / 12.0 - p.c2 / 12.0 + level
    p2 = -skew - p.c1 / 12.0 + 5.0 * p.c2 / 12.0 + level
    return p1, p2


def _low_regime_prices(p: MarketParams, strat_w: float, pb2: float) -> PriceVector:
    """Stationary prices in the regime pb1 <= pb2, with retailer 1 serving a
    `strat_w` share of strategic demand at its bundle price."""
    c = p.total_cost
    k = p.b_l * (1.0 + p.theta_l) + 2.0 * p.lambda_l
    den = _guard_denominator(
        2.0 * (2.0 * p.b_l + strat_w * p.b_s) * k
        + 4.0 * p.b_l * (1.0 + p.theta_l) * p.lambda_l
        - p.lambda_l**2,
        "bundle-price denominator",
    )
    cross = p.b_l * (1.0 + p.theta_l) * p.lambda_l - p.lambda_l**2
    captive = p.a_l_ib + p.a_q_ib + strat_w * p.a_s
    pb1 = 0.5 * (
        (3.0 * (p.a_l_i1 + p.a_l_i2) * p.lambda_l + 2.0 * k * captive) / den
        + c * (1.0 + cross / den)
    )
    p1, p2 = _low_or_unmatched_items(p, pb1, captive, p.t1 + 0.5 * strat_w * p.b_s)
    return PriceVector(p1, p2, pb1, pb2)


def eq_T3(params: MarketParams) -> EquilibriumResult:
    """Bundling with a PMG at retailer 2, regime pb1 <= pb2.  Retailer 2's
    price-aware and strategic customers are matched down to pb1, so only
    its price-unaware loyal demand prices pb2."""
    p = params
    pb2 = 0.5 * (p.a_l_jb / p.b_l + p.total_cost)
    return _assemble(params, "T3", _low_regime_prices(p, p.alpha, pb2))


def eq_T4(params: MarketParams) -> EquilibriumResult:
    """Bundling without a PMG at retailer 2, regime pb1 <= pb2.  Retailer 1
    is strictly cheapest and captures all strategic demand."""
    p = params
    pb2 = 0.5 * ((p.a_l_jb + p.a_q_jb) / (2.0 * p.b_l) + p.total_cost)
    return _assemble(params, "T4", _low_regime_prices(p, 1.0, pb2))


def _no_bundle_items(p: MarketParams, strat_w: float) -> tuple[float, float]:
    skew = (p.a_l_i1 - p.a_l_i2) / _guard_denominator(
        4.0 * p.b_l * (1.0 - p.theta_l), "b_l (1 - theta_l)"
    )
    level = (
        p.a_l_i1
        + p.a_l_i2
        + 2.0 * (p.a_l_ib + p.a_q_ib)
        + 2.0 * strat_w * p.a_s
    ) / (4.0 * p.b_l * (5.0 + p.theta_l) + 8.0 * strat_w * p.b_s)
    return skew + 0.5 * p.c1 + level, -skew + 0.5 * p.c2 + level


def eq_T5a(params: MarketParams) -> EquilibriumResult:
    """No bundling, regime p1 + p2 >= pb2: retailer 2 serves all strategic
    demand."""
    p = params
    p1, p2 = _no_bundle_items(p, 0.0)
    pb2 = (p.a_l_jb + p.a_q_jb + p.a_s) / (2.0 * (2.0 * p.b_l + p.b_s)) + 0.5 * p.total_cost
    return _assemble(params, "T5a", PriceVector(p1, p2, None, pb2))


def eq_T5b(params: MarketParams) -> EquilibriumResult:
    """No bundling, regime p1 + p2 < pb2: retailer 1's item-price sum is the
    market-low bundle-equivalent price and captures all strategic demand."""
    p = params
    p1, p2 = _no_bundle_items(p, 1.0)
    pb2 = (p.a_l_jb + p.a_q_jb) / (4.0 * p.b_l) + 0.5 * p.total_cost
    return _assemble(params, "T5b", PriceVector(p1, p2, None, pb2))


THEOREMS = {
    "T1": eq_T1,
    "T2": eq_T2,
    "T3": eq_T3,
    "T4": eq_T4,
    "T5a": eq_T5a,
    "T5b": eq_T5b,
}


def candidate_theorems(scenario: Scenario) -> tuple[str, str]:
    """The (high-regime, low-regime) candidate pair for a subgame."""
    if scenario.bundling == 0:
        return ("T5a", "T5b")
    high = "T1" if scenario.pmg_r1 else "T2"
    low = "T3" if scenario.pmg_r2 else "T4"
    return (high, low)
