"""Equilibrium selection and strategy comparison.

A subgame (one bundling/PMG configuration) has up to two closed-form
candidates, one per price ordering.  Feasible candidates are kept and the one
maximizing retailer 1's profit is selected; when a candidate is feasible and
stationary but its sufficient condition set fails, it is admitted with a
warning, because the condition sets are not necessary.

The policy comparison solves all five subgames, takes the best bundled
profit, and reports the profit gain from bundling over no bundling together
with the PMG pair attaining it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .equilibria import EquilibriumResult, THEOREMS, candidate_theorems
from .market import MarketParams, Scenario
from .oracle import OracleConfig, OracleOutcome, find_fixed_point

DEFAULT_FEASIBILITY_TOL = 1e-9

# tie-break preference: no PMG commitments first, then lexicographic on the
# (pmg_r1, pmg_r2) flags
BUNDLED_SCENARIOS = (
    Scenario.bundled(False, False),
    Scenario.bundled(False, True),
    Scenario.bundled(True, False),
    Scenario.bundled(True, True),
)


def scenario_key(scenario: Scenario) -> str:
    if scenario.bundling == 0:
        return "no_bundle"
    one = "cm" if scenario.pmg_r1 else "nocm"
    two = "cm" if scenario.pmg_r2 else "nocm"
    return f"{one}_{two}"


@dataclass(frozen=True)
class SubgameSolution:
    scenario: Scenario
    chosen: EquilibriumResult | None
    candidates: list[EquilibriumResult]
    warnings: list[str] = field(default_factory=list)
    oracle: OracleOutcome | None = None


@dataclass(frozen=True)
class PolicyComparison:
    pi_bundle: float | None
    pi_nobundle: float | None
    delta_pi_B: float | None
    best_pmg_regime: Scenario | None
    existence: dict[str, bool]
    solutions: dict[str, SubgameSolution]
    tie_break: str | None = None


def solve_subgame(
    params: MarketParams,
    scenario: Scenario,
    *,
    tol: float = DEFAULT_FEASIBILITY_TOL,
    oracle_check: bool = False,
    oracle_cfg: OracleConfig | None = None,
) -> SubgameSolution:
    """Evaluate both regime candidates for a subgame and select the feasible
    one maximizing retailer 1's profit.

    An empty feasible set yields chosen=None (a non-existence point).  With
    oracle_check=True, a best-response fixed point is computed independently
    and disagreement is reported as a warning.
    """
    results = [THEOREMS[tid](params) for tid in candidate_theorems(scenario)]
    feasible = [r for r in results if r.is_feasible(tol)]
    # sort makes the selection independent of candidate enumeration order
    feasible.sort(key=lambda r: (-r.profits.pi_r1, r.theorem_id))
    chosen = feasible[0] if feasible else None
    warnings: list[str] = []
    if chosen is not None and not chosen.condition_report.all_satisfied:
        warnings.append(
            f"conditions-not-verified: {chosen.theorem_id} admitted on feasibility and "
            f"stationarity alone ({chosen.condition_report.summary()}; the sets are "
            "sufficient, not necessary)"
        )
    oracle_outcome = None
    if oracle_check:
        oracle_outcome = find_fixed_point(params, scenario, oracle_cfg)
        if chosen is not None:
            if not oracle_outcome.converged:
                warnings.append("oracle: best-response iteration did not converge")
            else:
                scale = max(1.0, max(abs(v) for v in chosen.prices.present()))
                dev = chosen.prices.sup_distance(oracle_outcome.prices) / scale
                if dev > 1e-4:
                    warnings.append(
                        f"oracle: fixed point deviates from selected equilibrium "
                        f"(relative sup-norm {dev:.2e})"
                    )
    return SubgameSolution(
        scenario=scenario,
        chosen=chosen,
        candidates=results,
        warnings=warnings,
        oracle=oracle_outcome,
    )


def compare_policies(
    params: MarketParams, *, tol: float = DEFAULT_FEASIBILITY_TOL
) -> PolicyComparison:
    """Solve all five subgames and compare bundling against no bundling.

    pi_bundle is the best feasible retailer-1 profit across the four bundled
    PMG configurations; profit ties between PMG pairs are broken toward fewer
    PMG commitments, then lexicographically, and the tie is recorded.
    """
    solutions: dict[str, SubgameSolution] = {}
    for scenario in BUNDLED_SCENARIOS:
        solutions[scenario_key(scenario)] = solve_subgame(params, scenario, tol=tol)
    no_bundle = solve_subgame(params, Scenario.no_bundle(), tol=tol)
    solutions["no_bundle"] = no_bundle

    existence = {key: sol.chosen is not None for key, sol in solutions.items()}
    bundled = [
        (scenario, solutions[scenario_key(scenario)].chosen)
        for scenario in BUNDLED_SCENARIOS
        if solutions[scenario_key(scenario)].chosen is not None
    ]
    pi_bundle = max((r.profits.pi_r1 for _, r in bundled), default=None)
    best_scenario = None
    tie_break = None
    if pi_bundle is not None:
        attaining = [s for s, r in bundled if r.profits.pi_r1 == pi_bundle]
        best_scenario = attaining[0]
        if len(attaining) > 1:
            tie_break = (
                "profit tie among "
                + ", ".join(s.label() for s in attaining)
                + f"; selected {best_scenario.label()} (fewest PMGs, then lexicographic)"
            )
    pi_nobundle = no_bundle.chosen.profits.pi_r1 if no_bundle.chosen is not None else None
    delta = None
    if pi_bundle is not None and pi_nobundle is not None:
        delta = pi_bundle - pi_nobundle
    return PolicyComparison(
        pi_bundle=pi_bundle,
        pi_nobundle=pi_nobundle,
        delta_pi_B=delta,
        best_pmg_regime=best_scenario,
        existence=existence,
        solutions=solutions,
        tie_break=tie_break,
    )
