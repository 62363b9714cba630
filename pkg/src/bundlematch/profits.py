"""Retailer profits and their analytic gradients.

Profit is margin times demand summed over the segments a retailer serves.
Price-aware and strategic margins use effective (post-PMG) prices.  Strategic
demand is split between the retailers according to who actually offers the
market-low effective bundle price: the full share goes to the strictly
cheapest retailer unless the other one matches via a PMG, in which case the
split parameter alpha applies; exact posted-price ties follow the R1_HIGH
convention (see tie_strategic_share).

Within a fixed price-ordering regime each profit is an exact quadratic in the
retailer's own prices, so the gradients below are affine and match the
regime's first-order-condition system term by term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .market import (
    EffectivePrices,
    MarketParams,
    PriceVector,
    Regime,
    Scenario,
    demands,
    effective_prices,
    effective_prices_in_regime,
)


class AmbiguousKinkError(ValueError):
    """Gradient requested exactly at a regime kink, where the piecewise
    profit is not differentiable."""


@dataclass(frozen=True)
class ProfitPair:
    """Both retailers' profits in raw currency (reporting divides by 1000)."""

    pi_r1: float
    pi_r2: float

    @property
    def welfare(self) -> float:
        return self.pi_r1 + self.pi_r2


def strategic_share_in_regime(params: MarketParams, scenario: Scenario, regime: Regime) -> float:
    """Retailer 1's share of strategic demand in a regime's interior.

    R1_HIGH: retailer 2 posts the low price; retailer 1 serves alpha of the
    segment only by matching through its own PMG.  R1_LOW: mirrored, with
    retailer 2 matching; without a PMG the cheap retailer takes everything.
    Under B=0 no PMGs exist, so the cheap side takes the whole segment.
    """
    if scenario.bundling == 0:
        return 0.0 if regime is Regime.R1_HIGH else 1.0
    if regime is Regime.R1_HIGH:
        return params.alpha if scenario.pmg_r1 else 0.0
    return params.alpha if scenario.pmg_r2 else 1.0


def tie_strategic_share(params: MarketParams, scenario: Scenario) -> float:
    """Retailer 1's strategic share at an exact bundle-equivalent price tie.

    Ties are labelled R1_HIGH and inherit that regime's split: alpha when
    retailer 1 can match through its own PMG, zero otherwise.  Splitting
    alpha at ties retailer 1 reaches only by posting (not matching) would
    create kink points where retailer 2's best response fails to exist (it
    would undercut rather than concede its strategic sales), destroying the
    interior equilibria the per-regime analyses identify.
    """
    return strategic_share_in_regime(params, scenario, Regime.R1_HIGH)


def _strategic_share_at(params: MarketParams, scenario: Scenario, prices: PriceVector) -> float:
    r1_eq = prices.r1_bundle_equivalent()
    if r1_eq == prices.pb2:
        return tie_strategic_share(params, scenario)
    regime = Regime.R1_HIGH if r1_eq > prices.pb2 else Regime.R1_LOW
    return strategic_share_in_regime(params, scenario, regime)


def _profit_pair(
    params: MarketParams,
    scenario: Scenario,
    prices: PriceVector,
    eff: EffectivePrices,
    share: float,
) -> ProfitPair:
    p = params
    d = demands(params, scenario, prices, eff)
    c = p.total_cost
    m1 = prices.p1 - p.c1
    m2 = prices.p2 - p.c2
    strategic = (eff.hat_pb - c) * d.d_s
    if scenario.bundling == 1:
        pi_r1 = (
            m1 * d.d_l_i1
            + m2 * d.d_l_i2
            + (prices.pb1 - c) * d.d_l_ib
            + (eff.tilde_pb1 - c) * d.d_q_ib
            + share * strategic
        )
    else:
        s = prices.p1 + prices.p2
        pi_r1 = m1 * d.d_l_i1 + m2 * d.d_l_i2 + (s - c) * (d.d_l_ib + d.d_q_ib) + share * strategic
    pi_r2 = (prices.pb2 - c) * d.d_l_jb + (eff.tilde_pb2 - c) * d.d_q_jb + (1.0 - share) * strategic
    return ProfitPair(pi_r1=pi_r1, pi_r2=pi_r2)


def profits(params: MarketParams, scenario: Scenario, prices: PriceVector) -> ProfitPair:
    """Both retailers' profits at posted prices.

    The regime (and with it the PMG resolution and the strategic split) is
    read off the prices themselves, so the function is total, including at
    regime kinks.
    """
    eff = effective_prices(params, scenario, prices)
    share = _strategic_share_at(params, scenario, prices)
    return _profit_pair(params, scenario, prices, eff, share)


def profits_in_regime(
    params: MarketParams, scenario: Scenario, prices: PriceVector, regime: Regime
) -> ProfitPair:
    """Profits under a presumed price ordering (the branch a closed-form
    candidate was derived in), regardless of the ordering the prices satisfy."""
    eff = effective_prices_in_regime(params, scenario, prices, regime)
    share = strategic_share_in_regime(params, scenario, regime)
    return _profit_pair(params, scenario, prices, eff, share)


# ---------------------------------------------------------------------------
# analytic gradients (the per-regime first-order-condition systems)
# ---------------------------------------------------------------------------


def _grad_r1_bundled(
    params: MarketParams, prices: PriceVector, *, matched: bool, strat_w: float
) -> np.ndarray:
    """d pi_r1 / d(p1, p2, pb1) under B=1.

    matched=True: the loyal price-aware segment at retailer 1 pays pb2 (its
    PMG matched down), so that term's margin does not vary with pb1.
    strat_w: weight of strategic demand priced at pb1 (zero whenever the
    segment buys at pb2).
    """
    p = params
    pb1, pb2 = prices.pb1, prices.pb2
    tilde1 = pb2 if matched else pb1
    hat = pb1 if strat_w > 0.0 else pb2
    regime = Regime.R1_LOW if strat_w > 0.0 else Regime.R1_HIGH
    eff = EffectivePrices(tilde_pb1=tilde1, tilde_pb2=pb2, hat_pb=hat, regime=regime)
    d = demands(params, Scenario.bundled(True, True), prices, eff)
    c = p.total_cost
    m1 = prices.p1 - p.c1
    m2 = prices.p2 - p.c2
    mb = pb1 - c
    mt = tilde1 - c
    g1 = d.d_l_i1 - m1 * p.t1 - m2 * p.t2 + mb * p.lambda_l + mt * p.lambda_l
    g2 = d.d_l_i2 - m1 * p.t2 - m2 * p.t1 + mb * p.lambda_l + mt * p.lambda_l
    g3 = (m1 + m2) * p.lambda_l + d.d_l_ib - mb * p.t1
    if not matched:
        g3 += d.d_q_ib - mb * p.t1
    if strat_w > 0.0:
        g3 += strat_w * (d.d_s - mb * p.b_s)
    return np.array([g1, g2, g3])


def _grad_r1_unbundled(params: MarketParams, prices: PriceVector, *, strat_w: float) -> np.ndarray:
    """d pi_r1 / d(p1, p2) under B=0; strat_w weights strategic demand priced
    at the item-price sum."""
    p = params
    s = prices.p1 + prices.p2
    hat = s if strat_w > 0.0 else prices.pb2
    regime = Regime.R1_LOW if strat_w > 0.0 else Regime.R1_HIGH
    eff = EffectivePrices(tilde_pb1=s, tilde_pb2=prices.pb2, hat_pb=hat, regime=regime)
    d = demands(params, Scenario.no_bundle(), prices, eff)
    c = p.total_cost
    m1 = prices.p1 - p.c1
    m2 = prices.p2 - p.c2
    ms = s - c
    joint = d.d_l_ib + d.d_q_ib - 2.0 * ms * p.b_l
    if strat_w > 0.0:
        joint += strat_w * (d.d_s - ms * p.b_s)
    g1 = d.d_l_i1 - m1 * p.b_l - m2 * p.b_l * p.theta_l + joint
    g2 = d.d_l_i2 - m1 * p.b_l * p.theta_l - m2 * p.b_l + joint
    return np.array([g1, g2])


def _grad_r2(
    params: MarketParams, prices: PriceVector, *, include_q: bool, strat_w: float
) -> float:
    """d pi_r2 / d pb2.

    include_q: the loyal price-aware segment at retailer 2 pays the posted
    pb2 (no PMG matching down to retailer 1's price).  strat_w: weight of
    strategic demand priced at pb2 (zero when the segment buys at retailer
    1's bundle-equivalent price).
    """
    p = params
    pb2 = prices.pb2
    c = p.total_cost
    g = (p.a_l_jb - p.b_l * pb2) - (pb2 - c) * p.b_l
    if include_q:
        g += (p.a_q_jb - p.b_l * pb2) - (pb2 - c) * p.b_l
    if strat_w > 0.0:
        g += strat_w * ((p.a_s - p.b_s * pb2) - (pb2 - c) * p.b_s)
    return g


def r1_gradient_structure(scenario: Scenario, regime: Regime, alpha: float) -> tuple[bool, float]:
    """(matched, strat_w) pair defining retailer 1's FOC system per regime."""
    if scenario.bundling == 0:
        return False, (0.0 if regime is Regime.R1_HIGH else 1.0)
    if regime is Regime.R1_HIGH:
        return scenario.pmg_r1, 0.0
    return False, (alpha if scenario.pmg_r2 else 1.0)


def r2_gradient_structure(scenario: Scenario, regime: Regime, alpha: float) -> tuple[bool, float]:
    """(include_q, strat_w) pair defining retailer 2's FOC per regime."""
    if scenario.bundling == 0:
        return True, (1.0 if regime is Regime.R1_HIGH else 0.0)
    if regime is Regime.R1_HIGH:
        share = alpha if scenario.pmg_r1 else 0.0
        return True, 1.0 - share
    return (not scenario.pmg_r2), 0.0


def gradient_r1_in_regime(
    params: MarketParams, scenario: Scenario, prices: PriceVector, regime: Regime
) -> np.ndarray:
    matched, w = r1_gradient_structure(scenario, regime, params.alpha)
    if scenario.bundling == 1:
        return _grad_r1_bundled(params, prices, matched=matched, strat_w=w)
    return _grad_r1_unbundled(params, prices, strat_w=w)


def gradient_r2_in_regime(
    params: MarketParams, scenario: Scenario, prices: PriceVector, regime: Regime
) -> float:
    include_q, w = r2_gradient_structure(scenario, regime, params.alpha)
    return _grad_r2(params, prices, include_q=include_q, strat_w=w)


def _resolve_regime_for_gradient(scenario: Scenario, prices: PriceVector) -> Regime:
    r1_eq = prices.r1_bundle_equivalent()
    if r1_eq == prices.pb2:
        raise AmbiguousKinkError(
            "gradient is ambiguous exactly at the regime kink "
            f"(bundle-equivalent price {r1_eq} equals pb2)"
        )
    return Regime.R1_HIGH if r1_eq > prices.pb2 else Regime.R1_LOW


def profit_gradient_r1(
    params: MarketParams, scenario: Scenario, prices: PriceVector
) -> np.ndarray:
    """Analytic gradient of retailer 1's profit w.r.t. its own prices,
    evaluated in the regime the prices lie in.

    Raises AmbiguousKinkError exactly at the regime boundary, where the two
    one-sided systems disagree.
    """
    effective_prices(params, scenario, prices)  # validates shape and finiteness
    regime = _resolve_regime_for_gradient(scenario, prices)
    return gradient_r1_in_regime(params, scenario, prices, regime)


def profit_gradient_r2(params: MarketParams, scenario: Scenario, prices: PriceVector) -> float:
    """Analytic derivative of retailer 2's profit w.r.t. pb2 (see
    profit_gradient_r1 for kink behavior)."""
    effective_prices(params, scenario, prices)
    regime = _resolve_regime_for_gradient(scenario, prices)
    return gradient_r2_in_regime(params, scenario, prices, regime)
