"""Market primitives for a two-retailer complementary-goods pricing game.

Retailer 1 sells items 1 and 2 and, when it bundles (B=1), a bundle at its own
price; retailer 2 sells a bundle only.  Demand comes from three customer
segments with linear demand curves: loyal price-unaware, loyal price-aware,
and non-loyal price-aware (strategic).  Price-matching guarantees (PMGs) act
at the bundle level: they replace posted bundle prices by effective prices for
the price-aware segments before demands are evaluated.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum


class InvalidParameterError(ValueError):
    """A market parameter violates a model assumption."""


class InvalidPriceError(ValueError):
    """A price vector is malformed for the given scenario."""


class Regime(Enum):
    """Active price ordering.

    R1_HIGH: retailer 1's bundle-equivalent price (bundle price under B=1,
    item-price sum under B=0) is >= retailer 2's bundle price.  Ties are
    labelled R1_HIGH; both orderings produce identical demands at a tie.
    """

    R1_HIGH = "r1_high"
    R1_LOW = "r1_low"


@dataclass(frozen=True)
class MarketParams:
    """Demand bases, sensitivities, complementarities, costs, and the
    strategic split.

    Demand bases are quantities; b_l and b_s are own-price sensitivities
    (quantity per currency); theta_l is the dimensionless item-level
    complementarity; lambda_l couples bundle demand to the gap between the
    bundle price and the item-price sum; alpha is the fraction of strategic
    demand served by retailer 1 when both retailers end up offering the same
    effective bundle price.
    """

    a_l_i1: float = 100.0
    a_l_i2: float = 100.0
    a_l_ib: float = 100.0
    a_q_ib: float = 100.0
    a_l_jb: float = 100.0
    a_q_jb: float = 100.0
    a_s: float = 100.0
    b_l: float = 0.4
    b_s: float = 0.4
    theta_l: float = 0.5
    lambda_l: float = 0.3
    c1: float = 10.0
    c2: float = 10.0
    alpha: float = 0.5

    def __post_init__(self) -> None:
        for name in ("a_l_i1", "a_l_i2", "a_l_ib", "a_q_ib", "a_l_jb", "a_q_jb", "a_s"):
            if not getattr(self, name) >= 0.0:
                raise InvalidParameterError(f"demand base {name} must be >= 0")
        if not self.b_l > 0.0:
            raise InvalidParameterError("own-price sensitivity b_l must be > 0")
        if not self.b_s > 0.0:
            raise InvalidParameterError("own-price sensitivity b_s must be > 0")
        if not 0.0 < self.theta_l < 1.0:
            raise InvalidParameterError("item complementarity theta_l must lie in (0, 1)")
        if not self.lambda_l > 0.0:
            raise InvalidParameterError("bundle complementarity lambda_l must be > 0")
        if self.b_l < self.lambda_l:
            raise InvalidParameterError(
                "b_l must be >= lambda_l (own-price effects dominate the bundle gap)"
            )
        if self.c1 < 0.0 or self.c2 < 0.0:
            raise InvalidParameterError("unit costs c1, c2 must be >= 0")
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidParameterError("strategic split alpha must lie in [0, 1]")

    @classmethod
    def baseline(cls, **overrides: float) -> "MarketParams":
        """Symmetric baseline: all bases 100, b_l=b_s=0.4, theta=0.5,
        lambda=0.3, c1=c2=10, alpha=0.5."""
        return cls(**overrides)

    def replace(self, **changes: float) -> "MarketParams":
        return dataclasses.replace(self, **changes)

    @property
    def total_cost(self) -> float:
        return self.c1 + self.c2

    # shorthands used throughout the quadratic algebra
    @property
    def t1(self) -> float:
        return self.b_l + self.lambda_l

    @property
    def t2(self) -> float:
        return self.b_l * self.theta_l + self.lambda_l


@dataclass(frozen=True)
class Scenario:
    """Retailer 1's bundling flag plus each retailer's PMG flag.

    PMGs are meaningful only at the bundle level, so a no-bundling scenario is
    canonicalized with both PMG flags off.
    """

    bundling: int
    pmg_r1: bool = False
    pmg_r2: bool = False

    def __post_init__(self) -> None:
        if self.bundling not in (0, 1):
            raise InvalidParameterError("bundling flag must be 0 or 1")
        if self.bundling == 0 and (self.pmg_r1 or self.pmg_r2):
            object.__setattr__(self, "pmg_r1", False)
            object.__setattr__(self, "pmg_r2", False)

    @classmethod
    def bundled(cls, pmg_r1: bool, pmg_r2: bool) -> "Scenario":
        return cls(bundling=1, pmg_r1=pmg_r1, pmg_r2=pmg_r2)

    @classmethod
    def no_bundle(cls) -> "Scenario":
        return cls(bundling=0)

    def label(self) -> str:
        if self.bundling == 0:
            return "NoBundle"
        one = "CM" if self.pmg_r1 else "noCM"
        two = "CM" if self.pmg_r2 else "noCM"
        return f"{one},{two}"


@dataclass(frozen=True)
class PriceVector:
    """Posted prices: retailer 1's item prices p1, p2, its bundle price pb1
    (None when bundling is off), and retailer 2's bundle price pb2."""

    p1: float
    p2: float
    pb1: float | None
    pb2: float

    def r1_bundle_equivalent(self) -> float:
        """The price a joint purchase at retailer 1 compares at: pb1 when a
        bundle is posted, the item-price sum otherwise."""
        return self.pb1 if self.pb1 is not None else self.p1 + self.p2

    def present(self) -> tuple[float, ...]:
        if self.pb1 is None:
            return (self.p1, self.p2, self.pb2)
        return (self.p1, self.p2, self.pb1, self.pb2)

    def sup_distance(self, other: "PriceVector") -> float:
        a, b = self.present(), other.present()
        if len(a) != len(b):
            raise InvalidPriceError("cannot compare price vectors of different shapes")
        return max(abs(x - y) for x, y in zip(a, b))


@dataclass(frozen=True)
class EffectivePrices:
    """Bundle prices after PMG resolution.

    tilde_pb1 / tilde_pb2 are what loyal price-aware customers actually pay at
    each retailer; hat_pb is the lowest bundle-equivalent price in the market,
    which strategic customers buy at.
    """

    tilde_pb1: float
    tilde_pb2: float
    hat_pb: float
    regime: Regime


@dataclass(frozen=True)
class DemandProfile:
    """The seven segment demands at a price vector.

    Values are the raw linear forms and may be negative; nonnegativity is an
    equilibrium admissibility condition checked by the selection layer, not a
    truncation applied here.
    """

    d_l_i1: float
    d_l_i2: float
    d_l_ib: float
    d_q_ib: float
    d_l_jb: float
    d_q_jb: float
    d_s: float

    def as_tuple(self) -> tuple[float, ...]:
        return (
            self.d_l_i1,
            self.d_l_i2,
            self.d_l_ib,
            self.d_q_ib,
            self.d_l_jb,
            self.d_q_jb,
            self.d_s,
        )

    def min(self) -> float:
        return min(self.as_tuple())


def _validate_prices(scenario: Scenario, prices: PriceVector) -> None:
    if scenario.bundling == 1 and prices.pb1 is None:
        raise InvalidPriceError("bundle price pb1 is required when bundling is on")
    if scenario.bundling == 0 and prices.pb1 is not None:
        raise InvalidPriceError("bundle price pb1 must be absent when bundling is off")
    for value in prices.present():
        if not math.isfinite(value):
            raise InvalidPriceError(f"prices must be finite, got {value!r}")


def effective_prices(
    params: MarketParams, scenario: Scenario, prices: PriceVector
) -> EffectivePrices:
    """Resolve PMGs into the effective bundle prices faced by price-aware
    customers.

    A retailer with a PMG charges the rival's bundle price whenever the rival
    posts strictly less; without a PMG the effective price is the posted one.
    Strategic customers always face the market minimum.  Under B=0 retailer
    1's bundle-equivalent price is the item-price sum and no PMGs apply.
    """
    _validate_prices(scenario, prices)
    r1_eq = prices.r1_bundle_equivalent()
    pb2 = prices.pb2
    regime = Regime.R1_HIGH if r1_eq >= pb2 else Regime.R1_LOW
    if scenario.bundling == 0:
        return EffectivePrices(
            tilde_pb1=r1_eq, tilde_pb2=pb2, hat_pb=min(r1_eq, pb2), regime=regime
        )
    pb1 = prices.pb1
    tilde_pb1 = pb2 if (scenario.pmg_r1 and pb1 >= pb2) else pb1
    tilde_pb2 = pb1 if (scenario.pmg_r2 and pb2 > pb1) else pb2
    return EffectivePrices(
        tilde_pb1=tilde_pb1, tilde_pb2=tilde_pb2, hat_pb=min(pb1, pb2), regime=regime
    )


def effective_prices_in_regime(
    params: MarketParams, scenario: Scenario, prices: PriceVector, regime: Regime
) -> EffectivePrices:
    """Effective prices under a presumed price ordering, regardless of the
    ordering the posted prices actually satisfy.

    Closed-form equilibrium candidates are derived per regime; evaluating a
    candidate that violates its own regime still has to use the regime's
    algebra so that residuals and profits refer to the branch that produced it.
    """
    _validate_prices(scenario, prices)
    r1_eq = prices.r1_bundle_equivalent()
    pb2 = prices.pb2
    if scenario.bundling == 0:
        hat = pb2 if regime is Regime.R1_HIGH else r1_eq
        return EffectivePrices(tilde_pb1=r1_eq, tilde_pb2=pb2, hat_pb=hat, regime=regime)
    pb1 = prices.pb1
    if regime is Regime.R1_HIGH:
        tilde_pb1 = pb2 if scenario.pmg_r1 else pb1
        tilde_pb2 = pb2
        hat = pb2
    else:
        tilde_pb1 = pb1
        tilde_pb2 = pb1 if scenario.pmg_r2 else pb2
        hat = pb1
    return EffectivePrices(tilde_pb1=tilde_pb1, tilde_pb2=tilde_pb2, hat_pb=hat, regime=regime)


def demands(
    params: MarketParams,
    scenario: Scenario,
    prices: PriceVector,
    eff: EffectivePrices,
) -> DemandProfile:
    """Evaluate all seven segment demands at a price vector.

    `eff` must have been computed from the same scenario and prices (or from a
    presumed regime of them).  Demands are affine in prices; negative values
    are returned as-is.
    """
    p = params
    p1, p2, pb2 = prices.p1, prices.p2, prices.pb2
    if scenario.bundling == 1:
        pb1 = prices.pb1
        gap = p.lambda_l * (pb1 - p1 - p2)
        d_l_i1 = p.a_l_i1 - p.b_l * p1 - p.b_l * p.theta_l * p2 + gap
        d_l_i2 = p.a_l_i2 - p.b_l * p.theta_l * p1 - p.b_l * p2 + gap
        d_l_ib = p.a_l_ib - p.b_l * pb1 + p.lambda_l * (p1 + p2 - pb1)
        d_q_ib = p.a_q_ib - p.b_l * eff.tilde_pb1 + p.lambda_l * (p1 + p2 - eff.tilde_pb1)
    else:
        s = p1 + p2
        d_l_i1 = p.a_l_i1 - p.b_l * p1 - p.b_l * p.theta_l * p2
        d_l_i2 = p.a_l_i2 - p.b_l * p.theta_l * p1 - p.b_l * p2
        d_l_ib = p.a_l_ib - p.b_l * s
        d_q_ib = p.a_q_ib - p.b_l * s
    d_l_jb = p.a_l_jb - p.b_l * pb2
    d_q_jb = p.a_q_jb - p.b_l * eff.tilde_pb2
    d_s = p.a_s - p.b_s * eff.hat_pb
    return DemandProfile(d_l_i1, d_l_i2, d_l_ib, d_q_ib, d_l_jb, d_q_jb, d_s)
