"""Sufficient condition sets A-F and per-regime concavity checks.

Each condition set is a list of parameter inequalities under which exactly one
price-ordering regime of a subgame admits a valid equilibrium.  The sets are
sufficient, not necessary: a failing report does not rule an equilibrium out.

The Hessians of the per-regime quadratic profits are constant matrices with
closed-form eigenvalues; negative definiteness (all eigenvalues < 0) holds
whenever b_l >= lambda_l and theta_l in (0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .market import MarketParams, Regime, Scenario
from .profits import r1_gradient_structure, r2_gradient_structure


class UnknownSetError(ValueError):
    """Requested condition set id is not one of A-F."""


@dataclass(frozen=True)
class ConditionCheck:
    """One inequality: `lhs relation rhs`, with the evaluated sides kept for
    diagnostics."""

    label: str
    lhs: float
    rhs: float
    relation: str  # ">=" or "<="
    satisfied: bool


@dataclass(frozen=True)
class ConditionReport:
    set_id: str
    inequalities: list[ConditionCheck] = field(default_factory=list)

    @property
    def all_satisfied(self) -> bool:
        return all(c.satisfied for c in self.inequalities)

    def summary(self) -> str:
        n_ok = sum(c.satisfied for c in self.inequalities)
        return f"set {self.set_id}: {n_ok}/{len(self.inequalities)} inequalities hold"


def _check(label: str, lhs: float, rhs: float, relation: str, slack: float) -> ConditionCheck:
    if relation == ">=":
        ok = lhs >= rhs - slack
    elif relation == "<=":
        ok = lhs <= rhs + slack
    else:
        raise ValueError(f"bad relation {relation!r}")
    return ConditionCheck(label=label, lhs=lhs, rhs=rhs, relation=relation, satisfied=ok)


def _div(num: float, den: float) -> float:
    """Ratio with signed-infinity semantics at a zero denominator (a zero
    demand base makes a comparison vacuously one-sided, not an error)."""
    if den != 0.0:
        return num / den
    if num > 0.0:
        return math.inf
    if num < 0.0:
        return -math.inf
    return math.nan


def check_condition_set(
    set_id: str,
    params: MarketParams,
    *,
    slack: float = 0.0,
    set_b_literal: bool = True,
) -> ConditionReport:
    """Evaluate every inequality of a sufficient condition set.

    Inequalities are weak and checked exactly by default; `slack` loosens
    them for boundary exploration.  Set B's last lower bound is stated with a
    duplicated term (a_q_jb + a_q_jb); the flag keeps that literal reading
    (default) or switches to the a_l_jb + a_q_jb reading that parallels set A.
    """
    p = params
    sid = set_id.upper()
    ratio = p.b_l / p.b_s
    sum_i = p.a_l_i1 + p.a_l_i2
    sum_j = p.a_l_jb + p.a_q_jb
    c = p.total_cost
    checks: list[ConditionCheck] = []

    def ge(label: str, lhs: float, rhs: float) -> None:
        checks.append(_check(label, lhs, rhs, ">=", slack))

    def le(label: str, lhs: float, rhs: float) -> None:
        checks.append(_check(label, lhs, rhs, "<=", slack))

    if sid == "A":
        ge("a_l_i1 + a_l_i2 >= 4/3 (a_l_jb + a_q_jb)", sum_i, 4.0 / 3.0 * sum_j)
        ge("a_l_ib >= (a_l_jb + a_q_jb)/2", p.a_l_ib, sum_j / 2.0)
        ge("a_q_ib >= a_q_jb", p.a_q_ib, p.a_q_jb)
        ge("a_q_jb >= a_l_jb", p.a_q_jb, p.a_l_jb)
        ge("(a_l_i1 + a_l_i2)/(2 a_s) >= b_l/b_s", _div(sum_i, 2.0 * p.a_s), ratio)
        ge("b_l/b_s >= (a_l_jb + a_q_jb)/(2 a_s)", ratio, _div(sum_j, 2.0 * p.a_s))
        ge("a_l_ib/a_s >= b_l/b_s", _div(p.a_l_ib, p.a_s), ratio)
        ge("b_l/b_s >= a_l_jb/a_s", ratio, _div(p.a_l_jb, p.a_s))
    elif sid == "B":
        ge("a_l_i1 + a_l_i2 >= 4/3 (a_l_jb + a_q_jb)", sum_i, 4.0 / 3.0 * sum_j)
        ge("a_l_ib + a_q_ib >= a_l_jb + a_q_jb", p.a_l_ib + p.a_q_ib, sum_j)
        ge("a_q_jb >= a_l_jb", p.a_q_jb, p.a_l_jb)
        ge("(a_l_i1 + a_l_i2)/(2 a_s) >= 4/3 b_l/b_s", _div(sum_i, 2.0 * p.a_s), 4.0 / 3.0 * ratio)
        if set_b_literal:
            # stated as (a_q_jb + a_q_jb); a_l_jb + a_q_jb is the likely intent
            # but the literal form is the default reading
            ge(
                "4/3 b_l/b_s >= (a_q_jb + a_q_jb)/(2 a_s)",
                4.0 / 3.0 * ratio,
                _div(2.0 * p.a_q_jb, 2.0 * p.a_s),
            )
        else:
            ge(
                "4/3 b_l/b_s >= (a_l_jb + a_q_jb)/(2 a_s)",
                4.0 / 3.0 * ratio,
                _div(sum_j, 2.0 * p.a_s),
            )
        ge("b_l/b_s >= a_l_jb/a_s", ratio, _div(p.a_l_jb, p.a_s))
    elif sid == "C":
        one_th = 1.0 + p.theta_l
        le("(a_l_i1 + a_l_i2)/((1+theta_l) a_s) <= b_l/b_s", _div(sum_i, one_th * p.a_s), ratio)
        le("b_l/b_s <= (a_l_jb + a_q_jb)/(2 a_s)", ratio, _div(sum_j, 2.0 * p.a_s))
        le("2 a_l_ib/((1+theta_l) a_s) <= b_l/b_s", _div(2.0 * p.a_l_ib, one_th * p.a_s), ratio)
        le("b_l/b_s <= a_l_jb/a_s", ratio, _div(p.a_l_jb, p.a_s))
        le("2 a_l_ib/(1+theta_l) <= (a_l_jb + a_q_jb)/2", 2.0 * p.a_l_ib / one_th, sum_j / 2.0)
        le("a_q_ib <= a_l_ib", p.a_q_ib, p.a_l_ib)
        le("a_l_ib <= a_q_jb", p.a_l_ib, p.a_q_jb)
        le("a_q_jb <= a_l_jb", p.a_q_jb, p.a_l_jb)
        le(
            "a_l_ib + a_q_ib + (c1+c2)/2 (2 b_l + b_s)/(2 b_l) lambda_l <= a_l_jb + a_q_jb",
            p.a_l_ib + p.a_q_ib + 0.5 * c * (2.0 * p.b_l + p.b_s) / (2.0 * p.b_l) * p.lambda_l,
            sum_j,
        )
        le("a_l_jb <= (c1+c2) b_l", p.a_l_jb, c * p.b_l)
        le("a_s <= (c1+c2)(1-alpha) b_s", p.a_s, c * (1.0 - p.alpha) * p.b_s)
    elif sid == "D":
        one_th = 1.0 + p.theta_l
        le("(a_l_i1 + a_l_i2)/((1+theta_l) a_s) <= b_l/b_s", _div(sum_i, one_th * p.a_s), ratio)
        le("b_l/b_s <= (a_l_jb + a_q_jb)/(2 a_s)", ratio, _div(sum_j, 2.0 * p.a_s))
        le("2 a_l_ib/((1+theta_l) a_s) <= b_l/b_s", _div(2.0 * p.a_l_ib, one_th * p.a_s), ratio)
        le("b_l/b_s <= a_l_jb/a_s", ratio, _div(p.a_l_jb, p.a_s))
        le(
            "2 (a_l_ib + a_q_ib)/(1+theta_l) + (c1+c2)/2 (2 b_l + b_s)/(2 b_l) lambda_l"
            " <= a_l_jb + a_q_jb",
            2.0 * (p.a_l_ib + p.a_q_ib) / one_th
            + 0.5 * c * (2.0 * p.b_l + p.b_s) / (2.0 * p.b_l) * p.lambda_l,
            sum_j,
        )
        le("a_q_jb <= a_l_jb", p.a_q_jb, p.a_l_jb)
        le("a_l_jb <= (c1+c2) b_l", p.a_l_jb, c * p.b_l)
        le("a_s <= (c1+c2)(1-alpha) b_s", p.a_s, c * (1.0 - p.alpha) * p.b_s)
    elif sid == "E":
        ge("a_l_ib + a_q_ib >= a_l_jb + a_q_jb", p.a_l_ib + p.a_q_ib, sum_j)
        ge("a_l_i1 + a_l_i2 >= a_l_jb + a_q_jb", sum_i, sum_j)
        ge("(a_l_i1 + a_l_i2)/(2 a_s) >= b_l/b_s", _div(sum_i, 2.0 * p.a_s), ratio)
        ge("(a_l_ib + a_q_ib)/(2 a_s) >= b_l/b_s", _div(p.a_l_ib + p.a_q_ib, 2.0 * p.a_s), ratio)
        ge("b_l/b_s >= (a_l_jb + a_q_jb)/(2 a_s)", ratio, _div(sum_j, 2.0 * p.a_s))
    elif sid == "F":
        three_th = 3.0 + p.theta_l
        le(
            "a_l_ib + a_q_ib <= (3+theta_l)/4 (a_l_jb + a_q_jb)",
            p.a_l_ib + p.a_q_ib,
            three_th / 4.0 * sum_j,
        )
        le("a_l_i1 + a_l_i2 <= a_l_jb + a_q_jb", sum_i, sum_j)
        le("(a_l_i1 + a_l_i2)/(2 a_s) <= b_l/b_s", _div(sum_i, 2.0 * p.a_s), ratio)
        le(
            "4 (a_l_ib + a_q_ib)/((3+theta_l) 2 a_s) <= b_l/b_s",
            _div(4.0 * (p.a_l_ib + p.a_q_ib), three_th * 2.0 * p.a_s),
            ratio,
        )
        le("b_l/b_s <= (a_l_jb + a_q_jb)/(2 a_s)", ratio, _div(sum_j, 2.0 * p.a_s))
    else:
        raise UnknownSetError(f"unknown condition set {set_id!r}; expected one of A-F")
    return ConditionReport(set_id=sid, inequalities=checks)


CONDITION_SET_IDS = ("A", "B", "C", "D", "E", "F")


# ---------------------------------------------------------------------------
# Hessians of the per-regime quadratic profits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HessianReport:
    """Constant Hessian of a retailer's profit within a regime.

    `eigenvalues` are the closed-form expressions; `eigenvalues_numeric` come
    from a symmetric eigensolve of the same matrix.  Both are sorted
    ascending.  t1 = b_l + lambda_l and t2 = b_l theta_l + lambda_l are the
    shorthands the closed forms are written in.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvalues_numeric: np.ndarray
    negative_definite: bool
    t1: float
    t2: float


def _report(matrix: np.ndarray, closed: np.ndarray, params: MarketParams) -> HessianReport:
    numeric = np.linalg.eigvalsh(matrix)
    closed = np.sort(np.asarray(closed, dtype=float))
    return HessianReport(
        matrix=matrix,
        eigenvalues=closed,
        eigenvalues_numeric=numeric,
        negative_definite=bool(np.all(numeric < 0.0)),
        t1=params.t1,
        t2=params.t2,
    )


def _hessian_r1_bundled(params: MarketParams, *, matched: bool, strat_w: float) -> HessianReport:
    p = params
    t1, t2, lam = p.t1, p.t2, p.lambda_l
    e1 = -2.0 * p.b_l * (1.0 - p.theta_l)
    if matched:
        m = 2.0 * np.array([[-t1, -t2, lam], [-t2, -t1, lam], [lam, lam, -t1]])
        root = math.sqrt((p.b_l * p.theta_l + lam) ** 2 + 8.0 * lam**2)
        mid = 2.0 * p.b_l + 3.0 * lam + p.b_l * p.theta_l
        closed = np.array([e1, -mid - root, -mid + root])
    else:
        corner = -2.0 * t1 - strat_w * p.b_s
        m = 2.0 * np.array(
            [[-t1, -t2, 1.5 * lam], [-t2, -t1, 1.5 * lam], [1.5 * lam, 1.5 * lam, corner]]
        )
        psi = math.sqrt((p.b_l * (1.0 - p.theta_l) + strat_w * p.b_s) ** 2 + 18.0 * lam**2)
        mid = strat_w * p.b_s + p.b_l * p.theta_l + 3.0 * p.b_l + 4.0 * lam
        closed = np.array([e1, -mid - psi, -mid + psi])
    return _report(m, closed, params)


def _hessian_r1_unbundled(params: MarketParams, *, strat_w: float) -> HessianReport:
    p = params
    diag = -6.0 * p.b_l - 2.0 * strat_w * p.b_s
    off = -(4.0 + 2.0 * p.theta_l) * p.b_l - 2.0 * strat_w * p.b_s
    m = np.array([[diag, off], [off, diag]])
    e1 = -2.0 * p.b_l * (1.0 - p.theta_l)
    e2 = -2.0 * p.b_l * (5.0 + p.theta_l) - 4.0 * strat_w * p.b_s
    return _report(m, np.array([e1, e2]), params)


def hessian_r1(params: MarketParams, scenario: Scenario, regime: Regime) -> HessianReport:
    """Hessian of retailer 1's profit in its own prices for a fixed regime
    (3x3 under bundling, 2x2 otherwise)."""
    matched, w = r1_gradient_structure(scenario, regime, params.alpha)
    if scenario.bundling == 1:
        return _hessian_r1_bundled(params, matched=matched, strat_w=w)
    return _hessian_r1_unbundled(params, strat_w=w)


def hessian_r2(params: MarketParams, scenario: Scenario, regime: Regime) -> HessianReport:
    """Retailer 2's scalar second derivative in pb2, wrapped as a 1x1 report."""
    include_q, w = r2_gradient_structure(scenario, regime, params.alpha)
    value = -2.0 * params.b_l * (2.0 if include_q else 1.0) - 2.0 * w * params.b_s
    m = np.array([[value]])
    return _report(m, np.array([value]), params)
