"""Parameter sweeps, the symmetric-data table, and CSV/JSON emission.

Sweeps evaluate the policy comparison on a rectangular grid (axis1 outer,
axis2 inner, exactly steps1 x steps2 cells).  Cells violating a model
invariant or lacking an equilibrium on either side of the bundling
comparison are emitted with exists=0 and empty value fields, never skipped.
Cell evaluation is order-independent, so grids may be computed on a thread
pool; output assembly restores grid order, keeping files byte-identical
across runs and thread counts.

Profits in emitted files are reported in thousands of currency; the engine
itself works in raw currency.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .market import InvalidParameterError, MarketParams, Scenario
from .policy import PolicyComparison, compare_policies, solve_subgame

TABLE_SCENARIOS = (
    Scenario.bundled(True, True),
    Scenario.bundled(True, False),
    Scenario.bundled(False, True),
    Scenario.bundled(False, False),
    Scenario.no_bundle(),
)

TABLE_COLUMNS = (
    "scenario",
    "p_r1_i1",
    "p_r1_i2",
    "p_r1_b",
    "p_r2_b",
    "d_l_i1",
    "d_l_i2",
    "d_l_ib",
    "d_q_ib",
    "d_l_jb",
    "d_q_jb",
    "d_s",
    "pi_r1",
    "pi_r2",
    "total_welfare",
)

SWEEP_COLUMNS_BASE = ("exists", "delta_pi_B", "best_regime")


@dataclass(frozen=True)
class AxisSpec:
    name: str
    lo: float
    hi: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True)
class Panel:
    label: str
    overrides: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class SweepSpec:
    axis1: AxisSpec
    axis2: AxisSpec
    fixed: dict[str, float] = field(default_factory=dict)
    panels: tuple[Panel, ...] = (Panel(label="default"),)


@dataclass(frozen=True)
class GridCell:
    axis1_value: float
    axis2_value: float
    exists: bool
    delta_pi_B: float | None  # raw currency; emitted in thousands
    best_regime: str | None
    existence: dict[str, bool] = field(default_factory=dict)


def build_symmetric_table(params: MarketParams, *, tol: float = 1e-9) -> list[dict[str, object]]:
    """One row per strategy configuration with the selected equilibrium's
    prices, demands, and profits (profits in thousands).

    For the no-bundling row the bundle-price column carries the item-price
    sum, the bundle-equivalent price a joint purchase pays.
    """
    rows: list[dict[str, object]] = []
    for scenario in TABLE_SCENARIOS:
        solution = solve_subgame(params, scenario, tol=tol)
        row: dict[str, object] = {"scenario": scenario.label()}
        if solution.chosen is None:
            row.update({name: None for name in TABLE_COLUMNS[1:]})
        else:
            r = solution.chosen
            d = r.demands
            row.update(
                {
                    "p_r1_i1": r.prices.p1,
                    "p_r1_i2": r.prices.p2,
                    "p_r1_b": r.prices.r1_bundle_equivalent(),
                    "p_r2_b": r.prices.pb2,
                    "d_l_i1": d.d_l_i1,
                    "d_l_i2": d.d_l_i2,
                    "d_l_ib": d.d_l_ib,
                    "d_q_ib": d.d_q_ib,
                    "d_l_jb": d.d_l_jb,
                    "d_q_jb": d.d_q_jb,
                    "d_s": d.d_s,
                    "pi_r1": r.profits.pi_r1 / 1000.0,
                    "pi_r2": r.profits.pi_r2 / 1000.0,
                    "total_welfare": r.profits.welfare / 1000.0,
                }
            )
        rows.append(row)
    return rows


def _cell(base: MarketParams, spec: SweepSpec, panel: Panel, v1: float, v2: float) -> GridCell:
    overrides = dict(spec.fixed)
    overrides.update(panel.overrides)
    overrides[spec.axis1.name] = float(v1)
    overrides[spec.axis2.name] = float(v2)
    try:
        params = base.replace(**overrides)
    except InvalidParameterError:
        # e.g. lambda_l above b_l on part of a sweep range: not an admissible
        # parameter point, recorded as non-existent rather than skipped
        return GridCell(float(v1), float(v2), exists=False, delta_pi_B=None, best_regime=None)
    comparison: PolicyComparison = compare_policies(params)
    exists = comparison.delta_pi_B is not None
    return GridCell(
        axis1_value=float(v1),
        axis2_value=float(v2),
        exists=exists,
        delta_pi_B=comparison.delta_pi_B if exists else None,
        best_regime=comparison.best_pmg_regime.label() if exists else None,
        existence=comparison.existence,
    )


def run_panel(
    base: MarketParams, spec: SweepSpec, panel: Panel, *, threads: int = 1
) -> list[GridCell]:
    """Evaluate one panel's full grid in deterministic (axis1 outer, axis2
    inner) order."""
    points = [(v1, v2) for v1 in spec.axis1.values() for v2 in spec.axis2.values()]
    if threads <= 1:
        return [_cell(base, spec, panel, v1, v2) for v1, v2 in points]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda pt: _cell(base, spec, panel, pt[0], pt[1]), points))


def run_sweep(
    base: MarketParams, spec: SweepSpec, *, threads: int = 1
) -> dict[str, list[GridCell]]:
    return {panel.label: run_panel(base, spec, panel, threads=threads) for panel in spec.panels}


def _fmt(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def write_table_csv(rows: list[dict[str, object]], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TABLE_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row.get(col)) for col in TABLE_COLUMNS])


def sweep_rows(spec: SweepSpec, cells: list[GridCell]) -> list[list[str]]:
    header = [spec.axis1.name, spec.axis2.name, *SWEEP_COLUMNS_BASE]
    out = [header]
    for cell in cells:
        delta_k = cell.delta_pi_B / 1000.0 if cell.delta_pi_B is not None else None
        out.append(
            [
                _fmt(cell.axis1_value),
                _fmt(cell.axis2_value),
                "1" if cell.exists else "0",
                _fmt(delta_k),
                _fmt(cell.best_regime),
            ]
        )
    return out


def write_sweep_csv(spec: SweepSpec, cells: list[GridCell], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerows(sweep_rows(spec, cells))


def write_table_json(rows: list[dict[str, object]], path: str | Path) -> None:
    payload = [
        {col: (_fmt(row.get(col)) if row.get(col) is not None else None) for col in TABLE_COLUMNS}
        for row in rows
    ]
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def write_sweep_json(spec: SweepSpec, cells: list[GridCell], path: str | Path) -> None:
    header, *rows = sweep_rows(spec, cells)
    payload = [
        {key: (value if value != "" else None) for key, value in zip(header, row)} for row in rows
    ]
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")
