"""Rendering computed objects to text, JSON documents and CSV.

Amounts stay exact Fractions until they reach this module.  Reports
round half-even to two decimals; with raw=True they emit exact strings
instead (integer, terminating decimal or p/q).  JSON documents carry
amounts as strings either way, so no consumer ever sees a float.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Tuple

from .breakeven import SeasonalSolvency, ThresholdReport
from .cash_transfer import CashDecompositionTable, WaterfallReport
from .errors import AtCriticalProduction
from .leverage import LeverageVariant, RuptureMatrix, elasticity_wrt_volume
from .model import CostStructure
from .simulate import CashSimulation, MonthlyRow
from .surplus import CafSurplusReport, SurplusReport
from .numeric import decimal_str, exact_str


def amount_str(value: Fraction, raw: bool = False) -> str:
    return exact_str(value) if raw else decimal_str(value)


def render_json(doc: Mapping) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------- thresholds

def threshold_doc(report: ThresholdReport, raw: bool = False) -> dict:
    components = {
        key: amount_str(value, raw) for key, value in report.components.as_mapping().items()
    }
    doc = {
        "liquidity_threshold": amount_str(report.liquidity_threshold, raw),
        "solvency_threshold": amount_str(report.solvency_threshold, raw),
        "binding_formula": report.binding_formula.value,
        "modulation_effective": report.components.modulation_effective,
        "components": components,
    }
    if report.capacity is not None:
        doc["capacity"] = amount_str(report.capacity, raw)
    return doc


def threshold_text(report: ThresholdReport, raw: bool = False) -> str:
    lines = [
        f"liquidity threshold (units): {amount_str(report.liquidity_threshold, raw)}",
        f"solvency threshold (units): {amount_str(report.solvency_threshold, raw)}",
        f"binding formula: {report.binding_formula.value}",
        "components:",
    ]
    for key, value in report.components.as_mapping().items():
        lines.append(f"  {key}: {amount_str(value, raw)}")
    lines.append(f"  modulation effective: {'yes' if report.components.modulation_effective else 'no'}")
    if report.capacity is not None:
        lines.append(f"cycle capacity (units): {amount_str(report.capacity, raw)}")
    return "\n".join(lines) + "\n"


def seasonal_doc(result: SeasonalSolvency, raw: bool = False) -> dict:
    return {
        "solvency_day": result.solvency_day,
        "solvency_month": result.solvency_month,
        "solvency_units": result.solvency_units,
        "monthly": [
            {
                "month": row.month,
                "units_sold": row.units_sold,
                "receipts": amount_str(row.receipts, raw),
                "disbursements": amount_str(row.disbursements, raw),
                "balance_end": amount_str(row.balance_end, raw),
            }
            for row in result.monthly
        ],
    }


def seasonal_text(result: SeasonalSolvency, raw: bool = False) -> str:
    lines = [
        f"solvency reached on day {result.solvency_day} "
        f"(month {result.solvency_month}, {result.solvency_units} units sold)",
        "month  units      receipts  disbursements       balance",
    ]
    for row in result.monthly:
        lines.append(
            f"{row.month:>5}  {row.units_sold:>5}  {amount_str(row.receipts, raw):>12}"
            f"  {amount_str(row.disbursements, raw):>13}  {amount_str(row.balance_end, raw):>12}"
        )
    return "\n".join(lines) + "\n"


def simulation_doc(simulation: CashSimulation, raw: bool = False) -> dict:
    return {
        "horizon_days": simulation.horizon_days,
        "solvency_day": simulation.solvency_day,
        "solvency_month": simulation.solvency_month,
        "solvency_units": simulation.solvency_units,
        "first_solvent_day": simulation.first_solvent_day,
        "final_balance": amount_str(simulation.balance[-1], raw),
        "monthly": [
            {
                "month": row.month,
                "units_sold": row.units_sold,
                "receipts": amount_str(row.receipts, raw),
                "disbursements": amount_str(row.disbursements, raw),
                "balance_end": amount_str(row.balance_end, raw),
            }
            for row in simulation.monthly()
        ],
    }


def simulation_text(simulation: CashSimulation, raw: bool = False) -> str:
    if simulation.solvency_day is None:
        head = f"solvency not reached within {simulation.horizon_days} days"
    else:
        head = (
            f"solvency reached on day {simulation.solvency_day} "
            f"(month {simulation.solvency_month}, {simulation.solvency_units} units sold)"
        )
    lines = [head, "month  units      receipts  disbursements       balance"]
    for row in simulation.monthly():
        lines.append(
            f"{row.month:>5}  {row.units_sold:>5}  {amount_str(row.receipts, raw):>12}"
            f"  {amount_str(row.disbursements, raw):>13}  {amount_str(row.balance_end, raw):>12}"
        )
    return "\n".join(lines) + "\n"


def monthly_csv(rows: Sequence[MonthlyRow], raw: bool = False) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["month", "units_sold", "receipts", "disbursements", "balance_end"])
    for row in rows:
        writer.writerow(
            [
                row.month,
                row.units_sold,
                amount_str(row.receipts, raw),
                amount_str(row.disbursements, raw),
                amount_str(row.balance_end, raw),
            ]
        )
    return out.getvalue()


def daily_csv(simulation: CashSimulation, raw: bool = False) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["day", "cumulative_units", "receipts", "disbursements", "balance"])
    for day in range(simulation.horizon_days + 1):
        writer.writerow(
            [
                day,
                simulation.cumulative_units[day],
                amount_str(simulation.receipts[day], raw),
                amount_str(simulation.disbursements[day], raw),
                amount_str(simulation.balance[day], raw),
            ]
        )
    return out.getvalue()


# ------------------------------------------------------------------ leverage

def leverage_doc(
    matrix: RuptureMatrix,
    elasticity_volume: Optional[Fraction],
    elasticity_margin: Optional[Fraction],
    raw: bool = False,
) -> dict:
    def cell_doc(cell):
        return {
            "fixed_base": amount_str(cell.fixed_base, raw),
            "critical_production": amount_str(cell.critical_production, raw),
            "critical_margin": amount_str(cell.critical_margin, raw),
        }

    return {
        "quantity": amount_str(matrix.quantity, raw),
        "elasticity_wrt_volume": None
        if elasticity_volume is None
        else amount_str(elasticity_volume, raw),
        "elasticity_wrt_margin": None
        if elasticity_margin is None
        else amount_str(elasticity_margin, raw),
        "rupture_matrix": {
            cell.variant.value: cell_doc(cell) for cell in matrix.cells
        },
    }


def leverage_text(
    matrix: RuptureMatrix,
    elasticity_volume: Optional[Fraction],
    elasticity_margin: Optional[Fraction],
    raw: bool = False,
) -> str:
    def show(value):
        return "diverges" if value is None else amount_str(value, raw)

    lines = [
        f"quantity: {amount_str(matrix.quantity, raw)}",
        f"treasury elasticity wrt volume: {show(elasticity_volume)}",
        f"treasury elasticity wrt margin: {show(elasticity_margin)}",
        "rupture matrix:",
        "  variant    fixed base    critical production    critical margin",
    ]
    for cell in matrix.cells:
        lines.append(
            f"  {cell.variant.value:<9}  {amount_str(cell.fixed_base, raw):>10}"
            f"  {amount_str(cell.critical_production, raw):>19}"
            f"  {amount_str(cell.critical_margin, raw):>15}"
        )
    return "\n".join(lines) + "\n"


def elasticity_curve_rows(
    cost: CostStructure,
    quantities: Iterable[Fraction],
    variant: LeverageVariant = LeverageVariant.TERM,
) -> Tuple[Tuple[Fraction, Optional[Fraction]], ...]:
    """Elasticity sampled on a grid; None where it diverges."""
    rows = []
    for quantity in quantities:
        try:
            value = elasticity_wrt_volume(cost, quantity, variant)
        except AtCriticalProduction:
            value = None
        rows.append((quantity, value))
    return tuple(rows)


def elasticity_curve_csv(
    rows: Sequence[Tuple[Fraction, Optional[Fraction]]], raw: bool = False
) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["quantity", "elasticity"])
    for quantity, value in rows:
        writer.writerow(
            [amount_str(quantity, raw), "" if value is None else amount_str(value, raw)]
        )
    return out.getvalue()


def indifference_csv(
    curves: Mapping[str, Sequence[Tuple[Fraction, Fraction]]], raw: bool = False
) -> str:
    """One row per (curve, quantity, margin) point."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["fixed_charges", "quantity", "margin"])
    for label, points in curves.items():
        for quantity, margin in points:
            writer.writerow([label, amount_str(quantity, raw), amount_str(margin, raw)])
    return out.getvalue()


# ------------------------------------------------------------------- surplus

def surplus_doc(report: SurplusReport, raw: bool = False) -> dict:
    def entries(side):
        return [
            {
                "source": entry.source,
                "flow_id": entry.flow_id,
                "amount": amount_str(entry.amount, raw),
            }
            for entry in side
        ]

    return {
        "productivity_surplus": amount_str(report.productivity_surplus, raw),
        "resources": entries(report.resources),
        "uses": entries(report.uses),
        "total_resources": amount_str(report.total_resources, raw),
        "total_uses": amount_str(report.total_uses, raw),
        "balance_ok": report.balance_ok,
        "result_change_before_tax": amount_str(report.result_change_before_tax, raw),
        "tax_change": amount_str(report.tax_change, raw),
    }


def surplus_text(report: SurplusReport, raw: bool = False) -> str:
    lines = [f"productivity surplus: {amount_str(report.productivity_surplus, raw)}"]
    for title, side in (("resources", report.resources), ("uses", report.uses)):
        lines.append(f"{title}:")
        if not side:
            lines.append("  (none)")
        for entry in side:
            origin = entry.flow_id if entry.flow_id else entry.source
            lines.append(f"  {entry.source:<12} {origin:<16} {amount_str(entry.amount, raw):>12}")
    lines.append(
        f"totals: resources {amount_str(report.total_resources, raw)}"
        f" / uses {amount_str(report.total_uses, raw)}"
        f" ({'balanced' if report.balance_ok else 'UNBALANCED'})"
    )
    return "\n".join(lines) + "\n"


def caf_surplus_doc(report: CafSurplusReport, raw: bool = False) -> dict:
    return {
        "noncash_quantity_effect": amount_str(report.noncash_quantity_effect, raw),
        "noncash_price_effect": amount_str(report.noncash_price_effect, raw),
        "noncash_cross_effect": amount_str(report.noncash_cross_effect, raw),
        "result_change": amount_str(report.result_change, raw),
        "total": amount_str(report.total, raw),
    }


# ---------------------------------------------------------------- cash table

_TABLE_ROWS = (
    ("1", "productivity_receipts"),
    ("2", "productivity_disbursements"),
    ("I", "productivity_cash_flow"),
    ("3a", "price_cut_receipts"),
    ("3b", "slower_collections"),
    ("4a", "cost_rise_disbursements"),
    ("4b", "faster_settlements"),
    ("5", "tax_increase"),
    ("II", "transferred_total"),
    ("6a", "price_rise_receipts"),
    ("6b", "faster_collections"),
    ("7a", "cost_cut_disbursements"),
    ("7b", "slower_settlements"),
    ("8", "tax_relief"),
    ("III", "inherited_total"),
    ("9", "noncash_quantity_effect"),
    ("10", "noncash_price_effect"),
    ("11", "noncash_cross_effect"),
    ("12", "settled_result_change"),
    ("IV", "settled_caf_change"),
    ("V", "deferred_net_cash"),
    ("VI", "operating_cash_surplus"),
)


def cash_table_values(table: CashDecompositionTable) -> dict:
    """Flat mapping of every row of the decomposition, exact values."""
    variation = table.variation
    return {
        "productivity_receipts": variation.productivity_receipts,
        "productivity_disbursements": variation.productivity_disbursements,
        "productivity_cash_flow": variation.productivity_cash_flow,
        "price_cut_receipts": variation.transferred.price_cut_receipts,
        "slower_collections": variation.transferred.slower_collections,
        "cost_rise_disbursements": variation.transferred.cost_rise_disbursements,
        "faster_settlements": variation.transferred.faster_settlements,
        "tax_increase": variation.transferred.tax_increase,
        "transferred_total": variation.transferred.total,
        "price_rise_receipts": variation.inherited.price_rise_receipts,
        "faster_collections": variation.inherited.faster_collections,
        "cost_cut_disbursements": variation.inherited.cost_cut_disbursements,
        "slower_settlements": variation.inherited.slower_settlements,
        "tax_relief": variation.inherited.tax_relief,
        "inherited_total": variation.inherited.total,
        "noncash_quantity_effect": variation.noncash_quantity_effect,
        "noncash_price_effect": variation.noncash_price_effect,
        "noncash_cross_effect": variation.noncash_cross_effect,
        "settled_result_change": variation.settled_result_change,
        "settled_caf_change": variation.settled_caf_change,
        "deferred_net_cash": table.deferred_net_cash,
        "operating_cash_surplus": table.operating_cash_surplus,
    }


def cash_table_doc(table: CashDecompositionTable, raw: bool = False) -> dict:
    values = cash_table_values(table)
    return {
        "period": table.period,
        "transition": [table.variation.period_prev, table.variation.period_curr],
        "rows": {name: amount_str(values[name], raw) for _, name in _TABLE_ROWS},
    }


def cash_table_text(table: CashDecompositionTable, raw: bool = False) -> str:
    values = cash_table_values(table)
    lines = [
        f"cash decomposition at period {table.period} "
        f"(transition {table.variation.period_prev} to {table.variation.period_curr})"
    ]
    for mark, name in _TABLE_ROWS:
        label = name.replace("_", " ")
        lines.append(f"  {mark:>3}  {label:<28} {amount_str(values[name], raw):>14}")
    return "\n".join(lines) + "\n"


def cash_table_csv(table: CashDecompositionTable, raw: bool = False) -> str:
    values = cash_table_values(table)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["row", "name", "amount"])
    for mark, name in _TABLE_ROWS:
        writer.writerow([mark, name, amount_str(values[name], raw)])
    return out.getvalue()


# ----------------------------------------------------------------- waterfall

def waterfall_doc(report: WaterfallReport, raw: bool = False) -> dict:
    return {
        "caf_before_interest": amount_str(report.caf_before_interest, raw),
        "bfr_investment": amount_str(report.bfr_investment, raw),
        "operating_cash": amount_str(report.operating_cash, raw),
        "net_investment": amount_str(report.net_investment, raw),
        "free_cash": amount_str(report.free_cash, raw),
        "working_capital_change": amount_str(report.working_capital_change, raw),
        "bfr_change": amount_str(report.bfr_change, raw),
        "treasury_change": amount_str(report.treasury_change, raw),
        "reconciliation_ok": report.reconciliation_ok,
    }


def waterfall_text(report: WaterfallReport, raw: bool = False) -> str:
    lines = [
        f"self-financing before interest: {amount_str(report.caf_before_interest, raw)}",
        f"- working capital requirement investment: {amount_str(report.bfr_investment, raw)}",
        f"= operating cash: {amount_str(report.operating_cash, raw)}",
        f"- net investments: {amount_str(report.net_investment, raw)}",
        f"= free cash: {amount_str(report.free_cash, raw)}",
        "reconciliation: working capital change "
        f"{amount_str(report.working_capital_change, raw)}"
        f" - requirement change {amount_str(report.bfr_change, raw)}"
        f" = treasury change {amount_str(report.treasury_change, raw)}"
        f" ({'ok' if report.reconciliation_ok else 'MISMATCH'})",
    ]
    return "\n".join(lines) + "\n"
