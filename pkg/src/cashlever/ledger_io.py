"""Reading and writing ledgers and scenarios.

Ledgers travel as JSON or as a single CSV file with a record
discriminator column.  Scenarios (cost structure plus optional lag
profile) travel as JSON.  Amounts are written back as exact strings, a
plain integer, a terminating decimal or a "p/q" ratio, so that a
parse/emit cycle is lossless.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any, Mapping, Optional, Sequence, Tuple

from .errors import LedgerFormatError, ScenarioFormatError
from .model import (
    AnticipationCase,
    CashLagProfile,
    CostStructure,
    FlowKind,
    FlowLine,
    FlowStock,
    Ledger,
    PeriodAccount,
    validate_ledger,
)
from .numeric import as_ratio, exact_str

_LINE_KEYS = {"id", "kind", "cash", "qty", "unit_value"}
_PERIOD_KEYS = {"period", "lines", "result_before_tax", "tax"}
_STOCK_KEYS = {"period", "flow_id", "stock_end"}
_COST_KEYS = {"fixed_cash", "fixed_noncash", "fixed_calculated", "fixed_total", "unit_price", "unit_variable_cost"}
_PROFILE_KEYS = {
    "modulated_fixed",
    "modulation_month",
    "anticipated_variable",
    "anticipation_case",
    "anticipated_unit_cost",
    "supplier_credit_months",
    "customer_credit_months",
    "monthly_sales",
    "seasonal_weights",
    "cycle_months",
}

_CSV_FIELDS = [
    "record",
    "period",
    "id",
    "kind",
    "cash",
    "qty",
    "unit_value",
    "result_before_tax",
    "tax",
    "flow_id",
    "stock_end",
]


def _loads(text: str, error: type) -> Any:
    try:
        return json.loads(text, parse_float=Fraction, parse_int=int)
    except json.JSONDecodeError as exc:
        raise error(f"invalid JSON: {exc}") from exc


def _require_keys(obj: Mapping[str, Any], allowed: set, required: set, where: str, error: type) -> None:
    if not isinstance(obj, Mapping):
        raise error(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = set(obj) - allowed
    if unknown:
        raise error(f"{where}: unknown keys {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise error(f"{where}: missing keys {sorted(missing)}")


def _amount(obj: Mapping[str, Any], key: str, where: str, error: type, default=None) -> Fraction:
    if key not in obj:
        if default is None:
            raise error(f"{where}: missing {key}")
        return as_ratio(default)
    try:
        return as_ratio(obj[key])
    except (TypeError, ValueError) as exc:
        raise error(f"{where}: bad {key}: {exc}") from exc


def _whole(obj: Mapping[str, Any], key: str, where: str, error: type, default: int = 0) -> int:
    value = obj.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool):
        raise error(f"{where}: {key} must be a whole number")
    return value


def parse_ledger_json(text: str) -> Ledger:
    """Parse and validate a JSON ledger document."""
    obj = _loads(text, LedgerFormatError)
    _require_keys(obj, {"periods", "stocks"}, {"periods"}, "ledger", LedgerFormatError)
    if not isinstance(obj["periods"], Sequence):
        raise LedgerFormatError("ledger: periods must be an array")
    accounts = []
    for position, entry in enumerate(obj["periods"]):
        where = f"periods[{position}]"
        _require_keys(entry, _PERIOD_KEYS, _PERIOD_KEYS - {"tax"}, where, LedgerFormatError)
        period = _whole(entry, "period", where, LedgerFormatError)
        lines = []
        if not isinstance(entry["lines"], Sequence):
            raise LedgerFormatError(f"{where}: lines must be an array")
        for index, raw in enumerate(entry["lines"]):
            line_where = f"{where}.lines[{index}]"
            _require_keys(raw, _LINE_KEYS, _LINE_KEYS, line_where, LedgerFormatError)
            if not isinstance(raw["cash"], bool):
                raise LedgerFormatError(f"{line_where}: cash must be true or false")
            try:
                kind = FlowKind(raw["kind"])
            except ValueError as exc:
                raise LedgerFormatError(f"{line_where}: bad kind {raw['kind']!r}") from exc
            lines.append(
                FlowLine(
                    id=str(raw["id"]),
                    kind=kind,
                    cash=raw["cash"],
                    quantity=_amount(raw, "qty", line_where, LedgerFormatError),
                    unit_value=_amount(raw, "unit_value", line_where, LedgerFormatError),
                )
            )
        accounts.append(
            PeriodAccount(
                period=period,
                lines=tuple(lines),
                result_before_tax=_amount(entry, "result_before_tax", where, LedgerFormatError),
                tax=_amount(entry, "tax", where, LedgerFormatError, default=0),
            )
        )
    stocks = []
    for position, entry in enumerate(obj.get("stocks", ())):
        where = f"stocks[{position}]"
        _require_keys(entry, _STOCK_KEYS, _STOCK_KEYS, where, LedgerFormatError)
        stocks.append(
            FlowStock(
                period=_whole(entry, "period", where, LedgerFormatError),
                flow_id=str(entry["flow_id"]),
                stock_end=_amount(entry, "stock_end", where, LedgerFormatError),
            )
        )
    return validate_ledger(accounts, stocks)


def emit_ledger_json(ledger: Ledger) -> str:
    """Serialise a ledger with exact amount strings.  Lossless."""
    doc = {
        "periods": [
            {
                "period": account.period,
                "lines": [
                    {
                        "id": line.id,
                        "kind": line.kind.value,
                        "cash": line.cash,
                        "qty": exact_str(line.quantity),
                        "unit_value": exact_str(line.unit_value),
                    }
                    for line in account.lines
                ],
                "result_before_tax": exact_str(account.result_before_tax),
                "tax": exact_str(account.tax),
            }
            for account in ledger.accounts
        ],
        "stocks": [
            {
                "period": stock.period,
                "flow_id": stock.flow_id,
                "stock_end": exact_str(stock.stock_end),
            }
            for stock in ledger.stocks
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_ledger_csv(text: str) -> Ledger:
    """Parse the single-file CSV ledger format.

    Columns: record,period,id,kind,cash,qty,unit_value,
    result_before_tax,tax,flow_id,stock_end.  The `record` column is
    line, result or stock; irrelevant columns stay empty.  Each period
    needs exactly one result row.
    """
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise LedgerFormatError("empty CSV ledger")
    if list(reader.fieldnames) != _CSV_FIELDS:
        raise LedgerFormatError(
            f"CSV header must be {','.join(_CSV_FIELDS)}, got {','.join(reader.fieldnames)}"
        )
    lines_by_period: dict[int, list] = {}
    results: dict[int, Tuple[Fraction, Fraction]] = {}
    stocks = []
    for number, row in enumerate(reader, start=2):
        where = f"row {number}"
        record = (row.get("record") or "").strip()
        period_text = (row.get("period") or "").strip()
        if not period_text.lstrip("-").isdigit():
            raise LedgerFormatError(f"{where}: bad period {period_text!r}")
        period = int(period_text)
        if record == "line":
            cash_text = (row.get("cash") or "").strip().lower()
            if cash_text not in ("true", "false"):
                raise LedgerFormatError(f"{where}: cash must be true or false")
            try:
                kind = FlowKind((row.get("kind") or "").strip())
            except ValueError as exc:
                raise LedgerFormatError(f"{where}: bad kind {row.get('kind')!r}") from exc
            lines_by_period.setdefault(period, []).append(
                FlowLine(
                    id=(row.get("id") or "").strip(),
                    kind=kind,
                    cash=cash_text == "true",
                    quantity=_amount(row, "qty", where, LedgerFormatError),
                    unit_value=_amount(row, "unit_value", where, LedgerFormatError),
                )
            )
        elif record == "result":
            if period in results:
                raise LedgerFormatError(f"{where}: second result row for period {period}")
            results[period] = (
                _amount(row, "result_before_tax", where, LedgerFormatError),
                _amount(row, "tax", where, LedgerFormatError),
            )
        elif record == "stock":
            stocks.append(
                FlowStock(
                    period=period,
                    flow_id=(row.get("flow_id") or "").strip(),
                    stock_end=_amount(row, "stock_end", where, LedgerFormatError),
                )
            )
        else:
            raise LedgerFormatError(f"{where}: unknown record type {record!r}")
    missing = set(lines_by_period) - set(results)
    if missing:
        raise LedgerFormatError(f"periods without a result row: {sorted(missing)}")
    accounts = [
        PeriodAccount(
            period=period,
            lines=tuple(lines_by_period.get(period, ())),
            result_before_tax=result,
            tax=tax,
        )
        for period, (result, tax) in sorted(results.items())
    ]
    return validate_ledger(accounts, stocks)


def emit_ledger_csv(ledger: Ledger) -> str:
    """Serialise a ledger to the single-file CSV format.  Lossless."""
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=_CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for account in ledger.accounts:
        for line in account.lines:
            writer.writerow(
                {
                    "record": "line",
                    "period": account.period,
                    "id": line.id,
                    "kind": line.kind.value,
                    "cash": "true" if line.cash else "false",
                    "qty": exact_str(line.quantity),
                    "unit_value": exact_str(line.unit_value),
                }
            )
        writer.writerow(
            {
                "record": "result",
                "period": account.period,
                "result_before_tax": exact_str(account.result_before_tax),
                "tax": exact_str(account.tax),
            }
        )
    for stock in ledger.stocks:
        writer.writerow(
            {
                "record": "stock",
                "period": stock.period,
                "flow_id": stock.flow_id,
                "stock_end": exact_str(stock.stock_end),
            }
        )
    return out.getvalue()


def parse_scenario_json(text: str) -> Tuple[CostStructure, CashLagProfile]:
    """Parse a scenario: a cost structure and an optional lag profile."""
    obj = _loads(text, ScenarioFormatError)
    _require_keys(
        obj, {"cost_structure", "lag_profile"}, {"cost_structure"}, "scenario", ScenarioFormatError
    )
    raw_cost = obj["cost_structure"]
    _require_keys(
        raw_cost,
        _COST_KEYS,
        {"fixed_cash", "unit_price", "unit_variable_cost"},
        "cost_structure",
        ScenarioFormatError,
    )
    fixed_cash = _amount(raw_cost, "fixed_cash", "cost_structure", ScenarioFormatError)
    noncash_key = None
    for key in ("fixed_noncash", "fixed_calculated"):
        if key in raw_cost:
            noncash_key = key
            break
    if noncash_key is not None:
        fixed_noncash = _amount(raw_cost, noncash_key, "cost_structure", ScenarioFormatError)
    elif "fixed_total" in raw_cost:
        fixed_noncash = (
            _amount(raw_cost, "fixed_total", "cost_structure", ScenarioFormatError) - fixed_cash
        )
    else:
        fixed_noncash = Fraction(0)
    if "fixed_total" in raw_cost:
        stated = _amount(raw_cost, "fixed_total", "cost_structure", ScenarioFormatError)
        if stated != fixed_cash + fixed_noncash:
            raise ScenarioFormatError(
                "cost_structure: fixed_total does not equal fixed_cash plus the calculated part"
            )
    try:
        cost = CostStructure(
            fixed_cash=fixed_cash,
            fixed_noncash=fixed_noncash,
            unit_price=_amount(raw_cost, "unit_price", "cost_structure", ScenarioFormatError),
            unit_variable_cost=_amount(
                raw_cost, "unit_variable_cost", "cost_structure", ScenarioFormatError
            ),
        )
    except ValueError as exc:
        raise ScenarioFormatError(f"cost_structure: {exc}") from exc

    raw_profile = obj.get("lag_profile")
    if raw_profile is None:
        return cost, CashLagProfile.none()
    _require_keys(raw_profile, _PROFILE_KEYS, set(), "lag_profile", ScenarioFormatError)
    weights = raw_profile.get("seasonal_weights")
    if weights is not None:
        if not isinstance(weights, Sequence) or isinstance(weights, str):
            raise ScenarioFormatError("lag_profile: seasonal_weights must be an array")
        try:
            weights = tuple(as_ratio(w) for w in weights)
        except (TypeError, ValueError) as exc:
            raise ScenarioFormatError(f"lag_profile: bad seasonal weight: {exc}") from exc
    cycle = raw_profile.get("cycle_months")
    if cycle is not None and (not isinstance(cycle, int) or isinstance(cycle, bool)):
        raise ScenarioFormatError("lag_profile: cycle_months must be a whole number")
    case = raw_profile.get("anticipation_case", AnticipationCase.WHOLE_UNITS.value)
    try:
        case = AnticipationCase(case)
    except ValueError as exc:
        raise ScenarioFormatError(f"lag_profile: bad anticipation_case {case!r}") from exc
    try:
        profile = CashLagProfile(
            modulated_fixed=_amount(raw_profile, "modulated_fixed", "lag_profile", ScenarioFormatError, default=0),
            modulation_month=_whole(raw_profile, "modulation_month", "lag_profile", ScenarioFormatError),
            anticipated_variable=_amount(raw_profile, "anticipated_variable", "lag_profile", ScenarioFormatError, default=0),
            anticipation_case=case,
            anticipated_unit_cost=_amount(raw_profile, "anticipated_unit_cost", "lag_profile", ScenarioFormatError, default=0),
            supplier_credit_months=_whole(raw_profile, "supplier_credit_months", "lag_profile", ScenarioFormatError),
            customer_credit_months=_whole(raw_profile, "customer_credit_months", "lag_profile", ScenarioFormatError),
            monthly_sales=_amount(raw_profile, "monthly_sales", "lag_profile", ScenarioFormatError, default=0),
            seasonal_weights=weights,
            cycle_months=cycle,
        )
    except ValueError as exc:
        raise ScenarioFormatError(f"lag_profile: {exc}") from exc
    return cost, profile
