"""Command line interface.

Subcommands cover the two instrument families: breakeven, simulate,
leverage and curves work on a scenario file (cost structure plus lag
profile); surplus, cash-table, waterfall and validate work on a ledger
file.  Output is deterministic: no clocks, no locale, amounts rounded
half-even to two decimals unless --raw asks for exact values.

Exit codes: 2 for unreadable input, 3 for a ledger that fails
validation, 4 for a computation undefined on the given data.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Mapping, Optional, Sequence

from . import breakeven, cash_transfer, leverage, plots, reports
from .errors import DomainError, FormatError, LedgerFormatError, ScenarioFormatError, ValidationError
from .ledger_io import parse_ledger_csv, parse_ledger_json, parse_scenario_json
from .model import CashLagProfile, CostStructure, Ledger
from .numeric import as_ratio
from .simulate import simulate_cash_days
from .surplus import caf_surplus, surplus_accounts


@dataclass(frozen=True)
class RunConfig:
    """One resolved invocation: a subcommand and its options."""

    command: str
    options: Mapping[str, object]


def _ratio_arg(text: str) -> Fraction:
    try:
        return as_ratio(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a whole number: {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cashlever",
        description="Cash breakeven thresholds, treasury leverage and "
        "surplus-accounting cash decomposition.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def common_output(sub):
        sub.add_argument("--json", action="store_true", help="emit a JSON document")
        sub.add_argument("--raw", action="store_true", help="exact amounts instead of 2-decimal rounding")

    sub = commands.add_parser(
        "breakeven",
        help="liquidity and solvency thresholds (seuil de liquidite, seuil de solvabilite)",
    )
    sub.add_argument("scenario", help="scenario JSON file")
    common_output(sub)

    sub = commands.add_parser(
        "simulate",
        help="day-level cash simulation, monthly summary, optional CSV and figure",
    )
    sub.add_argument("scenario", help="scenario JSON file")
    sub.add_argument("--months", type=_positive_int, required=True, help="horizon in 30-day months")
    sub.add_argument("--csv", metavar="PATH", help="write the monthly series as CSV")
    sub.add_argument("--daily", action="store_true", help="CSV at day granularity instead of monthly")
    sub.add_argument("--plot", metavar="PATH", help="render the cash curve to an image file")
    common_output(sub)

    sub = commands.add_parser(
        "leverage",
        help="treasury elasticities and the rupture matrix",
    )
    sub.add_argument("scenario", help="scenario JSON file")
    sub.add_argument("--quantity", type=_ratio_arg, required=True, help="sold volume, exact number")
    sub.add_argument(
        "--variant",
        choices=[v.value for v in leverage.LeverageVariant],
        default=leverage.LeverageVariant.TERM.value,
        help="fixed charge base for the elasticities",
    )
    common_output(sub)

    sub = commands.add_parser(
        "curves",
        help="write elasticity and indifference curve data with figures",
    )
    sub.add_argument("scenario", help="scenario JSON file")
    sub.add_argument("--out-dir", required=True, help="directory for CSV and image files")
    sub.add_argument("--points", type=_positive_int, default=241, help="grid points (default 241)")
    sub.add_argument(
        "--span",
        default="1/10:4",
        help="quantity grid as LOW:HIGH multiples of the critical production (default 1/10:4)",
    )
    sub.add_argument(
        "--fixed",
        nargs="+",
        type=_ratio_arg,
        metavar="AMOUNT",
        help="fixed charge levels for the indifference curves "
        "(default: disbursed and total fixed charges)",
    )
    sub.add_argument("--raw", action="store_true", help="exact amounts in the CSV files")

    sub = commands.add_parser(
        "surplus",
        help="productivity surplus account between a period and the next",
    )
    sub.add_argument("ledger", help="ledger JSON or CSV file")
    sub.add_argument("--period", type=int, required=True, help="first period of the transition")
    sub.add_argument("--caf", action="store_true", help="add the self-financing decomposition")
    common_output(sub)

    sub = commands.add_parser(
        "cash-table",
        help="operating cash surplus decomposition (rows I to VI)",
    )
    sub.add_argument("ledger", help="ledger JSON or CSV file")
    sub.add_argument("--period", type=int, required=True, help="pivot period of the table")
    sub.add_argument("--csv", metavar="PATH", help="write the table as CSV")
    common_output(sub)

    sub = commands.add_parser(
        "waterfall",
        help="free cash flow waterfall and treasury reconciliation",
    )
    sub.add_argument("ledger", help="ledger JSON or CSV file")
    sub.add_argument("--period", type=int, required=True, help="period of the waterfall")
    sub.add_argument(
        "--net-investment",
        type=_ratio_arg,
        default=Fraction(0),
        help="net investments deducted from operating cash (default 0)",
    )
    common_output(sub)

    sub = commands.add_parser("validate", help="check a ledger file and report its shape")
    sub.add_argument("ledger", help="ledger JSON or CSV file")

    return parser


def _read_text(path: str, error: type) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise error(f"cannot read {path}: {exc}") from exc


def _load_scenario(path: str):
    return parse_scenario_json(_read_text(path, ScenarioFormatError))


def _load_ledger(path: str) -> Ledger:
    text = _read_text(path, LedgerFormatError)
    if path.endswith(".csv"):
        return parse_ledger_csv(text)
    return parse_ledger_json(text)


def _emit(text: str, out) -> None:
    out.write(text)


def _cmd_breakeven(options, out) -> None:
    cost, profile = _load_scenario(str(options["scenario"]))
    report = breakeven.solvency_threshold(cost, profile)
    raw = bool(options["raw"])
    if options["json"]:
        _emit(reports.render_json(reports.threshold_doc(report, raw)), out)
    else:
        _emit(reports.threshold_text(report, raw), out)


def _cmd_simulate(options, out) -> None:
    cost, profile = _load_scenario(str(options["scenario"]))
    simulation = simulate_cash_days(cost, profile, int(options["months"]))
    raw = bool(options["raw"])
    if options["csv"]:
        if options["daily"]:
            Path(str(options["csv"])).write_text(reports.daily_csv(simulation, raw), encoding="utf-8")
        else:
            Path(str(options["csv"])).write_text(
                reports.monthly_csv(simulation.monthly(), raw), encoding="utf-8"
            )
    if options["plot"]:
        plots.save_cash_curve(simulation, str(options["plot"]))
    if options["json"]:
        _emit(reports.render_json(reports.simulation_doc(simulation, raw)), out)
    else:
        _emit(reports.simulation_text(simulation, raw), out)


def _cmd_leverage(options, out) -> None:
    cost, _ = _load_scenario(str(options["scenario"]))
    quantity = options["quantity"]
    variant = leverage.LeverageVariant(str(options["variant"]))
    matrix = leverage.rupture_matrix(cost, quantity)
    try:
        volume = leverage.elasticity_wrt_volume(cost, quantity, variant)
    except DomainError:
        volume = None
    try:
        margin = leverage.elasticity_wrt_margin(cost, quantity, variant)
    except DomainError:
        margin = None
    raw = bool(options["raw"])
    if options["json"]:
        _emit(reports.render_json(reports.leverage_doc(matrix, volume, margin, raw)), out)
    else:
        _emit(reports.leverage_text(matrix, volume, margin, raw), out)


def _parse_span(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("span must be LOW:HIGH")
    low, high = (as_ratio(part) for part in parts)
    if low <= 0 or high <= low:
        raise argparse.ArgumentTypeError("span needs 0 < LOW < HIGH")
    return low, high


def _cmd_curves(options, out) -> None:
    cost, _ = _load_scenario(str(options["scenario"]))
    out_dir = Path(str(options["out_dir"]))
    out_dir.mkdir(parents=True, exist_ok=True)
    raw = bool(options["raw"])
    try:
        low_mult, high_mult = _parse_span(str(options["span"]))
    except argparse.ArgumentTypeError as exc:
        raise ScenarioFormatError(f"bad --span: {exc}") from exc
    pivot = leverage.critical_production(cost, leverage.LeverageVariant.TERM)
    grid = leverage.linear_grid(pivot * low_mult, pivot * high_mult, int(options["points"]))

    rows = reports.elasticity_curve_rows(cost, grid)
    elasticity_csv = out_dir / "elasticity_volume.csv"
    elasticity_png = out_dir / "elasticity_volume.png"
    elasticity_csv.write_text(reports.elasticity_curve_csv(rows, raw), encoding="utf-8")
    plots.save_elasticity_curve(rows, pivot, str(elasticity_png))

    fixed_levels = options.get("fixed") or [cost.fixed_cash, cost.fixed_total]
    curves = {}
    for level in fixed_levels:
        label = reports.amount_str(as_ratio(level), raw)
        curves[label] = leverage.indifference_points(as_ratio(level), grid)
    indifference_csv_path = out_dir / "indifference.csv"
    indifference_png = out_dir / "indifference.png"
    indifference_csv_path.write_text(reports.indifference_csv(curves, raw), encoding="utf-8")
    plots.save_indifference_curves(curves, str(indifference_png))

    for path in (elasticity_csv, elasticity_png, indifference_csv_path, indifference_png):
        _emit(f"wrote {path}\n", out)


def _cmd_surplus(options, out) -> None:
    ledger = _load_ledger(str(options["ledger"]))
    period = int(options["period"])
    prev, curr = ledger.consecutive(period)
    report = surplus_accounts(prev, curr)
    raw = bool(options["raw"])
    if options["json"]:
        doc = {"surplus": reports.surplus_doc(report, raw)}
        if options["caf"]:
            doc["caf"] = reports.caf_surplus_doc(caf_surplus(prev, curr), raw)
        _emit(reports.render_json(doc), out)
    else:
        _emit(reports.surplus_text(report, raw), out)
        if options["caf"]:
            caf = caf_surplus(prev, curr)
            _emit(
                "self-financing variation: "
                f"quantity {reports.amount_str(caf.noncash_quantity_effect, raw)}"
                f" + price {reports.amount_str(caf.noncash_price_effect, raw)}"
                f" + cross {reports.amount_str(caf.noncash_cross_effect, raw)}"
                f" + result {reports.amount_str(caf.result_change, raw)}"
                f" = {reports.amount_str(caf.total, raw)}\n",
                out,
            )


def _cmd_cash_table(options, out) -> None:
    ledger = _load_ledger(str(options["ledger"]))
    table = cash_transfer.operating_cash_surplus(ledger, int(options["period"]))
    raw = bool(options["raw"])
    if options["csv"]:
        Path(str(options["csv"])).write_text(reports.cash_table_csv(table, raw), encoding="utf-8")
    if options["json"]:
        _emit(reports.render_json(reports.cash_table_doc(table, raw)), out)
    else:
        _emit(reports.cash_table_text(table, raw), out)


def _cmd_waterfall(options, out) -> None:
    ledger = _load_ledger(str(options["ledger"]))
    report = cash_transfer.waterfall_from_ledger(
        ledger, int(options["period"]), net_investment=options["net_investment"]
    )
    raw = bool(options["raw"])
    if options["json"]:
        _emit(reports.render_json(reports.waterfall_doc(report, raw)), out)
    else:
        _emit(reports.waterfall_text(report, raw), out)


def _cmd_validate(options, out) -> None:
    ledger = _load_ledger(str(options["ledger"]))
    _emit(
        f"ledger ok: {len(ledger.accounts)} periods, {len(ledger.stocks)} stocks\n",
        out,
    )


_HANDLERS: Mapping[str, Callable] = {
    "breakeven": _cmd_breakeven,
    "simulate": _cmd_simulate,
    "leverage": _cmd_leverage,
    "curves": _cmd_curves,
    "surplus": _cmd_surplus,
    "cash-table": _cmd_cash_table,
    "waterfall": _cmd_waterfall,
    "validate": _cmd_validate,
}


def run(config: RunConfig, out=None, err=None) -> int:
    """Execute a resolved invocation; returns the process exit code."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    handler = _HANDLERS.get(config.command)
    if handler is None:
        err.write(f"error: unknown command {config.command!r}\n")
        return 2
    try:
        handler(config.options, out)
    except FormatError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except ValidationError as exc:
        err.write(f"error: invalid ledger: {exc}\n")
        return 3
    except DomainError as exc:
        err.write(f"error: {exc}\n")
        return 4
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    namespace = parser.parse_args(argv)
    options = vars(namespace)
    command = options.pop("command")
    return run(RunConfig(command=command, options=options))


if __name__ == "__main__":
    sys.exit(main())
