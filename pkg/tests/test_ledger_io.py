"""Parsing and lossless serialisation of ledgers and scenarios."""

import random
from fractions import Fraction

import pytest

from cashlever import (
    AnticipationCase,
    LedgerFormatError,
    ScenarioFormatError,
    IdentityViolation,
    emit_ledger_csv,
    emit_ledger_json,
    parse_ledger_csv,
    parse_ledger_json,
    parse_scenario_json,
)
from conftest import random_ledger

LEDGER = """
{
  "periods": [
    {"period": 1,
     "lines": [
       {"id": "grain", "kind": "product", "cash": true, "qty": "100", "unit_value": "6"},
       {"id": "seed", "kind": "input", "cash": true, "qty": 20, "unit_value": 5},
       {"id": "depreciation", "kind": "input", "cash": false, "qty": "10", "unit_value": "1/3"}
     ],
     "result_before_tax": "1490/3", "tax": "50"},
    {"period": 2,
     "lines": [
       {"id": "grain", "kind": "product", "cash": true, "qty": "110", "unit_value": 6.5}
     ],
     "result_before_tax": "715"}
  ],
  "stocks": [
    {"period": 1, "flow_id": "grain", "stock_end": "120"}
  ]
}
"""


class TestLedgerJson:
    def test_parses_mixed_number_forms(self):
        ledger = parse_ledger_json(LEDGER)
        account = ledger.account(1)
        assert account.line("depreciation").unit_value == Fraction(1, 3)
        assert ledger.account(2).line("grain").unit_value == Fraction(13, 2)
        assert ledger.account(2).tax == 0
        assert ledger.stock_end(1, "grain") == 120

    def test_round_trip_is_lossless(self):
        rng = random.Random(3)
        for _ in range(20):
            ledger = random_ledger(rng, periods=3)
            again = parse_ledger_json(emit_ledger_json(ledger))
            assert again.accounts == ledger.accounts
            assert again.stocks == ledger.stocks

    def test_bad_json_is_format_error(self):
        with pytest.raises(LedgerFormatError):
            parse_ledger_json("{not json")

    def test_unknown_keys_rejected(self):
        with pytest.raises(LedgerFormatError):
            parse_ledger_json('{"periods": [], "extra": 1}')

    def test_bad_kind_rejected(self):
        text = LEDGER.replace('"kind": "product"', '"kind": "produce"')
        with pytest.raises(LedgerFormatError):
            parse_ledger_json(text)

    def test_semantic_errors_keep_their_type(self):
        """A parseable but inconsistent ledger is a validation error,
        not a format error."""
        text = LEDGER.replace('"result_before_tax": "715"', '"result_before_tax": "7"')
        with pytest.raises(IdentityViolation):
            parse_ledger_json(text)


class TestLedgerCsv:
    def test_round_trip_is_lossless(self):
        rng = random.Random(4)
        for _ in range(20):
            ledger = random_ledger(rng, periods=2)
            again = parse_ledger_csv(emit_ledger_csv(ledger))
            assert again.accounts == ledger.accounts
            assert again.stocks == ledger.stocks

    def test_json_and_csv_agree(self):
        ledger = parse_ledger_json(LEDGER)
        again = parse_ledger_csv(emit_ledger_csv(ledger))
        assert again.accounts == ledger.accounts
        assert again.stocks == ledger.stocks

    def test_header_is_checked(self):
        with pytest.raises(LedgerFormatError):
            parse_ledger_csv("period,id\n1,grain\n")

    def test_missing_result_row_rejected(self):
        text = (
            "record,period,id,kind,cash,qty,unit_value,result_before_tax,tax,flow_id,stock_end\n"
            "line,1,grain,product,true,10,5,,,,\n"
        )
        with pytest.raises(LedgerFormatError):
            parse_ledger_csv(text)

    def test_unknown_record_rejected(self):
        text = (
            "record,period,id,kind,cash,qty,unit_value,result_before_tax,tax,flow_id,stock_end\n"
            "blob,1,grain,product,true,10,5,,,,\n"
        )
        with pytest.raises(LedgerFormatError):
            parse_ledger_csv(text)


SCENARIO = """
{
  "cost_structure": {
    "fixed_cash": "100000", "fixed_noncash": "20000",
    "unit_price": "50", "unit_variable_cost": "30"
  },
  "lag_profile": {
    "modulated_fixed": "20000", "modulation_month": 9,
    "supplier_credit_months": 2, "customer_credit_months": 1,
    "monthly_sales": "1000"
  }
}
"""


class TestScenarioJson:
    def test_parses_cost_and_profile(self):
        cost, profile = parse_scenario_json(SCENARIO)
        assert cost.fixed_total == 120000
        assert profile.supplier_credit_months == 2
        assert profile.monthly_sales == 1000

    def test_profile_is_optional(self):
        cost, profile = parse_scenario_json(
            '{"cost_structure": {"fixed_cash": 1, "unit_price": 2, "unit_variable_cost": 1}}'
        )
        assert not profile.has_adjustments
        assert cost.fixed_noncash == 0

    def test_fixed_total_alias_and_consistency(self):
        cost, _ = parse_scenario_json(
            '{"cost_structure": {"fixed_cash": 10, "fixed_total": 25,'
            ' "unit_price": 2, "unit_variable_cost": 1}}'
        )
        assert cost.fixed_noncash == 15
        with pytest.raises(ScenarioFormatError):
            parse_scenario_json(
                '{"cost_structure": {"fixed_cash": 10, "fixed_noncash": 5, "fixed_total": 25,'
                ' "unit_price": 2, "unit_variable_cost": 1}}'
            )

    def test_anticipation_case_parsed(self):
        cost, profile = parse_scenario_json(
            '{"cost_structure": {"fixed_cash": 1, "unit_price": 50, "unit_variable_cost": 30},'
            ' "lag_profile": {"anticipated_variable": 40000,'
            ' "anticipation_case": "single_input_all_upfront",'
            ' "anticipated_unit_cost": 10, "monthly_sales": 1000}}'
        )
        assert profile.anticipation_case is AnticipationCase.SINGLE_INPUT_ALL_UPFRONT

    def test_bad_profile_values_are_format_errors(self):
        with pytest.raises(ScenarioFormatError):
            parse_scenario_json(
                '{"cost_structure": {"fixed_cash": 1, "unit_price": 2, "unit_variable_cost": 1},'
                ' "lag_profile": {"anticipation_case": "bulk"}}'
            )
        with pytest.raises(ScenarioFormatError):
            parse_scenario_json(
                '{"cost_structure": {"fixed_cash": 1, "unit_price": 2, "unit_variable_cost": 1},'
                ' "lag_profile": {"supplier_credit_months": 2}}'
            )

    def test_unknown_keys_rejected(self):
        with pytest.raises(ScenarioFormatError):
            parse_scenario_json(
                '{"cost_structure": {"fixed_cash": 1, "unit_price": 2,'
                ' "unit_variable_cost": 1, "margin": 1}}'
            )
