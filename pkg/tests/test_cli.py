"""End-to-end command line behaviour on the data fixtures."""

import json
from pathlib import Path

import pytest

from cashlever.cli import RunConfig, build_parser, main, run

DATA = Path(__file__).parent / "data"
SCENARIO = str(DATA / "scenario.json")
LEDGER = str(DATA / "farm_ledger.json")
LEDGER_CSV = str(DATA / "farm_ledger.csv")

BREAKEVEN_TEXT = """\
liquidity threshold (units): 5000.00
solvency threshold (units): 2500.00
binding formula: standard
components:
  CFD: 100000.00
  MCFD: 20000.00
  CVA: 0.00
  CVD: 30000.00
  ED: 0.00
  MUSCV: 20.00
  modulation effective: yes
"""

WATERFALL_TEXT = """\
self-financing before interest: 570.00
- working capital requirement investment: -76.00
= operating cash: 646.00
- net investments: 0.00
= free cash: 646.00
reconciliation: working capital change 570.00 - requirement change -76.00 = treasury change 646.00 (ok)
"""


class TestBreakeven:
    def test_text_report(self, capsys):
        assert main(["breakeven", SCENARIO]) == 0
        assert capsys.readouterr().out == BREAKEVEN_TEXT

    def test_json_raw_report(self, capsys):
        assert main(["breakeven", SCENARIO, "--json", "--raw"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["solvency_threshold"] == "2500"
        assert doc["binding_formula"] == "standard"
        assert doc["modulation_effective"] is True
        assert doc["components"]["CVD"] == "30000"

    def test_infeasible_cycle_is_domain_error(self, capsys):
        assert main(["breakeven", str(DATA / "infeasible_cycle.json")]) == 4
        assert "cycle" in capsys.readouterr().err

    def test_unknown_scenario_key(self, capsys):
        assert main(["breakeven", str(DATA / "bad_scenario.json")]) == 2
        assert "surprise" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        assert main(["breakeven", str(DATA / "nowhere.json")]) == 2


class TestSimulate:
    def test_text_headline(self, capsys):
        assert main(["simulate", SCENARIO, "--months", "4"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("solvency reached on day 75 (month 3, 2500 units sold)")
        assert "    1   1000      50000.00       80000.00     -30000.00" in out

    def test_monthly_csv(self, tmp_path, capsys):
        target = tmp_path / "monthly.csv"
        assert main(["simulate", SCENARIO, "--months", "4", "--csv", str(target)]) == 0
        rows = target.read_text().splitlines()
        assert rows[0] == "month,units_sold,receipts,disbursements,balance_end"
        assert len(rows) == 5
        assert rows[1] == "1,1000,50000.00,80000.00,-30000.00"

    def test_daily_csv_and_plot(self, tmp_path, capsys):
        csv_path = tmp_path / "days.csv"
        png_path = tmp_path / "curve.png"
        code = main(
            ["simulate", SCENARIO, "--months", "2", "--csv", str(csv_path),
             "--daily", "--plot", str(png_path), "--raw"]
        )
        assert code == 0
        rows = csv_path.read_text().splitlines()
        assert rows[0] == "day,cumulative_units,receipts,disbursements,balance"
        assert len(rows) == 62
        assert rows[1] == "0,0,0,80000,-80000"
        assert png_path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_json_document(self, capsys):
        assert main(["simulate", SCENARIO, "--months", "4", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["solvency_day"] == 75
        assert doc["solvency_units"] == 2500
        assert len(doc["monthly"]) == 4


class TestLeverage:
    def test_term_variant(self, capsys):
        assert main(["leverage", SCENARIO, "--quantity", "12000"]) == 0
        out = capsys.readouterr().out
        assert "treasury elasticity wrt volume: 2.00" in out
        assert "treasury elasticity wrt margin: 2.00" in out
        assert "immediate" in out and "8.33" in out

    def test_immediate_variant_raw_json(self, capsys):
        code = main(
            ["leverage", SCENARIO, "--quantity", "12000", "--variant", "immediate",
             "--json", "--raw"]
        )
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["elasticity_wrt_volume"] == "12/7"
        assert doc["rupture_matrix"]["term"]["critical_production"] == "6000"
        assert doc["rupture_matrix"]["immediate"]["critical_margin"] == "25/3"

    def test_at_pole_reports_divergence(self, capsys):
        assert main(["leverage", SCENARIO, "--quantity", "6000"]) == 0
        assert "diverges" in capsys.readouterr().out

    def test_fractional_quantity_accepted(self, capsys):
        assert main(["leverage", SCENARIO, "--quantity", "9000.5"]) == 0


class TestCurves:
    def test_writes_four_files(self, tmp_path, capsys):
        out_dir = tmp_path / "curves"
        code = main(["curves", SCENARIO, "--out-dir", str(out_dir), "--points", "25"])
        assert code == 0
        names = {p.name for p in out_dir.iterdir()}
        assert names == {
            "elasticity_volume.csv",
            "elasticity_volume.png",
            "indifference.csv",
            "indifference.png",
        }
        mentioned = capsys.readouterr().out
        for name in names:
            assert name in mentioned
        elasticity = (out_dir / "elasticity_volume.csv").read_text().splitlines()
        assert elasticity[0] == "quantity,elasticity"
        assert len(elasticity) == 26
        indifference = (out_dir / "indifference.csv").read_text().splitlines()
        assert indifference[0] == "fixed_charges,quantity,margin"
        assert len(indifference) == 1 + 2 * 25

    def test_custom_fixed_levels(self, tmp_path):
        out_dir = tmp_path / "curves"
        code = main(
            ["curves", SCENARIO, "--out-dir", str(out_dir), "--points", "10",
             "--fixed", "50000", "75000", "--raw"]
        )
        assert code == 0
        body = (out_dir / "indifference.csv").read_text()
        assert "50000," in body and "75000," in body

    def test_bad_span(self, tmp_path, capsys):
        code = main(["curves", SCENARIO, "--out-dir", str(tmp_path), "--span", "4:1"])
        assert code == 2
        assert "span" in capsys.readouterr().err


class TestSurplus:
    def test_text_account(self, capsys):
        assert main(["surplus", LEDGER, "--period", "1"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("productivity surplus: -13.00")
        assert "totals: resources 135.00 / uses 135.00 (balanced)" in out

    def test_caf_extension(self, capsys):
        assert main(["surplus", LEDGER, "--period", "1", "--caf"]) == 0
        out = capsys.readouterr().out
        assert (
            "self-financing variation: quantity 16.00 + price 0.00"
            " + cross 0.00 + result 69.00 = 85.00" in out
        )

    def test_json_document(self, capsys):
        assert main(["surplus", LEDGER, "--period", "2", "--caf", "--json", "--raw"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["surplus"]["productivity_surplus"] == "90"
        assert doc["surplus"]["balance_ok"] is True
        assert doc["caf"]["total"] == "105"

    def test_period_out_of_range(self, capsys):
        assert main(["surplus", LEDGER, "--period", "3"]) == 4


class TestCashTable:
    def test_pinned_rows(self, capsys):
        assert main(["cash-table", LEDGER, "--period", "2"]) == 0
        out = capsys.readouterr().out
        assert "   IV  settled caf change                   181.00" in out
        assert "    V  deferred net cash                     44.00" in out
        assert "   VI  operating cash surplus               225.00" in out

    def test_csv_export(self, tmp_path):
        target = tmp_path / "table.csv"
        assert main(["cash-table", LEDGER, "--period", "2", "--csv", str(target), "--raw"]) == 0
        rows = target.read_text().splitlines()
        assert rows[0] == "row,name,amount"
        assert len(rows) == 23
        assert "VI,operating_cash_surplus,225" in rows

    def test_json_document(self, capsys):
        assert main(["cash-table", LEDGER, "--period", "2", "--json", "--raw"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["transition"] == [2, 3]
        assert doc["rows"]["settled_caf_change"] == "181"
        assert doc["rows"]["tax_increase"] == "-30"

    def test_csv_ledger_input(self, capsys):
        assert main(["cash-table", LEDGER_CSV, "--period", "2"]) == 0
        assert "225.00" in capsys.readouterr().out

    def test_edge_period(self, capsys):
        assert main(["cash-table", LEDGER, "--period", "1"]) == 4


class TestWaterfall:
    def test_text_report(self, capsys):
        assert main(["waterfall", LEDGER, "--period", "3"]) == 0
        assert capsys.readouterr().out == WATERFALL_TEXT

    def test_net_investment(self, capsys):
        code = main(["waterfall", LEDGER, "--period", "3", "--net-investment", "100", "--json"])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["free_cash"] == "546.00"
        assert doc["reconciliation_ok"] is True


class TestValidate:
    def test_json_ledger(self, capsys):
        assert main(["validate", LEDGER]) == 0
        assert capsys.readouterr().out == "ledger ok: 3 periods, 6 stocks\n"

    def test_csv_ledger(self, capsys):
        assert main(["validate", LEDGER_CSV]) == 0
        assert capsys.readouterr().out == "ledger ok: 3 periods, 6 stocks\n"

    def test_identity_violation(self, capsys):
        assert main(["validate", str(DATA / "bad_identity.json")]) == 3
        assert "invalid ledger" in capsys.readouterr().err

    def test_syntax_error(self, capsys):
        assert main(["validate", str(DATA / "bad_syntax.json")]) == 2


class TestDispatch:
    def test_parser_requires_subcommand(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_unknown_command_in_run(self, capsys):
        import io

        err = io.StringIO()
        assert run(RunConfig("nonsense", {}), out=io.StringIO(), err=err) == 2
        assert "unknown command" in err.getvalue()

    def test_run_writes_to_given_stream(self):
        import io

        out = io.StringIO()
        config = RunConfig("validate", {"ledger": LEDGER})
        assert run(config, out=out, err=io.StringIO()) == 0
        assert out.getvalue().startswith("ledger ok")
