"""Shared builders for the test suite.

Random data comes from seeded `random.Random` instances so every run
sees the same cases.  Builders return exact Fractions throughout.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from cashlever import (
    CashLagProfile,
    CostStructure,
    FlowKind,
    FlowLine,
    FlowStock,
    Ledger,
    PeriodAccount,
    validate_ledger,
)


def build_account(period, lines, tax=0):
    """Account from (id, kind, cash, qty, unit_value) tuples; the stated
    result is always the computed one."""
    flows = tuple(FlowLine(i, k, c, q, u) for (i, k, c, q, u) in lines)
    result = sum((f.value for f in flows if f.kind is FlowKind.PRODUCT), Fraction(0)) - sum(
        (f.value for f in flows if f.kind is FlowKind.INPUT), Fraction(0)
    )
    return PeriodAccount(period=period, lines=flows, result_before_tax=result, tax=tax)


def random_cost(rng: random.Random, fractional: bool = False) -> CostStructure:
    if fractional:
        price = Fraction(rng.randint(40, 1200), 20)
        variable = price * Fraction(rng.randint(0, 16), 20)
    else:
        price = Fraction(rng.randint(10, 60))
        variable = Fraction(rng.randint(0, int(price) - 5))
    return CostStructure(
        fixed_cash=Fraction(rng.randint(1000, 300000)),
        fixed_noncash=Fraction(rng.randint(0, 100000)),
        unit_price=price,
        unit_variable_cost=variable,
    )


def random_lagged_scenario(rng: random.Random):
    """Cost and profile with at least one active timing adjustment.

    Sales run at 30 units a month (one a day) so the day machine and
    the closed forms can disagree by at most one unit.
    """
    sales = Fraction(30)
    price = Fraction(rng.randint(20, 60))
    variable = Fraction(rng.randint(5, int(price) - 10))
    margin = price - variable
    replace = Fraction(0)
    if margin > 5 and rng.random() < 0.4:
        replace = Fraction(rng.randint(1, int(margin) - 5))
    margin_eff = margin - replace
    fixed_cash = Fraction(rng.randint(1000, int(margin_eff * sales) * 8))
    modulated = Fraction(0)
    month = 0
    if rng.random() < 0.5:
        modulated = Fraction(rng.randint(1, int(fixed_cash) // 2))
        month = rng.randint(1, 14)
    anticipated = Fraction(0)
    if replace or rng.random() < 0.4:
        anticipated = Fraction(rng.randint(0, int(margin_eff * sales) * 2))
    cost = CostStructure(
        fixed_cash=fixed_cash,
        fixed_noncash=Fraction(rng.randint(0, 5000)),
        unit_price=price,
        unit_variable_cost=variable,
    )
    profile = CashLagProfile(
        modulated_fixed=modulated,
        modulation_month=month,
        anticipated_variable=anticipated,
        anticipation_case="single_input_all_upfront" if replace else "whole_units",
        anticipated_unit_cost=replace,
        supplier_credit_months=rng.randint(0, 3),
        customer_credit_months=rng.randint(0, 3),
        monthly_sales=sales,
    )
    return cost, profile


_FLOW_POOL = (
    ("grain", FlowKind.PRODUCT, True),
    ("straw", FlowKind.PRODUCT, True),
    ("cider", FlowKind.PRODUCT, True),
    ("own_work", FlowKind.PRODUCT, False),
    ("seed", FlowKind.INPUT, True),
    ("labor", FlowKind.INPUT, True),
    ("fuel", FlowKind.INPUT, True),
    ("depreciation", FlowKind.INPUT, False),
    ("provisions", FlowKind.INPUT, False),
)


def random_ledger(rng: random.Random, periods: int, with_stocks: bool = True) -> Ledger:
    """Balanced multi-period ledger over a stable pool of flows.

    Lines drop out of single periods now and then, unit values move,
    stocks stay inside their flow value so coefficients are always
    well defined.
    """
    chosen = [entry for entry in _FLOW_POOL if rng.random() < 0.8]
    if not any(kind is FlowKind.PRODUCT and cash for _, kind, cash in chosen):
        chosen.append(_FLOW_POOL[0])
    if not any(kind is FlowKind.INPUT and cash for _, kind, cash in chosen):
        chosen.append(_FLOW_POOL[4])
    base_quantity = {name: rng.randint(10, 400) for name, _, _ in chosen}
    base_value = {name: Fraction(rng.randint(10, 300), 10) for name, _, _ in chosen}

    accounts = []
    stocks = []
    for period in range(1, periods + 1):
        lines = []
        for name, kind, cash in chosen:
            if rng.random() < 0.08:
                continue
            quantity = Fraction(max(0, base_quantity[name] + rng.randint(-30, 40)))
            value = base_value[name] * Fraction(rng.randint(80, 125), 100)
            line = FlowLine(name, kind, cash, quantity, value)
            lines.append(line)
            if with_stocks and cash and line.value > 0 and rng.random() < 0.6:
                carried = Fraction(rng.randint(0, 100), 100)
                stocks.append(FlowStock(period, name, line.value * carried))
        result = sum((l.value for l in lines if l.kind is FlowKind.PRODUCT), Fraction(0)) - sum(
            (l.value for l in lines if l.kind is FlowKind.INPUT), Fraction(0)
        )
        accounts.append(
            PeriodAccount(
                period=period,
                lines=tuple(lines),
                result_before_tax=result,
                tax=Fraction(rng.randint(0, 60)),
            )
        )
    return validate_ledger(accounts, stocks)


@pytest.fixture
def farm_ledger() -> Ledger:
    """Three periods, mixed cash and calculated flows, known stocks."""
    a1 = build_account(
        1,
        [
            ("grain", FlowKind.PRODUCT, True, 100, 6),
            ("straw", FlowKind.PRODUCT, True, 50, 2),
            ("seed", FlowKind.INPUT, True, 20, 5),
            ("labor", FlowKind.INPUT, True, 30, 4),
            ("depreciation", FlowKind.INPUT, False, 10, 8),
        ],
        tax=100,
    )
    a2 = build_account(
        2,
        [
            ("grain", FlowKind.PRODUCT, True, 110, 7),
            ("straw", FlowKind.PRODUCT, True, 40, 2),
            ("seed", FlowKind.INPUT, True, 25, 4),
            ("labor", FlowKind.INPUT, True, 33, 5),
            ("depreciation", FlowKind.INPUT, False, 12, 8),
        ],
        tax=120,
    )
    a3 = build_account(
        3,
        [
            ("grain", FlowKind.PRODUCT, True, 120, 7),
            ("straw", FlowKind.PRODUCT, True, 45, 3),
            ("seed", FlowKind.INPUT, True, 20, 4),
            ("labor", FlowKind.INPUT, True, 35, 5),
            ("depreciation", FlowKind.INPUT, False, 12, 9),
        ],
        tax=150,
    )
    stocks = [
        FlowStock(1, "grain", 120),
        FlowStock(1, "seed", 20),
        FlowStock(2, "grain", 154),
        FlowStock(2, "seed", 10),
        FlowStock(3, "grain", 84),
        FlowStock(3, "seed", 16),
    ]
    return validate_ledger([a1, a2, a3], stocks)
