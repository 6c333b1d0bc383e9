"""Productivity surplus accounts between two consecutive periods.

The productivity surplus values quantity changes at previous-period
prices: extra product quantities count positive, extra input quantities
negative.  The surplus account then shows who funded it and who
received it: every unit value change, valued at current quantities,
sits on one side, the result change closes the account.  Totals balance
exactly by construction; `balance_ok` re-checks it on the emitted
figures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .model import FlowKind, MatchedFlow, PeriodAccount, match_flows

ZERO = Fraction(0)


@dataclass(frozen=True)
class SurplusEntry:
    """One side entry of the surplus account.

    source is "productivity", "price" (a product's unit value moved),
    "cost" (an input's unit value moved) or "result".  Amounts are
    strictly positive; the side carries the sign.
    """

    source: str
    flow_id: Optional[str]
    amount: Fraction


@dataclass(frozen=True)
class SurplusReport:
    productivity_surplus: Fraction
    resources: Tuple[SurplusEntry, ...]
    uses: Tuple[SurplusEntry, ...]
    total_resources: Fraction
    total_uses: Fraction
    balance_ok: bool
    result_change_before_tax: Fraction
    tax_change: Fraction

    @property
    def result_change_after_tax(self) -> Fraction:
        return self.result_change_before_tax - self.tax_change


@dataclass(frozen=True)
class CafSurplusReport:
    """Variation of self-financing split into surplus-style effects.

    The non-cash effects decompose the change in calculated charges
    (quantity at previous unit values, unit values at previous
    quantities, and the cross term); adding the after-tax result change
    reproduces the self-financing variation exactly.
    """

    noncash_quantity_effect: Fraction
    noncash_price_effect: Fraction
    noncash_cross_effect: Fraction
    result_change: Fraction
    total: Fraction


def productivity_surplus(prev: PeriodAccount, curr: PeriodAccount) -> Fraction:
    """Quantity changes valued at previous-period unit values."""
    total = ZERO
    for flow in match_flows(prev, curr):
        term = flow.quantity_delta * flow.unit_value_prev
        total += term if flow.kind is FlowKind.PRODUCT else -term
    return total


def surplus_accounts(prev: PeriodAccount, curr: PeriodAccount) -> SurplusReport:
    """Split the surplus and every unit value change into resources and uses."""
    resources = []
    uses = []

    surplus = productivity_surplus(prev, curr)
    if surplus > 0:
        resources.append(SurplusEntry("productivity", None, surplus))
    elif surplus < 0:
        uses.append(SurplusEntry("productivity", None, -surplus))

    for flow in match_flows(prev, curr):
        effect = flow.unit_value_delta * flow.quantity_curr
        if effect == 0:
            continue
        if flow.kind is FlowKind.PRODUCT:
            side = resources if effect > 0 else uses
            side.append(SurplusEntry("price", flow.id, abs(effect)))
        else:
            side = uses if effect > 0 else resources
            side.append(SurplusEntry("cost", flow.id, abs(effect)))

    result_change = curr.result_before_tax - prev.result_before_tax
    if result_change > 0:
        uses.append(SurplusEntry("result", None, result_change))
    elif result_change < 0:
        resources.append(SurplusEntry("result", None, -result_change))

    total_resources = sum((entry.amount for entry in resources), ZERO)
    total_uses = sum((entry.amount for entry in uses), ZERO)
    return SurplusReport(
        productivity_surplus=surplus,
        resources=tuple(resources),
        uses=tuple(uses),
        total_resources=total_resources,
        total_uses=total_uses,
        balance_ok=total_resources == total_uses,
        result_change_before_tax=result_change,
        tax_change=curr.tax - prev.tax,
    )


def caf_surplus(prev: PeriodAccount, curr: PeriodAccount) -> CafSurplusReport:
    """Decompose the self-financing variation like a surplus account.

    Only non-cash lines develop quantity, price and cross effects
    (calculated charges positive, calculated products negative); cash
    lines and tax travel through the after-tax result change.
    """
    quantity_effect = ZERO
    price_effect = ZERO
    cross_effect = ZERO
    for flow in match_flows(prev, curr):
        if flow.cash:
            continue
        sign = 1 if flow.kind is FlowKind.INPUT else -1
        quantity_effect += sign * flow.quantity_delta * flow.unit_value_prev
        price_effect += sign * flow.quantity_prev * flow.unit_value_delta
        cross_effect += sign * flow.quantity_delta * flow.unit_value_delta
    result_change = curr.result_after_tax - prev.result_after_tax
    return CafSurplusReport(
        noncash_quantity_effect=quantity_effect,
        noncash_price_effect=price_effect,
        noncash_cross_effect=cross_effect,
        result_change=result_change,
        total=quantity_effect + price_effect + cross_effect + result_change,
    )
