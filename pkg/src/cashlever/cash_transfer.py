"""From accounting surplus to cash: transfer coefficients and the
decomposition of the operating cash surplus.

A booked flow only moves cash for the part that is not sitting in a
closing stock.  The carried fraction of a flow is stock over flow
value; its complement, the settled fraction, weights every surplus
term to turn it into cash.  Between two periods the settled value of a
flow then splits exactly into a productivity term (quantity change at
previous unit value and previous settled fraction), a price term (unit
value change at current quantity, previous settled fraction) and a
timing term (current value times the settled fraction change).

Stacking those terms by sign gives the classic table:

    I   productivity cash flow (receipts minus disbursements)
    II  transferred flows: the negative price, timing and tax terms
    III inherited flows: the positive ones
    IV  settled self-financing change = I + II + III,
        also non-cash effects plus the settled result change
    V   deferred net cash flow: booked minus settled result change,
        identical before or after tax
    VI  operating cash surplus = IV of the next transition + V

Row IV is computed through both routes and must agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Tuple

from .errors import CoefficientOutOfRange, DecompositionMismatch, InsufficientPeriods
from .model import FlowKind, Ledger, PeriodAccount, match_flows

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class FlowCoefficient:
    flow_id: str
    carried: Fraction
    settled: Fraction


@dataclass(frozen=True)
class TransferCoefficients:
    """Settled and carried fractions of every cash flow of a period."""

    period: int
    by_flow: Mapping[str, FlowCoefficient]

    def settled(self, flow_id: str) -> Fraction:
        coefficient = self.by_flow.get(flow_id)
        return coefficient.settled if coefficient else ONE

    def carried(self, flow_id: str) -> Fraction:
        coefficient = self.by_flow.get(flow_id)
        return coefficient.carried if coefficient else ZERO


def transfer_coefficients(ledger: Ledger, period: int) -> TransferCoefficients:
    """Carried fraction (stock over flow) per cash flow of a period.

    Raises CoefficientOutOfRange when a stock exceeds its flow or sits
    on a flow with no value.
    """
    account = ledger.account(period)
    by_flow = {}
    for line in account.iter_lines(cash=True):
        stock = ledger.stock_end(period, line.id)
        if stock == 0:
            carried = ZERO
        elif line.value == 0:
            raise CoefficientOutOfRange(
                f"period {period}: flow {line.id!r} has a stock but no value"
            )
        else:
            carried = stock / line.value
            if carried > 1:
                raise CoefficientOutOfRange(
                    f"period {period}: flow {line.id!r} carries {carried} of its value"
                )
        by_flow[line.id] = FlowCoefficient(line.id, carried, ONE - carried)
    return TransferCoefficients(period=period, by_flow=by_flow)


def unit_coefficients(period: int) -> TransferCoefficients:
    """Coefficients of a stockless period: everything settles."""
    return TransferCoefficients(period=period, by_flow={})


@dataclass(frozen=True)
class SettledTerm:
    """Signed cash effects of one flow across a transition."""

    flow_id: str
    kind: FlowKind
    productivity: Fraction
    price: Fraction
    timing: Fraction


@dataclass(frozen=True)
class TransferredCash:
    """Row II: surplus shares given away, all non-positive."""

    price_cut_receipts: Fraction
    slower_collections: Fraction
    cost_rise_disbursements: Fraction
    faster_settlements: Fraction
    tax_increase: Fraction

    @property
    def total(self) -> Fraction:
        return (
            self.price_cut_receipts
            + self.slower_collections
            + self.cost_rise_disbursements
            + self.faster_settlements
            + self.tax_increase
        )


@dataclass(frozen=True)
class InheritedCash:
    """Row III: advantages received, all non-negative."""

    price_rise_receipts: Fraction
    faster_collections: Fraction
    cost_cut_disbursements: Fraction
    slower_settlements: Fraction
    tax_relief: Fraction

    @property
    def total(self) -> Fraction:
        return (
            self.price_rise_receipts
            + self.faster_collections
            + self.cost_cut_disbursements
            + self.slower_settlements
            + self.tax_relief
        )


@dataclass(frozen=True)
class CafCashVariation:
    """Rows I to IV for one transition (prev period to curr period)."""

    period_prev: int
    period_curr: int
    productivity_receipts: Fraction
    productivity_disbursements: Fraction
    transferred: TransferredCash
    inherited: InheritedCash
    noncash_quantity_effect: Fraction
    noncash_price_effect: Fraction
    noncash_cross_effect: Fraction
    settled_result_change: Fraction
    settled_caf_change: Fraction
    terms: Tuple[SettledTerm, ...]

    @property
    def productivity_cash_flow(self) -> Fraction:
        return self.productivity_receipts + self.productivity_disbursements


def _settled_terms(
    prev: PeriodAccount,
    curr: PeriodAccount,
    coefficients_prev: TransferCoefficients,
    coefficients_curr: TransferCoefficients,
) -> Tuple[SettledTerm, ...]:
    terms = []
    for flow in match_flows(prev, curr):
        if not flow.cash:
            continue
        sign = 1 if flow.kind is FlowKind.PRODUCT else -1
        settled_prev = coefficients_prev.settled(flow.id)
        settled_curr = coefficients_curr.settled(flow.id)
        terms.append(
            SettledTerm(
                flow_id=flow.id,
                kind=flow.kind,
                productivity=sign * flow.quantity_delta * flow.unit_value_prev * settled_prev,
                price=sign * flow.quantity_curr * flow.unit_value_delta * settled_prev,
                timing=sign * flow.value_curr * (settled_curr - settled_prev),
            )
        )
    return tuple(terms)


def productivity_cash_flow(
    prev: PeriodAccount,
    curr: PeriodAccount,
    coefficients_prev: TransferCoefficients,
    coefficients_curr: TransferCoefficients,
) -> Fraction:
    """Row I: the productivity surplus that actually reaches cash."""
    terms = _settled_terms(prev, curr, coefficients_prev, coefficients_curr)
    return sum((term.productivity for term in terms), ZERO)


def transferred_and_inherited_cash(
    prev: PeriodAccount,
    curr: PeriodAccount,
    coefficients_prev: TransferCoefficients,
    coefficients_curr: TransferCoefficients,
) -> Tuple[TransferredCash, InheritedCash]:
    """Rows II and III: price, timing and tax terms split by sign."""
    terms = _settled_terms(prev, curr, coefficients_prev, coefficients_curr)
    buckets = {
        "price_cut_receipts": ZERO,
        "slower_collections": ZERO,
        "cost_rise_disbursements": ZERO,
        "faster_settlements": ZERO,
        "price_rise_receipts": ZERO,
        "faster_collections": ZERO,
        "cost_cut_disbursements": ZERO,
        "slower_settlements": ZERO,
    }
    for term in terms:
        if term.kind is FlowKind.PRODUCT:
            price_key = "price_cut_receipts" if term.price < 0 else "price_rise_receipts"
            timing_key = "slower_collections" if term.timing < 0 else "faster_collections"
        else:
            price_key = "cost_rise_disbursements" if term.price < 0 else "cost_cut_disbursements"
            timing_key = "faster_settlements" if term.timing < 0 else "slower_settlements"
        buckets[price_key] += term.price
        buckets[timing_key] += term.timing
    tax_effect = -(curr.tax - prev.tax)
    transferred = TransferredCash(
        price_cut_receipts=buckets["price_cut_receipts"],
        slower_collections=buckets["slower_collections"],
        cost_rise_disbursements=buckets["cost_rise_disbursements"],
        faster_settlements=buckets["faster_settlements"],
        tax_increase=min(tax_effect, ZERO),
    )
    inherited = InheritedCash(
        price_rise_receipts=buckets["price_rise_receipts"],
        faster_collections=buckets["faster_collections"],
        cost_cut_disbursements=buckets["cost_cut_disbursements"],
        slower_settlements=buckets["slower_settlements"],
        tax_relief=max(tax_effect, ZERO),
    )
    return transferred, inherited


def _settled_result(account: PeriodAccount, coefficients: TransferCoefficients) -> Fraction:
    """After-tax result with cash flows taken at their settled value."""
    settled_net = ZERO
    for line in account.iter_lines(cash=True):
        value = line.value * coefficients.settled(line.id)
        settled_net += value if line.kind is FlowKind.PRODUCT else -value
    return settled_net - account.noncash_net_charges - account.tax


def caf_cash_variation(
    prev: PeriodAccount,
    curr: PeriodAccount,
    coefficients_prev: TransferCoefficients,
    coefficients_curr: TransferCoefficients,
) -> CafCashVariation:
    """Row IV with its two routes, checked against each other.

    Route one stacks rows I, II and III.  Route two adds the non-cash
    surplus effects to the settled result change.  They are the same
    number by construction; a mismatch raises DecompositionMismatch.
    """
    terms = _settled_terms(prev, curr, coefficients_prev, coefficients_curr)
    receipts = sum((t.productivity for t in terms if t.kind is FlowKind.PRODUCT), ZERO)
    disbursements = sum((t.productivity for t in terms if t.kind is FlowKind.INPUT), ZERO)
    transferred, inherited = transferred_and_inherited_cash(
        prev, curr, coefficients_prev, coefficients_curr
    )
    route_one = receipts + disbursements + transferred.total + inherited.total

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
    settled_result_change = _settled_result(curr, coefficients_curr) - _settled_result(
        prev, coefficients_prev
    )
    route_two = quantity_effect + price_effect + cross_effect + settled_result_change

    if route_one != route_two:
        raise DecompositionMismatch(
            f"settled self-financing change differs between routes: "
            f"{route_one} against {route_two}"
        )
    return CafCashVariation(
        period_prev=prev.period,
        period_curr=curr.period,
        productivity_receipts=receipts,
        productivity_disbursements=disbursements,
        transferred=transferred,
        inherited=inherited,
        noncash_quantity_effect=quantity_effect,
        noncash_price_effect=price_effect,
        noncash_cross_effect=cross_effect,
        settled_result_change=settled_result_change,
        settled_caf_change=route_one,
        terms=terms,
    )


def deferred_net_cash_flow(
    prev: PeriodAccount,
    curr: PeriodAccount,
    coefficients_prev: TransferCoefficients,
    coefficients_curr: TransferCoefficients,
) -> Fraction:
    """Row V: change of the gap between booked and settled result.

    The gap of a period is the carried value of its cash flows, signed:
    product stocks hold receipts back, input stocks hold disbursements
    back.  Tax cancels in the difference, so before and after tax give
    the same number.
    """

    def gap(account: PeriodAccount, coefficients: TransferCoefficients) -> Fraction:
        total = ZERO
        for line in account.iter_lines(cash=True):
            carried = line.value * coefficients.carried(line.id)
            total += carried if line.kind is FlowKind.PRODUCT else -carried
        return total

    return gap(curr, coefficients_curr) - gap(prev, coefficients_prev)


@dataclass(frozen=True)
class CashDecompositionTable:
    """Full table around period `period`: rows I to IV describe the
    transition to the next period, row V the deferral inherited from
    the previous one, row VI their sum."""

    period: int
    variation: CafCashVariation
    deferred_net_cash: Fraction
    operating_cash_surplus: Fraction


def operating_cash_surplus(ledger: Ledger, period: int) -> CashDecompositionTable:
    """Row VI at `period`: settled self-financing change of the coming
    transition plus the deferred net cash flow materialising now.

    Needs periods period-1, period and period+1 in the ledger.
    """
    try:
        before = ledger.account(period - 1)
        here = ledger.account(period)
        after = ledger.account(period + 1)
    except InsufficientPeriods as exc:
        raise InsufficientPeriods(
            f"operating cash surplus at period {period} needs periods "
            f"{period - 1} to {period + 1}: {exc}"
        ) from exc
    coefficients = {
        account.period: transfer_coefficients(ledger, account.period)
        for account in (before, here, after)
    }
    variation = caf_cash_variation(
        here, after, coefficients[period], coefficients[period + 1]
    )
    deferred = deferred_net_cash_flow(
        before, here, coefficients[period - 1], coefficients[period]
    )
    return CashDecompositionTable(
        period=period,
        variation=variation,
        deferred_net_cash=deferred,
        operating_cash_surplus=variation.settled_caf_change + deferred,
    )


@dataclass(frozen=True)
class WaterfallReport:
    """Free cash flow waterfall with its balance-sheet reconciliation."""

    caf_before_interest: Fraction
    bfr_investment: Fraction
    operating_cash: Fraction
    net_investment: Fraction
    free_cash: Fraction
    working_capital_change: Fraction
    bfr_change: Fraction
    treasury_change: Fraction
    reconciliation_ok: bool


def fcf_waterfall(
    caf_before_interest: Fraction,
    bfr_investment: Fraction,
    net_investment: Fraction = ZERO,
    working_capital_change: Optional[Fraction] = None,
    treasury_change: Optional[Fraction] = None,
) -> WaterfallReport:
    """Stack self-financing down to free cash and reconcile treasury.

    Without explicit balance-sheet data, the working capital fund is
    assumed to move by self-financing minus net investments, and the
    treasury change follows as working capital change minus the working
    capital requirement change.
    """
    operating = caf_before_interest - bfr_investment
    free = operating - net_investment
    if working_capital_change is None:
        working_capital_change = caf_before_interest - net_investment
    if treasury_change is None:
        treasury_change = working_capital_change - bfr_investment
    return WaterfallReport(
        caf_before_interest=caf_before_interest,
        bfr_investment=bfr_investment,
        operating_cash=operating,
        net_investment=net_investment,
        free_cash=free,
        working_capital_change=working_capital_change,
        bfr_change=bfr_investment,
        treasury_change=treasury_change,
        reconciliation_ok=working_capital_change - bfr_investment == treasury_change,
    )


def working_capital_requirement(ledger: Ledger, period: int) -> Fraction:
    """Carried cash value at a period end: product stocks minus input stocks."""
    account = ledger.account(period)
    total = ZERO
    for line in account.iter_lines(cash=True):
        stock = ledger.stock_end(period, line.id)
        total += stock if line.kind is FlowKind.PRODUCT else -stock
    return total


def waterfall_from_ledger(
    ledger: Ledger,
    period: int,
    net_investment: Fraction = ZERO,
) -> WaterfallReport:
    """Waterfall of one period, working capital requirement from stocks."""
    account = ledger.account(period)
    previous = ledger.account(period - 1)
    bfr_investment = working_capital_requirement(ledger, period) - working_capital_requirement(
        ledger, previous.period
    )
    return fcf_waterfall(
        caf_before_interest=account.self_financing,
        bfr_investment=bfr_investment,
        net_investment=net_investment,
    )
