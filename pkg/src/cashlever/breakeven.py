"""Cash breakeven thresholds.

The liquidity threshold ignores timing: disbursed fixed charges over
unit margin.  The solvency threshold prices the timing of cash in and
out through four adjustments, each expressed in money and divided by
the effective unit margin:

  * modulated fixed charges, deducted when their payment falls after
    the pre-modulation threshold is sold;
  * anticipated variable costs, added (and under single-input
    anticipation the unit margin also shrinks by the replacement cost);
  * supplier credit, deducted as variable cost of the credit window;
  * customer credit, added as revenue of the credit window.

Two caps bound the standard formula.  Receipts must first absorb every
up-front disbursement, which floors the threshold at anticipated
charges over the unit price net of any immediate replacement cost.
And when a production cycle cannot reach the standard threshold, the
whole cycle's charges must clear through the units actually sold,
which reprices the threshold at total charges over unit price (net of
the supplier credit still outstanding if the account settles before
that credit falls due).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple

from .errors import DomainError, InfeasibleCycle, NeverSolvent, NonPositiveMargin
from .model import AnticipationCase, CashLagProfile, CostStructure
from .simulate import DAYS_PER_MONTH, CashSimulation, MonthlyRow, simulate_cash_days

ZERO = Fraction(0)


class BindingFormula(str, Enum):
    STANDARD = "standard"
    ANTICIPATED_CAP = "anticipated_cap"
    TOTAL_CHARGES_CAP = "total_charges_cap"


@dataclass(frozen=True)
class ThresholdComponents:
    """Money components entering the solvency threshold.

    The conventional short names used in reports: CFD disbursed fixed
    charges, MCFD the modulated part actually deducted, CVA anticipated
    variable costs, CVD the supplier credit offset, ED the customer
    credit charge, MUSCV the effective unit margin.
    """

    fixed_cash: Fraction
    modulated_deducted: Fraction
    modulation_effective: bool
    anticipated_variable: Fraction
    supplier_credit_offset: Fraction
    customer_credit_charge: Fraction
    effective_margin: Fraction

    def as_mapping(self) -> dict:
        return {
            "CFD": self.fixed_cash,
            "MCFD": self.modulated_deducted,
            "CVA": self.anticipated_variable,
            "CVD": self.supplier_credit_offset,
            "ED": self.customer_credit_charge,
            "MUSCV": self.effective_margin,
        }


@dataclass(frozen=True)
class ThresholdReport:
    liquidity_threshold: Fraction
    solvency_threshold: Fraction
    binding_formula: BindingFormula
    components: ThresholdComponents
    capacity: Optional[Fraction] = None


@dataclass(frozen=True)
class SeasonalSolvency:
    """Solvency read on a simulated, possibly seasonal, cash curve."""

    solvency_day: int
    solvency_month: int
    solvency_units: int
    monthly: Tuple[MonthlyRow, ...]
    simulation: CashSimulation


def liquidity_threshold(cost: CostStructure) -> Fraction:
    """Units to sell so that margins cover the disbursed fixed charges."""
    if cost.unit_margin <= 0:
        raise NonPositiveMargin(
            f"unit margin {cost.unit_margin} never covers fixed charges"
        )
    return cost.fixed_cash / cost.unit_margin


def effective_margin(cost: CostStructure, profile: CashLagProfile) -> Fraction:
    """Unit margin net of the immediate replacement cost, if any."""
    if profile.anticipation_case is AnticipationCase.SINGLE_INPUT_ALL_UPFRONT:
        return cost.unit_margin - profile.anticipated_unit_cost
    return cost.unit_margin


def supplier_credit_offset(cost: CostStructure, profile: CashLagProfile) -> Fraction:
    """Variable costs rolled forward by supplier credit, in money."""
    return cost.unit_variable_cost * profile.supplier_credit_months * profile.monthly_sales


def customer_credit_delay(cost: CostStructure, profile: CashLagProfile) -> Fraction:
    """Revenue immobilised by customer credit, in money."""
    return cost.unit_price * profile.customer_credit_months * profile.monthly_sales


def _ceil(value: Fraction) -> int:
    return -((-value.numerator) // value.denominator)


def solvency_threshold(cost: CostStructure, profile: CashLagProfile) -> ThresholdReport:
    """Solvency threshold under a steady sales rate.

    Returns the threshold in units together with the liquidity
    threshold, the binding formula and the money components.  Seasonal
    profiles have no closed form; use :func:`seasonal_solvency`.
    """
    if profile.seasonal_weights is not None:
        raise DomainError(
            "seasonal profiles have no closed-form threshold; use seasonal_solvency"
        )
    margin = effective_margin(cost, profile)
    if margin <= 0:
        raise NonPositiveMargin(
            f"effective unit margin {margin} never covers fixed charges"
        )
    if profile.modulated_fixed > cost.fixed_cash:
        raise DomainError(
            f"modulated fixed charges {profile.modulated_fixed} exceed "
            f"the disbursed fixed charges {cost.fixed_cash}"
        )
    liquidity = liquidity_threshold(cost)

    fixed_cash = cost.fixed_cash
    anticipated = profile.anticipated_variable
    credit_offset = supplier_credit_offset(cost, profile)
    credit_charge = customer_credit_delay(cost, profile)
    price = cost.unit_price
    replacement = cost.unit_margin - margin
    # What one sale brings in before its own variable cost falls due.
    net_price = price - replacement

    # Modulation only helps when the payment is covered by the margins
    # accumulated at its date, i.e. when at least the pre-modulation
    # threshold has been sold by the end of the disbursement month.
    # At exact equality the balance touches zero and stays solvent.
    modulated = ZERO
    modulation_effective = False
    if profile.modulated_fixed > 0:
        pre = max(
            (fixed_cash + anticipated - credit_offset + credit_charge) / margin,
            (fixed_cash + anticipated + credit_charge) / net_price,
        )
        threshold_month = _ceil(pre / profile.monthly_sales)
        if profile.modulation_month >= threshold_month:
            modulated = profile.modulated_fixed
            modulation_effective = True

    standard = (fixed_cash - modulated + anticipated - credit_offset + credit_charge) / margin
    floor = (fixed_cash - modulated + anticipated + credit_charge) / net_price
    if floor > standard:
        threshold, binding = floor, BindingFormula.ANTICIPATED_CAP
    else:
        threshold, binding = standard, BindingFormula.STANDARD

    capacity: Optional[Fraction] = None
    if profile.cycle_months is not None:
        capacity = profile.monthly_sales * profile.cycle_months
        if threshold > capacity:
            if margin * capacity < fixed_cash + anticipated:
                raise InfeasibleCycle(
                    f"a cycle of {capacity} units cannot disburse its own charges"
                )
            # Counted in sales equivalents past the end of the cycle.
            # Whether the account settles before or after the trailing
            # supplier credit falls due picks the regime; the two agree
            # at the regime boundary, so the earlier one is the smaller.
            total = fixed_cash + anticipated + replacement * capacity + credit_charge
            trailing = (total - credit_offset) / (price - cost.unit_variable_cost)
            after = (total + cost.unit_variable_cost * capacity) / price
            threshold = min(trailing, after)
            binding = BindingFormula.TOTAL_CHARGES_CAP
            modulated = ZERO
            modulation_effective = False

    components = ThresholdComponents(
        fixed_cash=fixed_cash,
        modulated_deducted=modulated,
        modulation_effective=modulation_effective,
        anticipated_variable=anticipated,
        supplier_credit_offset=credit_offset,
        customer_credit_charge=credit_charge,
        effective_margin=margin,
    )
    return ThresholdReport(
        liquidity_threshold=liquidity,
        solvency_threshold=threshold,
        binding_formula=binding,
        components=components,
        capacity=capacity,
    )


def seasonal_solvency(
    cost: CostStructure,
    profile: CashLagProfile,
    horizon_months: int,
) -> SeasonalSolvency:
    """Solvency point of a simulated cash curve, seasonal or not.

    Raises NeverSolvent when the balance is still negative at the end
    of the horizon.
    """
    simulation = simulate_cash_days(cost, profile, horizon_months)
    if simulation.solvency_day is None:
        raise NeverSolvent(
            f"cash is still negative after {horizon_months} months"
        )
    return SeasonalSolvency(
        solvency_day=simulation.solvency_day,
        solvency_month=simulation.solvency_month,
        solvency_units=simulation.solvency_units,
        monthly=simulation.monthly(),
        simulation=simulation,
    )
