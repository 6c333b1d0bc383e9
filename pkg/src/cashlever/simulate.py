"""Day-level cash simulation.

This is the reference machine the closed-form thresholds are checked
against.  A month is 30 days.  Units are sold one whole unit at a time,
following the cumulative sales curve rounded down to integers, so a
steady 30 units a month means exactly one unit a day.

Cash events:
  * day 0: disbursed fixed charges (minus the modulated part) and the
    anticipated variable costs leave the account;
  * end of the modulation month: the modulated fixed charges leave;
  * each sale: revenue arrives after the customer credit, the variable
    cost leaves after the supplier credit, and under single-input
    anticipation the replacement cost of the consumed input leaves the
    same day the unit is sold.

Solvency is read on the cumulative balance: the day after the last
negative balance, i.e. the point past which cash stays non-negative
through the horizon.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .model import AnticipationCase, CashLagProfile, CostStructure

DAYS_PER_MONTH = 30
ZERO = Fraction(0)


def _floor(value: Fraction) -> int:
    return value.numerator // value.denominator


@dataclass(frozen=True)
class MonthlyRow:
    """One month of the simulation, aggregated from the daily grid."""

    month: int
    units_sold: int
    receipts: Fraction
    disbursements: Fraction
    balance_end: Fraction


@dataclass(frozen=True)
class CashSimulation:
    horizon_days: int
    cumulative_units: Tuple[int, ...]
    receipts: Tuple[Fraction, ...]
    disbursements: Tuple[Fraction, ...]
    balance: Tuple[Fraction, ...]
    first_solvent_day: Optional[int]
    solvency_day: Optional[int]

    @property
    def solvency_units(self) -> Optional[int]:
        """Units sold by the day cash settles above zero for good."""
        if self.solvency_day is None:
            return None
        return self.cumulative_units[self.solvency_day]

    @property
    def solvency_month(self) -> Optional[int]:
        if self.solvency_day is None:
            return None
        return -(-self.solvency_day // DAYS_PER_MONTH)

    def monthly(self) -> Tuple[MonthlyRow, ...]:
        """Aggregate the daily grid into calendar months."""
        rows = []
        months = self.horizon_days // DAYS_PER_MONTH
        for month in range(1, months + 1):
            start = (month - 1) * DAYS_PER_MONTH
            end = month * DAYS_PER_MONTH
            receipts = sum(self.receipts[start + 1 : end + 1], ZERO)
            disbursements = sum(self.disbursements[start + 1 : end + 1], ZERO)
            if month == 1:
                receipts += self.receipts[0]
                disbursements += self.disbursements[0]
            rows.append(
                MonthlyRow(
                    month=month,
                    units_sold=self.cumulative_units[end] - self.cumulative_units[start],
                    receipts=receipts,
                    disbursements=disbursements,
                    balance_end=self.balance[end],
                )
            )
        return tuple(rows)


def cumulative_sales(profile: CashLagProfile, horizon_days: int) -> List[int]:
    """Units sold by the end of each day, day 0 included.

    Steady profiles spread monthly_sales evenly; seasonal profiles
    spread each month's share of the annual volume evenly inside the
    month, repeating the 12-month pattern.  A production cycle caps
    cumulative sales at cycle_months * monthly_sales.
    """
    rate = profile.monthly_sales
    if rate <= 0:
        return [0] * (horizon_days + 1)
    cap: Optional[int] = None
    if profile.cycle_months is not None:
        cap = _floor(rate * profile.cycle_months)
    units = [0] * (horizon_days + 1)
    if profile.seasonal_weights is None:
        num, den = rate.numerator, rate.denominator * DAYS_PER_MONTH
        for day in range(1, horizon_days + 1):
            sold = (num * day) // den
            units[day] = sold if cap is None else min(sold, cap)
        return units
    annual = rate * 12
    month_volumes = [annual * weight for weight in profile.seasonal_weights]
    cumulative_months = [ZERO]
    for volume in month_volumes:
        cumulative_months.append(cumulative_months[-1] + volume)
    for day in range(1, horizon_days + 1):
        month_index = -(-day // DAYS_PER_MONTH)
        offset = day - (month_index - 1) * DAYS_PER_MONTH
        years, month_in_year = divmod(month_index - 1, 12)
        base = annual * years + cumulative_months[month_in_year]
        sold = _floor(base + month_volumes[month_in_year] * Fraction(offset, DAYS_PER_MONTH))
        units[day] = sold if cap is None else min(sold, cap)
    return units


def simulate_cash_days(
    cost: CostStructure,
    profile: CashLagProfile,
    horizon_months: int,
    schedule: Optional[Sequence[int]] = None,
) -> CashSimulation:
    """Run the daily cash machine over `horizon_months` 30-day months.

    `schedule` overrides the cumulative sales curve (same length as the
    day grid); callers normally leave it to the profile.
    """
    if horizon_months < 1:
        raise ValueError("horizon must cover at least one month")
    horizon_days = horizon_months * DAYS_PER_MONTH
    if schedule is None:
        units = cumulative_sales(profile, horizon_days)
    else:
        units = list(schedule)
        if len(units) != horizon_days + 1:
            raise ValueError("schedule must give cumulative units for each day incl. day 0")

    receipts = [ZERO] * (horizon_days + 1)
    disbursements = [ZERO] * (horizon_days + 1)

    upfront = cost.fixed_cash - profile.modulated_fixed + profile.anticipated_variable
    disbursements[0] += upfront
    if profile.modulated_fixed:
        due = profile.modulation_month * DAYS_PER_MONTH
        if due <= horizon_days:
            disbursements[due] += profile.modulated_fixed

    collect_lag = profile.customer_credit_months * DAYS_PER_MONTH
    settle_lag = profile.supplier_credit_months * DAYS_PER_MONTH
    replace_cost = (
        profile.anticipated_unit_cost
        if profile.anticipation_case is AnticipationCase.SINGLE_INPUT_ALL_UPFRONT
        else ZERO
    )
    price = cost.unit_price
    variable = cost.unit_variable_cost
    for day in range(1, horizon_days + 1):
        sold = units[day] - units[day - 1]
        if not sold:
            continue
        inflow_day = day + collect_lag
        if inflow_day <= horizon_days:
            receipts[inflow_day] += price * sold
        outflow_day = day + settle_lag
        if outflow_day <= horizon_days:
            disbursements[outflow_day] += variable * sold
        if replace_cost:
            disbursements[day] += replace_cost * sold

    balance = []
    running = ZERO
    last_negative = None
    for day in range(horizon_days + 1):
        running += receipts[day] - disbursements[day]
        balance.append(running)
        if running < 0:
            last_negative = day

    if last_negative is None:
        solvency_day = 0
    elif last_negative == horizon_days:
        solvency_day = None
    else:
        solvency_day = last_negative + 1

    first_solvent_day = None
    for day in range(horizon_days + 1):
        if balance[day] >= 0:
            first_solvent_day = day
            break

    return CashSimulation(
        horizon_days=horizon_days,
        cumulative_units=tuple(units),
        receipts=tuple(receipts),
        disbursements=tuple(disbursements),
        balance=tuple(balance),
        first_solvent_day=first_solvent_day,
        solvency_day=solvency_day,
    )
