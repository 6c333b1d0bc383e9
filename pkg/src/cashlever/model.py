"""Core data model: cost structures, cash lag profiles and flow ledgers.

Two families of inputs feed the package.  Threshold and leverage work
starts from a :class:`CostStructure` (one product, fixed and variable
charges) optionally refined by a :class:`CashLagProfile` describing when
cash actually moves.  Surplus accounting and the cash decomposition
start from a multi-period ledger of :class:`FlowLine` quantities and
unit values, validated into a :class:`Ledger`.

All amounts are `fractions.Fraction`; see :mod:`cashlever.numeric`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from .errors import (
    IdentityViolation,
    InsufficientPeriods,
    NegativeQuantity,
    UnmatchedFlow,
    ValidationError,
)
from .numeric import RatioLike, as_ratio

ZERO = Fraction(0)


class FlowKind(str, Enum):
    """Side of the operating account a flow belongs to."""

    PRODUCT = "product"
    INPUT = "input"


class AnticipationCase(str, Enum):
    """How anticipated variable costs behave once sales start.

    WHOLE_UNITS: a buffer of finished units is financed up front and
    every sale triggers the replacement of a whole unit, so the unit
    margin is untouched and only the advance weighs on cash.

    SINGLE_INPUT_ALL_UPFRONT: one input is bought in bulk before the
    cycle; replacing the quantity consumed by each sale costs
    `anticipated_unit_cost` in immediate cash on top of the normal
    variable disbursement, which shrinks the effective unit margin.
    """

    WHOLE_UNITS = "whole_units"
    SINGLE_INPUT_ALL_UPFRONT = "single_input_all_upfront"


@dataclass(frozen=True)
class CostStructure:
    """Single-product cost structure.

    Attributes:
        fixed_cash: fixed charges that are disbursed (rent, wages...).
        fixed_noncash: calculated fixed charges, mainly depreciation,
            which never leave the cash account.
        unit_price: selling price per unit.
        unit_variable_cost: variable charge per unit, assumed disbursed
            when the unit is sold unless a lag profile says otherwise.
    """

    fixed_cash: Fraction
    fixed_noncash: Fraction
    unit_price: Fraction
    unit_variable_cost: Fraction

    def __post_init__(self) -> None:
        for name in ("fixed_cash", "fixed_noncash", "unit_price", "unit_variable_cost"):
            object.__setattr__(self, name, as_ratio(getattr(self, name)))
        if self.fixed_cash < 0 or self.fixed_noncash < 0:
            raise ValueError("fixed charges must be non-negative")
        if self.unit_price <= 0:
            raise ValueError("unit price must be positive")
        if self.unit_variable_cost < 0:
            raise ValueError("unit variable cost must be non-negative")

    @property
    def fixed_total(self) -> Fraction:
        return self.fixed_cash + self.fixed_noncash

    @property
    def unit_margin(self) -> Fraction:
        """Margin on variable costs per unit."""
        return self.unit_price - self.unit_variable_cost

    @classmethod
    def from_totals(
        cls,
        fixed_total: RatioLike,
        fixed_cash: RatioLike,
        unit_price: RatioLike,
        unit_variable_cost: RatioLike,
    ) -> "CostStructure":
        """Build from total and disbursed fixed charges."""
        total = as_ratio(fixed_total)
        cash = as_ratio(fixed_cash)
        if total < cash:
            raise ValueError("total fixed charges below the disbursed part")
        return cls(cash, total - cash, as_ratio(unit_price), as_ratio(unit_variable_cost))


@dataclass(frozen=True)
class CashLagProfile:
    """Timing adjustments between accounting flows and cash movements.

    Everything defaults to zero, which means cash moves the instant the
    accounting flow is booked.  Months are whole numbers; a month is 30
    days in the day-level simulation.

    Attributes:
        modulated_fixed: part of the disbursed fixed charges whose
            payment is pushed to the end of `modulation_month`.
        modulation_month: month (1-based) at whose end the modulated
            fixed charges are actually paid.
        anticipated_variable: variable costs disbursed at day zero, for
            instance the financing of an opening stock.
        anticipation_case: see :class:`AnticipationCase`.
        anticipated_unit_cost: immediate replacement cost per unit sold,
            only meaningful for SINGLE_INPUT_ALL_UPFRONT.
        supplier_credit_months: delay between a sale and the
            disbursement of its variable cost.
        customer_credit_months: delay between a sale and the collection
            of its revenue.
        monthly_sales: steady sales rate in units per month.  Required
            as soon as any timing adjustment is active.
        seasonal_weights: optional 12 non-negative weights splitting the
            annual volume (12 * monthly_sales) across months.  They are
            normalised to sum to one.
        cycle_months: optional length of the production cycle; sales
            stop once cycle_months * monthly_sales units are sold.
    """

    modulated_fixed: Fraction = ZERO
    modulation_month: int = 0
    anticipated_variable: Fraction = ZERO
    anticipation_case: AnticipationCase = AnticipationCase.WHOLE_UNITS
    anticipated_unit_cost: Fraction = ZERO
    supplier_credit_months: int = 0
    customer_credit_months: int = 0
    monthly_sales: Fraction = ZERO
    seasonal_weights: Optional[Tuple[Fraction, ...]] = None
    cycle_months: Optional[int] = None

    def __post_init__(self) -> None:
        for name in ("modulated_fixed", "anticipated_variable", "anticipated_unit_cost", "monthly_sales"):
            object.__setattr__(self, name, as_ratio(getattr(self, name)))
        object.__setattr__(self, "anticipation_case", AnticipationCase(self.anticipation_case))
        for name in ("modulation_month", "supplier_credit_months", "customer_credit_months"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a non-negative whole number")
        if self.modulated_fixed < 0 or self.anticipated_variable < 0:
            raise ValueError("modulated and anticipated amounts must be non-negative")
        if self.modulated_fixed > 0 and self.modulation_month < 1:
            raise ValueError("modulated fixed charges need a disbursement month >= 1")
        if self.anticipated_unit_cost < 0:
            raise ValueError("anticipated unit cost must be non-negative")
        if self.anticipation_case is AnticipationCase.SINGLE_INPUT_ALL_UPFRONT:
            if self.anticipated_unit_cost == 0:
                raise ValueError("single input anticipation needs a unit replacement cost")
        elif self.anticipated_unit_cost != 0:
            raise ValueError("anticipated unit cost only applies to the single input case")
        if self.monthly_sales < 0:
            raise ValueError("monthly sales must be non-negative")
        if self.seasonal_weights is not None:
            weights = tuple(as_ratio(w) for w in self.seasonal_weights)
            if len(weights) != 12:
                raise ValueError("seasonal weights must cover exactly 12 months")
            if any(w < 0 for w in weights):
                raise ValueError("seasonal weights must be non-negative")
            total = sum(weights)
            if total == 0:
                raise ValueError("seasonal weights must not all be zero")
            object.__setattr__(self, "seasonal_weights", tuple(w / total for w in weights))
        if self.cycle_months is not None:
            if not isinstance(self.cycle_months, int) or self.cycle_months < 1:
                raise ValueError("cycle_months must be a positive whole number")
        if self.has_adjustments and self.monthly_sales <= 0:
            raise ValueError("timing adjustments need a positive monthly sales rate")

    @property
    def has_adjustments(self) -> bool:
        """True when any cash timing differs from the accounting flow."""
        return bool(
            self.modulated_fixed
            or self.anticipated_variable
            or self.supplier_credit_months
            or self.customer_credit_months
            or self.seasonal_weights is not None
            or self.cycle_months is not None
        )

    @classmethod
    def none(cls) -> "CashLagProfile":
        return cls()


@dataclass(frozen=True)
class FlowLine:
    """One operating flow of a period: a product sold or an input used.

    `cash` tells whether the flow moves money at all.  Depreciation and
    other calculated charges are booked with cash=False.
    """

    id: str
    kind: FlowKind
    cash: bool
    quantity: Fraction
    unit_value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", FlowKind(self.kind))
        object.__setattr__(self, "quantity", as_ratio(self.quantity))
        object.__setattr__(self, "unit_value", as_ratio(self.unit_value))
        if not self.id:
            raise ValueError("flow line needs a non-empty id")
        if not isinstance(self.cash, bool):
            raise ValueError("cash flag must be a boolean")
        if self.quantity < 0:
            raise NegativeQuantity(f"flow {self.id!r}: negative quantity {self.quantity}")
        if self.unit_value < 0:
            raise NegativeQuantity(f"flow {self.id!r}: negative unit value {self.unit_value}")

    @property
    def value(self) -> Fraction:
        return self.quantity * self.unit_value


@dataclass(frozen=True)
class PeriodAccount:
    """Operating account of one period.

    The stated `result_before_tax` is redundant with the lines; the
    redundancy is deliberate and checked by :func:`validate_ledger`.
    """

    period: int
    lines: Tuple[FlowLine, ...]
    result_before_tax: Fraction
    tax: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lines", tuple(self.lines))
        object.__setattr__(self, "result_before_tax", as_ratio(self.result_before_tax))
        object.__setattr__(self, "tax", as_ratio(self.tax))
        seen = set()
        for line in self.lines:
            if line.id in seen:
                raise UnmatchedFlow(f"period {self.period}: duplicate flow id {line.id!r}")
            seen.add(line.id)

    @property
    def result_after_tax(self) -> Fraction:
        return self.result_before_tax - self.tax

    def line(self, flow_id: str) -> Optional[FlowLine]:
        for candidate in self.lines:
            if candidate.id == flow_id:
                return candidate
        return None

    def iter_lines(self, kind: Optional[FlowKind] = None, cash: Optional[bool] = None) -> Iterator[FlowLine]:
        for line in self.lines:
            if kind is not None and line.kind is not kind:
                continue
            if cash is not None and line.cash is not cash:
                continue
            yield line

    def total(self, kind: FlowKind, cash: Optional[bool] = None) -> Fraction:
        return sum((line.value for line in self.iter_lines(kind, cash)), ZERO)

    @property
    def computed_result_before_tax(self) -> Fraction:
        return self.total(FlowKind.PRODUCT) - self.total(FlowKind.INPUT)

    @property
    def noncash_net_charges(self) -> Fraction:
        """Calculated charges minus calculated products of the period."""
        return self.total(FlowKind.INPUT, cash=False) - self.total(FlowKind.PRODUCT, cash=False)

    @property
    def self_financing(self) -> Fraction:
        """Self-financing capacity: after-tax result plus net calculated
        charges, identically the net booked cash flow minus tax."""
        return self.result_after_tax + self.noncash_net_charges


@dataclass(frozen=True)
class FlowStock:
    """Closing stock carried by one cash flow line at one period end."""

    period: int
    flow_id: str
    stock_end: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "stock_end", as_ratio(self.stock_end))
        if self.stock_end < 0:
            raise NegativeQuantity(
                f"period {self.period}, flow {self.flow_id!r}: negative stock {self.stock_end}"
            )


@dataclass(frozen=True)
class MatchedFlow:
    """A flow id paired across two consecutive periods.

    A line absent on one side contributes zero quantity at zero unit
    value, so new and discontinued flows decompose like any other.
    """

    id: str
    kind: FlowKind
    cash: bool
    quantity_prev: Fraction
    unit_value_prev: Fraction
    quantity_curr: Fraction
    unit_value_curr: Fraction

    @property
    def value_prev(self) -> Fraction:
        return self.quantity_prev * self.unit_value_prev

    @property
    def value_curr(self) -> Fraction:
        return self.quantity_curr * self.unit_value_curr

    @property
    def quantity_delta(self) -> Fraction:
        return self.quantity_curr - self.quantity_prev

    @property
    def unit_value_delta(self) -> Fraction:
        return self.unit_value_curr - self.unit_value_prev


@dataclass(frozen=True)
class Ledger:
    """Validated multi-period ledger.  Build through :func:`validate_ledger`."""

    accounts: Tuple[PeriodAccount, ...]
    stocks: Tuple[FlowStock, ...]
    _stock_index: Mapping[Tuple[int, str], Fraction] = field(repr=False, compare=False, default=None)

    def __post_init__(self) -> None:
        if self._stock_index is None:
            index = {(stock.period, stock.flow_id): stock.stock_end for stock in self.stocks}
            object.__setattr__(self, "_stock_index", index)

    @property
    def periods(self) -> Tuple[int, ...]:
        return tuple(account.period for account in self.accounts)

    def account(self, period: int) -> PeriodAccount:
        for candidate in self.accounts:
            if candidate.period == period:
                return candidate
        raise InsufficientPeriods(f"no account for period {period}")

    def consecutive(self, period: int) -> Tuple[PeriodAccount, PeriodAccount]:
        """The accounts of `period` and `period + 1`."""
        return self.account(period), self.account(period + 1)

    def stock_end(self, period: int, flow_id: str) -> Fraction:
        """Closing stock for a flow, zero when none was declared."""
        return self._stock_index.get((period, flow_id), ZERO)


def match_flows(prev: PeriodAccount, curr: PeriodAccount) -> Tuple[MatchedFlow, ...]:
    """Pair the lines of two consecutive accounts by flow id.

    Order follows the previous account, then new flows in the order of
    the current one.  Raises UnmatchedFlow when an id changes kind or
    cash flag between the two periods.
    """
    matched = []
    curr_left = {line.id: line for line in curr.lines}
    for line in prev.lines:
        other = curr_left.pop(line.id, None)
        if other is not None and (other.kind is not line.kind or other.cash is not line.cash):
            raise UnmatchedFlow(
                f"flow {line.id!r} changes nature between periods "
                f"{prev.period} and {curr.period}"
            )
        matched.append(
            MatchedFlow(
                id=line.id,
                kind=line.kind,
                cash=line.cash,
                quantity_prev=line.quantity,
                unit_value_prev=line.unit_value,
                quantity_curr=other.quantity if other else ZERO,
                unit_value_curr=other.unit_value if other else ZERO,
            )
        )
    for line in curr.lines:
        if line.id in curr_left:
            matched.append(
                MatchedFlow(
                    id=line.id,
                    kind=line.kind,
                    cash=line.cash,
                    quantity_prev=ZERO,
                    unit_value_prev=ZERO,
                    quantity_curr=line.quantity,
                    unit_value_curr=line.unit_value,
                )
            )
    return tuple(matched)


def validate_ledger(
    accounts: Iterable[PeriodAccount],
    stocks: Iterable[FlowStock] = (),
) -> Ledger:
    """Check structural invariants and assemble a :class:`Ledger`.

    Checks, in order: at least one period and no duplicate period
    numbers; every period satisfies products - inputs =
    result_before_tax exactly; a flow id keeps its kind and cash flag
    across all periods; every stock references an existing cash line of
    its period, at most once.

    Raises:
        ValidationError subclasses as described in :mod:`cashlever.errors`.
    """
    ordered = tuple(sorted(accounts, key=lambda account: account.period))
    if not ordered:
        raise ValidationError("ledger has no periods")
    periods = [account.period for account in ordered]
    if len(set(periods)) != len(periods):
        raise ValidationError(f"duplicate period numbers in {periods}")

    for account in ordered:
        computed = account.computed_result_before_tax
        if computed != account.result_before_tax:
            raise IdentityViolation(
                f"period {account.period}: lines give a result of {computed}, "
                f"account states {account.result_before_tax}"
            )

    nature: dict[str, Tuple[FlowKind, bool]] = {}
    for account in ordered:
        for line in account.lines:
            known = nature.get(line.id)
            if known is None:
                nature[line.id] = (line.kind, line.cash)
            elif known != (line.kind, line.cash):
                raise UnmatchedFlow(
                    f"flow {line.id!r} changes nature in period {account.period}"
                )

    by_period = {account.period: account for account in ordered}
    index: dict[Tuple[int, str], Fraction] = {}
    stock_list = []
    for stock in stocks:
        account = by_period.get(stock.period)
        if account is None:
            raise UnmatchedFlow(f"stock references unknown period {stock.period}")
        line = account.line(stock.flow_id)
        if line is None:
            raise UnmatchedFlow(
                f"period {stock.period}: stock references unknown flow {stock.flow_id!r}"
            )
        if not line.cash:
            raise UnmatchedFlow(
                f"period {stock.period}: flow {stock.flow_id!r} is not cash effective, "
                "it cannot carry a cash stock"
            )
        key = (stock.period, stock.flow_id)
        if key in index:
            raise ValidationError(
                f"period {stock.period}: duplicate stock for flow {stock.flow_id!r}"
            )
        index[key] = stock.stock_end
        stock_list.append(stock)

    return Ledger(accounts=ordered, stocks=tuple(stock_list), _stock_index=index)
