"""Treasury leverage: sensitivity of virtual cash to volume and margin.

Virtual treasury is unit margin times quantity minus a fixed charge
base.  Two bases are useful: the TERM variant counts every fixed
charge, so the critical point is the classic profitability breakeven;
the IMMEDIATE variant counts only the disbursed fixed charges, so the
critical point is the cash breakeven.  Elasticities blow up at the
critical point, which is the whole analytical interest.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Tuple

from .errors import AtCriticalMargin, AtCriticalProduction, NonPositiveMargin, ZeroProduction
from .model import CostStructure


class LeverageVariant(str, Enum):
    TERM = "term"
    IMMEDIATE = "immediate"


def fixed_basis(cost: CostStructure, variant: LeverageVariant) -> Fraction:
    """Fixed charge base of the chosen rupture variant."""
    if LeverageVariant(variant) is LeverageVariant.TERM:
        return cost.fixed_total
    return cost.fixed_cash


def virtual_treasury(cost: CostStructure, quantity: Fraction, variant: LeverageVariant = LeverageVariant.TERM) -> Fraction:
    """Margin earned on `quantity` minus the variant's fixed base."""
    return cost.unit_margin * quantity - fixed_basis(cost, variant)


def elasticity_wrt_volume(
    cost: CostStructure,
    quantity: Fraction,
    variant: LeverageVariant = LeverageVariant.TERM,
) -> Fraction:
    """Elasticity of virtual treasury with respect to sold volume.

    Computed as margin * quantity over (margin * quantity - fixed).
    Undefined exactly at the critical production, where the treasury
    changes sign through zero.
    """
    base = fixed_basis(cost, variant)
    gross = cost.unit_margin * quantity
    if gross == base:
        raise AtCriticalProduction(
            f"virtual treasury is zero at quantity {quantity}; elasticity diverges"
        )
    return gross / (gross - base)


def elasticity_wrt_margin(
    cost: CostStructure,
    quantity: Fraction,
    variant: LeverageVariant = LeverageVariant.TERM,
) -> Fraction:
    """Elasticity of virtual treasury with respect to unit margin.

    Computed as margin over (margin - fixed / quantity).  Identical in
    value to the volume elasticity at the same point.
    """
    if quantity == 0:
        raise ZeroProduction("margin elasticity needs a positive quantity")
    margin = cost.unit_margin
    pivot = fixed_basis(cost, variant) / quantity
    if margin == pivot:
        raise AtCriticalMargin(
            f"virtual treasury is zero at margin {margin}; elasticity diverges"
        )
    return margin / (margin - pivot)


def critical_production(cost: CostStructure, variant: LeverageVariant = LeverageVariant.TERM) -> Fraction:
    """Quantity at which virtual treasury crosses zero."""
    if cost.unit_margin <= 0:
        raise NonPositiveMargin(f"unit margin {cost.unit_margin} admits no critical production")
    return fixed_basis(cost, variant) / cost.unit_margin

def critical_margin(cost: CostStructure, quantity: Fraction, variant: LeverageVariant = LeverageVariant.TERM) -> Fraction:
    """Unit margin at which virtual treasury crosses zero for a volume."""
    if quantity <= 0:
        raise ZeroProduction("critical margin needs a positive quantity")
    return fixed_basis(cost, variant) / quantity


@dataclass(frozen=True)
class RuptureCell:
    variant: LeverageVariant
    fixed_base: Fraction
    critical_production: Fraction
    critical_margin: Fraction


@dataclass(frozen=True)
class RuptureMatrix:
    """Critical volume and critical margin under both fixed bases.

    Rows answer two different questions about the same activity: where
    does it stop covering all its charges (TERM) and where does it stop
    covering its cash outlays (IMMEDIATE).
    """

    quantity: Fraction
    cells: Tuple[RuptureCell, RuptureCell]

    def cell(self, variant: LeverageVariant) -> RuptureCell:
        for candidate in self.cells:
            if candidate.variant is LeverageVariant(variant):
                return candidate
        raise KeyError(variant)


def rupture_matrix(cost: CostStructure, quantity: Fraction) -> RuptureMatrix:
    cells = tuple(
        RuptureCell(
            variant=variant,
            fixed_base=fixed_basis(cost, variant),
            critical_production=critical_production(cost, variant),
            critical_margin=critical_margin(cost, quantity, variant),
        )
        for variant in (LeverageVariant.TERM, LeverageVariant.IMMEDIATE)
    )
    return RuptureMatrix(quantity=quantity, cells=cells)


def indifference_points(fixed_value: Fraction, quantities: Iterable[Fraction]) -> Tuple[Tuple[Fraction, Fraction], ...]:
    """Margin/volume pairs keeping virtual treasury at zero.

    Every point (q, fixed_value / q) leaves the firm equally illiquid;
    the curves for several fixed values never intersect.
    """
    points = []
    for quantity in quantities:
        if quantity <= 0:
            raise ZeroProduction("indifference curves live on positive quantities")
        points.append((quantity, fixed_value / quantity))
    return tuple(points)


def linear_grid(low: Fraction, high: Fraction, points: int) -> Tuple[Fraction, ...]:
    """Evenly spaced exact grid, endpoints included."""
    if points < 2 or high <= low:
        raise ValueError("grid needs at least two points and high > low")
    step = (high - low) / (points - 1)
    return tuple(low + step * i for i in range(points))
