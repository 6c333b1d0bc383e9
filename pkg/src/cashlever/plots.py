"""Matplotlib figures for the report paths.

Everything renders through the Agg backend straight to a file; no
display is ever opened.  Fractions are converted to floats here only,
at the last moment before drawing.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from fractions import Fraction
from typing import Mapping, Optional, Sequence, Tuple

from .simulate import CashSimulation


def save_cash_curve(simulation: CashSimulation, path: str, title: str = "Cumulative cash") -> None:
    """Daily cumulative balance with the solvency day marked."""
    days = range(simulation.horizon_days + 1)
    balances = [float(value) for value in simulation.balance]
    figure, axis = plt.subplots(figsize=(8, 4.5))
    axis.plot(days, balances, color="#1f77b4", linewidth=1.2)
    axis.axhline(0.0, color="black", linewidth=0.8)
    if simulation.solvency_day is not None:
        axis.axvline(simulation.solvency_day, color="#d62728", linestyle="--", linewidth=1.0)
        axis.annotate(
            f"solvency day {simulation.solvency_day}",
            xy=(simulation.solvency_day, 0.0),
            xytext=(5, 10),
            textcoords="offset points",
            fontsize=8,
        )
    axis.set_xlabel("day")
    axis.set_ylabel("cash balance")
    axis.set_title(title)
    figure.tight_layout()
    figure.savefig(path, dpi=110)
    plt.close(figure)


def save_elasticity_curve(
    rows: Sequence[Tuple[Fraction, Optional[Fraction]]],
    critical_quantity: Fraction,
    path: str,
    title: str = "Treasury elasticity against volume",
) -> None:
    """Elasticity branches on both sides of the critical production."""
    figure, axis = plt.subplots(figsize=(8, 4.5))
    pivot = float(critical_quantity)
    for keep_left in (True, False):
        xs = []
        ys = []
        for quantity, value in rows:
            if value is None:
                continue
            if (float(quantity) < pivot) is keep_left:
                xs.append(float(quantity))
                ys.append(float(value))
        if xs:
            axis.plot(xs, ys, color="#1f77b4", linewidth=1.2)
    axis.axvline(pivot, color="#d62728", linestyle="--", linewidth=1.0)
    axis.axhline(1.0, color="grey", linestyle=":", linewidth=0.8)
    axis.set_xlabel("quantity")
    axis.set_ylabel("elasticity")
    axis.set_title(title)
    axis.set_ylim(-12, 12)
    figure.tight_layout()
    figure.savefig(path, dpi=110)
    plt.close(figure)


def save_indifference_curves(
    curves: Mapping[str, Sequence[Tuple[Fraction, Fraction]]],
    path: str,
    title: str = "Liquidity indifference curves",
) -> None:
    """One margin-against-volume curve per fixed charge level."""
    figure, axis = plt.subplots(figsize=(8, 4.5))
    for label, points in curves.items():
        xs = [float(quantity) for quantity, _ in points]
        ys = [float(margin) for _, margin in points]
        axis.plot(xs, ys, linewidth=1.2, label=label)
    axis.set_xlabel("quantity")
    axis.set_ylabel("unit margin")
    axis.set_title(title)
    axis.legend(title="fixed charges", fontsize=8)
    figure.tight_layout()
    figure.savefig(path, dpi=110)
    plt.close(figure)
