"""Exact rational arithmetic helpers.

Every money amount and quantity in this package is a `fractions.Fraction`.
Rounding happens once, at the presentation edge, with half-even ties.
Floats are refused on input: they would smuggle binary noise into
identities that the rest of the code checks exactly.
"""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from typing import Union

RatioLike = Union[Fraction, int, str, Decimal]


def as_ratio(value: RatioLike) -> Fraction:
    """Convert an exact numeric representation to a Fraction.

    Accepts ints, Fractions, Decimals and strings in either decimal
    ("12.50") or ratio ("25/2") form.  Floats raise TypeError.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not amounts")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact number: {value!r}") from exc
    if isinstance(value, float):
        raise TypeError(
            f"refusing float {value!r}: pass a string, int or Fraction"
        )
    raise TypeError(f"cannot interpret {type(value).__name__} as a ratio")


def round_half_even(value: Fraction, places: int = 2) -> Decimal:
    """Round a Fraction to a Decimal with banker's rounding, exactly."""
    scale = 10**places
    n, d = (value * scale).as_integer_ratio()
    q, r = divmod(n, d)
    double = 2 * r
    if double > d or (double == d and q % 2):
        q += 1
    return Decimal(q).scaleb(-places)


def decimal_str(value: Fraction, places: int = 2) -> str:
    """Half-even decimal rendering, fixed number of places."""
    return f"{round_half_even(value, places):.{places}f}"


def exact_str(value: Fraction) -> str:
    """Canonical exact rendering: integer, terminating decimal, or p/q."""
    n, d = value.as_integer_ratio()
    if d == 1:
        return str(n)
    places = _terminating_places(d)
    if places is None:
        return f"{n}/{d}"
    digits = abs(n) * 10**places // d
    sign = "-" if n < 0 else ""
    whole, frac = divmod(digits, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


def _terminating_places(denominator: int) -> int | None:
    """Number of decimal places needed, or None if non-terminating."""
    twos = fives = 0
    d = denominator
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return None
    return max(twos, fives)
