"""Exact number parsing and rendering.

Every number entering the package goes through :func:`to_fraction`, so a
decimal literal such as ``0.2`` becomes ``Fraction(1, 5)`` rather than the
nearest binary float.
"""

from decimal import Decimal
from fractions import Fraction


def to_fraction(value):
    """Convert an int, decimal string, ``"p/q"`` string or Fraction exactly.

    Floats are converted through their shortest repr, so a JSON ``0.2``
    becomes 1/5 rather than 3602879701896397/18014398509481984.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(Decimal(repr(value)))
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact number: {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to Fraction")


def fmt(q):
    """Render a rational as ``"p/q"`` or ``"p"``."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
