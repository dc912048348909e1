"""Helpers shared by the two arithmetic modes (binary floats and exact rationals)."""

from __future__ import annotations

from decimal import Decimal, InvalidOperation
from fractions import Fraction

# Structural checks: normalization, monotonicity, vertex deduplication.
STRUCT_TOL = 1e-12
# Optimization comparisons: LP vs Choquet agreement, chain slack, membership.
OPT_TOL = 1e-9
# Denominators at or below this are treated as undefined ratios (float mode).
RATIO_TOL = 1e-12


def exact_number(x) -> bool:
    """True when x carries no rounding (int or Fraction; bool excluded)."""
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def all_exact(xs) -> bool:
    return all(exact_number(x) for x in xs)


def struct_tol(exact: bool):
    return 0 if exact else STRUCT_TOL


def opt_tol(exact: bool):
    return 0 if exact else OPT_TOL


def to_fraction(x) -> Fraction:
    """Exact conversion; floats map to their binary rational value."""
    return x if isinstance(x, Fraction) else Fraction(x)


def parse_number(v, exact: bool = False):
    """Decode a JSON scalar into the requested arithmetic mode.

    Strings are rational literals like "4/7" or "0.1" (decimal-faithful).
    In exact mode floats are read through their decimal rendering, so a
    model file containing 0.1 means one tenth, not its binary neighbour.
    """
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational literal: {v!r}") from e
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError(f"not a number: {v!r}")
    if isinstance(v, int):
        return v
    if exact:
        try:
            return Fraction(Decimal(repr(v)))
        except InvalidOperation as e:
            raise ValueError(f"not a finite number: {v!r}") from e
    return v


def encode_number(x):
    """Encode a value for JSON: exact rationals as "p/q" strings, floats as-is."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return x
