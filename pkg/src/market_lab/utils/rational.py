"""Exact rational values for pydantic models and text formats."""

from collections.abc import Iterable
from fractions import Fraction
from typing import Annotated, Any

from pydantic import BeforeValidator, PlainSerializer


def to_fraction(value: Any) -> Fraction:
    """
    Coerce a value into an exact Fraction.

    Integers and Fractions pass through, strings may be integers, decimals ("0.25")
    or slash fractions ("1/4"). Floats are read through their shortest decimal repr,
    so 0.1 becomes 1/10 rather than its binary expansion.

    Raises:
        ValueError: If the value is not a rational literal
    """
    if isinstance(value, bool):
        raise ValueError("booleans are not rational values")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational literal: {value!r}") from e
    raise ValueError(f"cannot interpret {type(value).__name__} as a rational")


def format_rational(value: Fraction) -> str:
    """Render as an integer string or a slash fraction ("1/4")."""
    return str(value)


def sign(value: Fraction | int) -> int:
    return (value > 0) - (value < 0)


def dot(row: Iterable[int], vector: Iterable[Fraction | int]) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(row, vector, strict=True)), Fraction(0))


Rational = Annotated[
    Fraction,
    BeforeValidator(to_fraction),
    PlainSerializer(format_rational, return_type=str),
]
