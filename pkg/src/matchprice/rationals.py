"""Exact rational values on the wire.

Budgets and prices are fractions.Fraction throughout; the only non-rational
price is INF, the "never sold" sentinel allowed under unit-demand pricing.
Serialized form is a string: "3/4", "5", "0", or "inf".  No floats are ever
used in a buying decision.
"""

from fractions import Fraction

from .errors import InputError


class _Infinite:
    __slots__ = ()

    def __repr__(self) -> str:
        return "INF"


INF = _Infinite()

Price = Fraction | _Infinite


def is_infinite(value) -> bool:
    return value is INF


def parse_rational(text: str | int) -> Fraction:
    """Parse an exact rational; rejects "inf"."""
    if isinstance(text, bool):
        raise InputError("rational expected, got bool")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise InputError(f"rational expected as string, got {type(text).__name__}")
    if text.strip().lower() == "inf":
        raise InputError("finite rational expected, got inf")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {text!r}: {exc}") from None


def parse_price(text: str | int) -> Price:
    if isinstance(text, str) and text.strip().lower() == "inf":
        return INF
    return parse_rational(text)


def format_rational(value: Fraction) -> str:
    return str(value)


def format_price(value: Price) -> str:
    return "inf" if value is INF else str(value)
