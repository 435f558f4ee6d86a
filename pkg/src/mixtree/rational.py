"""Formatting helpers for exact rationals (``fractions.Fraction``)."""

from decimal import Context, Decimal
from fractions import Fraction

DECIMAL_DIGITS = 20
_CTX = Context(prec=DECIMAL_DIGITS)


def to_decimal_str(q) -> str:
    """Render a rational with 20 significant digits."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return str(_CTX.divide(Decimal(q.numerator), Decimal(q.denominator)))


def fmt(q) -> str:
    """``num/den (~decimal)``; integers print bare."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator} (~{to_decimal_str(q)})"


def to_record(q) -> dict:
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator, "decimal": to_decimal_str(q)}


def from_record(rec) -> Fraction:
    return Fraction(rec["num"], rec["den"])
