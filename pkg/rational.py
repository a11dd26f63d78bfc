"""Exact rationals and extended bounds as they appear in documents.

Rationals are written ``"p"`` or ``"p/q"``; bounds additionally accept
``"-inf"`` (lower bounds only) and ``"inf"`` (upper bounds only). An infinite
bound is represented in memory by ``None``.
"""
import re
from fractions import Fraction
from typing import Optional, Union

from errors import RationalFormatError

Bound = Optional[Fraction]

_RATIONAL_PATTERN = re.compile(r"-?[0-9]+(/[0-9]+)?")

RationalLike = Union[Fraction, int, str]


def parse_rational(text: str, location: str = "value") -> Fraction:
    """Parse a strict rational string into a canonical Fraction"""
    if not isinstance(text, str):
        raise RationalFormatError(location, f"expected a rational string, got {type(text).__name__}")
    if not _RATIONAL_PATTERN.fullmatch(text):
        raise RationalFormatError(location, f"expected 'p' or 'p/q', got {text!r}")
    numerator, _, denominator = text.partition("/")
    if denominator and int(denominator) == 0:
        raise RationalFormatError(location, f"zero denominator in {text!r}")
    return Fraction(int(numerator), int(denominator) if denominator else 1)


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def parse_bound(text: str, upper: bool, location: str = "bound") -> Bound:
    if text == "inf":
        if not upper:
            raise RationalFormatError(location, "'inf' is only allowed as an upper bound")
        return None
    if text == "-inf":
        if upper:
            raise RationalFormatError(location, "'-inf' is only allowed as a lower bound")
        return None
    return parse_rational(text, location)


def format_bound(value: Bound, upper: bool) -> str:
    if value is None:
        return "inf" if upper else "-inf"
    return format_rational(value)


def to_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and rational strings to a Fraction"""
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use a Fraction or a 'p/q' string")
    return Fraction(value)


def to_bound(value: Optional[RationalLike]) -> Bound:
    if value is None:
        return None
    if isinstance(value, str) and value in ("inf", "-inf"):
        return None
    return to_fraction(value)
