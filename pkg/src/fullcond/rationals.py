"""Strict parsing and formatting of exact rationals.

Every probability in this package is a ``fractions.Fraction``.  The parser
accepts only integer strings, "p/q" strings with a positive denominator, or
Python ints.  Decimal notation is rejected: "0.5" has an exact binary-free
meaning, but accepting it invites callers to feed us floats.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import DocumentError

_RATIONAL_RE = re.compile(r"^-?\d+(?:/[1-9]\d*)?$")


def parse_rational(value) -> Fraction:
    """Parse an int or a strict "p" / "p/q" string into a Fraction.

    Raises DocumentError for anything else, including floats and decimal
    strings.
    """
    if isinstance(value, bool):
        raise DocumentError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_RE.match(text):
            raise DocumentError(
                f"not a rational: {value!r} (use an integer or 'p/q'; decimals are rejected)"
            )
        return Fraction(text)
    raise DocumentError(f"not a rational: {value!r} (floats are rejected)")


def format_rational(q: Fraction) -> str:
    """Render a Fraction as "p" or "p/q"; parse_rational inverts this exactly."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
