"""Exact rational scalars and their canonical text form.

Every number in the workbench is an exact rational.  The scalar type is
gmpy2's ``mpq`` when available (about an order of magnitude faster) and
``fractions.Fraction`` otherwise; both keep values reduced with a positive
denominator, which is exactly the invariant the canonical text form relies
on.  All formatting goes through :func:`format_rational` so serialized output
does not depend on the backend.

Canonical text form: optional leading ``-``, an integer, and an optional
``/`` followed by a positive integer, with gcd(numerator, denominator) = 1
and no denominator of 1 spelled out.  Examples: ``-3/2``, ``7``, ``0``.
"""

from __future__ import annotations

import re

try:
    from gmpy2 import mpq as Rat

    RAT_BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Rat

    RAT_BACKEND = "fractions"

ZERO = Rat(0)
ONE = Rat(1)

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def rat(value) -> Rat:
    """Coerce an int, string, or rational to the scalar type."""
    if isinstance(value, int):
        return Rat(value)
    if isinstance(value, str):
        return parse_rational(value)
    return Rat(value)


def format_rational(value) -> str:
    num = int(value.numerator)
    den = int(value.denominator)
    if den == 1:
        return str(num)
    return f"{num}/{den}"


def parse_rational(text: str) -> Rat:
    """Parse the canonical text form, rejecting non-canonical spellings.

    Raises ValueError whose message suggests the canonical spelling when the
    value is readable but written non-canonically (e.g. ``4/2`` -> ``2``).
    """
    match = _RATIONAL_RE.match(text)
    if not match:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(match.group(1))
    den_text = match.group(2)
    if den_text is None:
        value = Rat(num)
    else:
        den = int(den_text)
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        value = Rat(num, den)
    canonical = format_rational(value)
    if canonical != text:
        raise ValueError(f"non-canonical rational {text!r}; write {canonical!r}")
    return value


def is_canonical_rational(text: str) -> bool:
    try:
        parse_rational(text)
    except ValueError:
        return False
    return True
