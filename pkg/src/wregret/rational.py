"""Exact rational parsing and canonical formatting.

All arithmetic in the library uses fractions.Fraction.  Text formats accept
`a/b`, decimals and plain integers; decimals convert exactly (a decimal with
k digits after the point becomes an integer over 10**k).  Canonical output
is always `numerator/denominator` in lowest terms so serialized documents
are byte-stable.
"""

from __future__ import annotations

import re
from fractions import Fraction

_RATIONAL_RE = re.compile(
    r"""^[+-]?(
            \d+\s*/\s*\d+     # a/b
          | \d+\.\d*          # 12.  12.5
          | \.\d+             # .5
          | \d+               # 12
        )$""",
    re.VERBOSE,
)


def parse_rational(text: str) -> Fraction:
    """Parse `a/b`, a decimal, or an integer into an exact Fraction.

    Raises ValueError on anything else (including float syntax like 1e3,
    which has no place in an exact format).
    """
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    sign = -1 if text.startswith("-") else 1
    body = text.lstrip("+-")
    if "/" in body:
        num_s, den_s = body.split("/")
        den = int(den_s)
        if den == 0:
            raise ValueError(f"zero denominator: {text!r}")
        return Fraction(sign * int(num_s), den)
    if "." in body:
        whole, _, frac = body.partition(".")
        whole_i = int(whole) if whole else 0
        scale = 10 ** len(frac)
        frac_i = int(frac) if frac else 0
        return Fraction(sign * (whole_i * scale + frac_i), scale)
    return Fraction(sign * int(body))


def format_rational(value: Fraction) -> str:
    """Canonical `numerator/denominator` form, denominator always present."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction, places: int = 6) -> str:
    """Fixed-point decimal rendering (round half to even is irrelevant here:
    we truncate-round via integer arithmetic, matching round-half-up on the
    scaled numerator)."""
    value = Fraction(value)
    scale = 10**places
    scaled = value * scale
    # round to nearest, ties away from zero, on exact integers
    num, den = scaled.numerator, scaled.denominator
    q, r = divmod(abs(num), den)
    if 2 * r >= den:
        q += 1
    sign = "-" if num < 0 and q != 0 else ""
    digits = str(q).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"
