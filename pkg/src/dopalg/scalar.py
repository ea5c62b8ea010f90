"""Scalar modes: exact rationals or binary floats, never mixed."""

import enum
import numbers
from fractions import Fraction

from .errors import ModeError


class Mode(enum.Enum):
    EXACT = "exact"
    APPROX = "approx"

    def coerce(self, value):
        """Convert a Python number to the representation used by this mode.

        Integers and fractions are accepted in both modes.  Floats are refused
        in exact mode: there is no silent rounding into rational data.
        """
        if isinstance(value, bool):
            value = int(value)
        if self is Mode.EXACT:
            if isinstance(value, Fraction):
                return value
            if isinstance(value, numbers.Integral):
                return Fraction(int(value))
            if isinstance(value, numbers.Rational):
                return Fraction(value.numerator, value.denominator)
            raise ModeError(f"cannot use {value!r} in exact mode")
        if isinstance(value, numbers.Real):
            return float(value)
        raise ModeError(f"cannot use {value!r} in approx mode")

    @property
    def zero(self):
        return Fraction(0) if self is Mode.EXACT else 0.0

    @property
    def one(self):
        return Fraction(1) if self is Mode.EXACT else 1.0


def check_same_mode(a, b):
    if a is not b:
        raise ModeError(f"cannot mix {a.value} and {b.value} data")
    return a


def format_scalar(c):
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return str(c.numerator)
        return f"{c.numerator}/{c.denominator}"
    return repr(float(c))


def parse_scalar(text, mode):
    """Parse ``3``, ``-2/5`` or ``0.25`` into a scalar of ``mode``."""
    text = text.strip()
    if mode is Mode.EXACT:
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {text!r}") from exc
    if "/" in text:
        return float(Fraction(text))
    return float(text)
