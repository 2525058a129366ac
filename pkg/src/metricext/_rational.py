from fractions import Fraction
from math import log
from numbers import Rational


def Q(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact Fraction.

    Floats are refused: every distance in the library is exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def qstr(value: Fraction) -> str:
    return str(Q(value))


def log_ratio(x: Fraction, base: Fraction) -> float:
    """Approximate log_base(x), safe for rationals far outside float range."""
    lx = log(x.numerator) - log(x.denominator)
    lb = log(base.numerator) - log(base.denominator)
    return lx / lb


def ipow(base: Fraction, n: int) -> Fraction:
    return base**n if n >= 0 else 1 / base ** (-n)
