"""Distance value sets and the sporadic quantizer.

Three kinds of value set are representable: the half line ``[0, inf)``,
geometric sets ``{0} | {c * b**n : n in Z}`` and explicit finite lists.
Geometric sets double as sporadic sets, so ``SporadicSet`` is an alias.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Iterator

from ._rational import Q, ipow, log_ratio
from .errors import MembershipError, NotCharacteristic, NotUnbounded


class ValueSet:
    """Base class. Subclasses are frozen dataclasses and compare by value."""

    characteristic = False
    unbounded = False

    def contains(self, x) -> bool:
        raise NotImplementedError

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def floor(self, x) -> Fraction:
        """Largest member of the set that is ``<= x``."""
        raise NotImplementedError

    def require(self, x) -> Fraction:
        x = Q(x)
        if not self.contains(x):
            raise MembershipError(f"{x} is not a member of {self}")
        return x

    def issubset(self, other: ValueSet) -> bool:
        raise NotImplementedError


def _check_nonneg(x) -> Fraction:
    x = Q(x)
    if x < 0:
        raise ValueError(f"value sets live in [0, inf); got {x}")
    return x


@dataclass(frozen=True)
class HalfLine(ValueSet):
    characteristic = True
    unbounded = True

    def contains(self, x) -> bool:
        _check_nonneg(x)
        return True

    def floor(self, x) -> Fraction:
        return _check_nonneg(x)

    def issubset(self, other: ValueSet) -> bool:
        return isinstance(other, HalfLine)

    def __str__(self):
        return "[0, inf)"


@dataclass(frozen=True)
class Geometric(ValueSet):
    """``{0} | {scale * base**n : n in Z}``; both sporadic and characteristic."""

    base: Fraction
    scale: Fraction = Fraction(1)

    characteristic = True
    unbounded = True

    def __init__(self, base, scale=1):
        base, scale = Q(base), Q(scale)
        if base <= 1:
            raise ValueError("geometric base must exceed 1")
        if scale <= 0:
            raise ValueError("geometric scale must be positive")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "scale", scale)

    def member(self, n: int) -> Fraction:
        """The n-th term ``s_n`` of the bi-infinite sequence."""
        return self.scale * ipow(self.base, n)

    def exponent(self, x) -> int:
        """The ``n`` with ``s_n <= x < s_{n+1}``; ``x`` must be positive."""
        x = Q(x)
        n = floor(log_ratio(x / self.scale, self.base))
        # float estimate is off by at most one step either way
        while self.member(n) > x:
            n -= 1
        while self.member(n + 1) <= x:
            n += 1
        return n

    def contains(self, x) -> bool:
        x = _check_nonneg(x)
        return x == 0 or self.member(self.exponent(x)) == x

    def floor(self, x) -> Fraction:
        x = _check_nonneg(x)
        return Fraction(0) if x == 0 else self.member(self.exponent(x))

    def next_above(self, x) -> Fraction:
        """Smallest member strictly greater than ``x``."""
        x = _check_nonneg(x)
        if x == 0:
            raise ValueError("0 has no successor in a sporadic set")
        return self.member(self.exponent(x) + 1)

    def members(self, lo: int, hi: int) -> Iterator[Fraction]:
        for n in range(lo, hi + 1):
            yield self.member(n)

    def issubset(self, other: ValueSet) -> bool:
        if isinstance(other, HalfLine):
            return True
        if isinstance(other, Geometric):
            # every s_n must be a member of other: scale in other, and base a power of other.base
            if not other.contains(self.scale):
                return False
            m = other.exponent(self.base * other.scale)
            return other.member(m) == self.base * other.scale
        return False

    def __str__(self):
        return f"Geometric({self.base}, {self.scale})"


SporadicSet = Geometric


@dataclass(frozen=True)
class ExplicitList(ValueSet):
    values: tuple

    def __init__(self, values):
        vals = tuple(sorted({_check_nonneg(v) for v in values}))
        if not vals or vals[0] != 0:
            raise ValueError("an explicit value list must contain 0")
        object.__setattr__(self, "values", vals)

    def contains(self, x) -> bool:
        return _check_nonneg(x) in self.values

    def floor(self, x) -> Fraction:
        x = _check_nonneg(x)
        return max(v for v in self.values if v <= x)

    def issubset(self, other: ValueSet) -> bool:
        return all(other.contains(v) for v in self.values)

    def __str__(self):
        return "{" + ", ".join(str(v) for v in self.values) + "}"


def contains(S: ValueSet, x) -> bool:
    return S.contains(x)


def sporadic_subset(S: ValueSet) -> Geometric:
    """A sporadic set inside S: S itself when geometric, ``Geometric(2, 1)`` for the half line."""
    if isinstance(S, Geometric):
        return S
    if isinstance(S, HalfLine):
        return Geometric(2, 1)
    raise NotCharacteristic(f"{S} has no sporadic subset")


def psi_floor(T: Geometric, x) -> Fraction:
    """Round ``x`` down into the sporadic set T (0 stays 0)."""
    return T.floor(x)


def positive_floor(S: ValueSet, x) -> Fraction:
    """Largest member of ``S \\ {0}`` that is ``<= x``, for ``x > 0``."""
    if not S.characteristic:
        raise NotCharacteristic(f"{S} is not characteristic")
    x = Q(x)
    if x <= 0:
        raise ValueError("positive_floor needs x > 0")
    return S.floor(x)


def unbounded_sequence(S: ValueSet):
    """Strictly increasing unbounded members ``a_0 < a_1 < ...`` of S.

    Half line: ``a_k = k``. Geometric: starts at the smallest member ``>= 1``
    and climbs one exponent per step.
    """
    if isinstance(S, HalfLine):
        return lambda k: Fraction(k)
    if isinstance(S, Geometric):
        n0 = S.exponent(Fraction(1))
        if S.member(n0) < 1:
            n0 += 1
        return lambda k: S.member(n0 + k)
    raise NotUnbounded(f"{S} is bounded")
