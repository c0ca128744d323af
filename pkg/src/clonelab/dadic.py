"""Exact arithmetic in the ring Z[1/d] of d-adic fractions.

A value p/d^e is stored as ``(d, p, e)`` in normalized form: either
``p == 0 and e == 0``, or ``d`` does not divide ``p``.  Values with
different bases never mix; combining them raises :class:`BaseMismatch`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

_LITERAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*\^\s*(\d+))?\s*$")


class BaseMismatch(ValueError):
    pass


def _normalize(d: int, num: int, exp: int) -> tuple[int, int]:
    if num == 0:
        return 0, 0
    while exp > 0 and num % d == 0:
        num //= d
        exp -= 1
    return num, exp


@total_ordering
@dataclass(frozen=True)
class DadicFraction:
    d: int
    num: int
    exp: int = 0

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"base must be >= 2, got {self.d}")
        if self.exp < 0:
            # p / d^-e == p * d^e
            object.__setattr__(self, "num", self.num * self.d ** (-self.exp))
            object.__setattr__(self, "exp", 0)
        num, exp = _normalize(self.d, self.num, self.exp)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    @classmethod
    def parse(cls, text: str, d: int | None = None) -> "DadicFraction":
        """Parse ``"p/d^e"`` or a plain integer (which then needs ``d``)."""
        m = _LITERAL.match(text)
        if not m:
            raise ValueError(f"not a d-adic literal: {text!r}")
        num = int(m.group(1))
        if m.group(2) is None:
            if d is None:
                raise ValueError(f"integer literal {text!r} needs an explicit base")
            return cls(d, num, 0)
        base, exp = int(m.group(2)), int(m.group(3))
        if d is not None and base != d:
            raise BaseMismatch(f"literal {text!r} has base {base}, expected {d}")
        return cls(base, num, exp)

    def _check(self, other) -> "DadicFraction":
        if isinstance(other, int):
            return DadicFraction(self.d, other)
        if not isinstance(other, DadicFraction):
            return NotImplemented
        if other.d != self.d:
            raise BaseMismatch(f"base {self.d} vs base {other.d}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        e = max(self.exp, other.exp)
        num = self.num * self.d ** (e - self.exp) + other.num * self.d ** (e - other.exp)
        return DadicFraction(self.d, num, e)

    __radd__ = __add__

    def __neg__(self):
        return DadicFraction(self.d, -self.num, self.exp)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return DadicFraction(self.d, self.num * other.num, self.exp + other.exp)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            return self.exp == 0 and self.num == other
        if not isinstance(other, DadicFraction):
            return NotImplemented
        return (self.d, self.num, self.exp) == (other.d, other.num, other.exp)

    def __hash__(self):
        return hash((self.d, self.num, self.exp))

    def __le__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        # p/d^e <= q/d^f  iff  p*d^f <= q*d^e
        return self.num * self.d ** other.exp <= other.num * self.d ** self.exp

    def is_positive(self) -> bool:
        return self.num >= 0

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, self.d**self.exp)

    def __str__(self):
        if self.exp == 0:
            return str(self.num)
        return f"{self.num}/{self.d}^{self.exp}"

    def __repr__(self):
        return f"DadicFraction({self})"


def dadic_arith(op: str, a: DadicFraction, b: DadicFraction | None = None):
    """Dispatch one of ``add, sub, mul, neg, leq, is_positive`` on d-adic values."""
    if op in ("add", "sub", "mul", "leq"):
        if b is None:
            raise ValueError(f"{op} needs two operands")
        if a.d != b.d:
            raise BaseMismatch(f"base {a.d} vs base {b.d}")
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        if op == "mul":
            return a * b
        return a <= b
    if op == "neg":
        return -a
    if op in ("is_positive", "is-positive"):
        return a.is_positive()
    raise ValueError(f"unknown d-adic operation {op!r}")
