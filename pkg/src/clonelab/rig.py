"""Rigs (semirings) with finite-table and exact-arithmetic backends.

Finite carriers are the indices ``0..size-1``; ``zero`` and ``one`` are
designated indices and need not be 0 and 1.  Exact rigs are the integers
and the d-adic fractions Z[1/d]; both are commutative rings.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Union

from .dadic import DadicFraction


class RigStructureError(ValueError):
    """Malformed input: wrong shapes, out-of-range entries, mismatched rigs."""


class RigDomainError(ValueError):
    """A well-formed request that the rig cannot serve (e.g. negation in a non-ring)."""


def _table(rows) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in row) for row in rows)


@dataclass(frozen=True)
class FiniteRig:
    size: int
    add_table: tuple
    mul_table: tuple
    zero: int
    one: int
    name: str = field(default="", compare=False)
    is_ring: bool = field(init=False, compare=False)
    is_commutative: bool = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "add_table", _table(self.add_table))
        object.__setattr__(self, "mul_table", _table(self.mul_table))
        _check_shape(self)
        k = range(self.size)
        comm = all(self.mul_table[a][b] == self.mul_table[b][a] for a in k for b in k)
        ring = all(any(self.add_table[a][b] == self.zero for b in k) for a in k)
        object.__setattr__(self, "is_commutative", comm)
        object.__setattr__(self, "is_ring", ring)
        if ring:
            neg = tuple(next(b for b in k if self.add_table[a][b] == self.zero) for a in k)
        else:
            neg = None
        object.__setattr__(self, "_neg", neg)

    is_finite = True

    @property
    def elements(self) -> range:
        return range(self.size)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        if self._neg is None:
            raise RigDomainError(f"{self.label} is not a ring; no additive inverses")
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def sum(self, values: Iterable[int]) -> int:
        acc = self.zero
        for v in values:
            acc = self.add_table[acc][v]
        return acc

    def coerce(self, value) -> int:
        v = int(value)
        if not 0 <= v < self.size:
            raise RigStructureError(f"{value!r} is not an element of {self.label}")
        return v

    def format(self, value) -> int:
        return int(value)

    @property
    def label(self) -> str:
        return self.name or f"finite rig of size {self.size}"

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "add": [list(r) for r in self.add_table],
            "mul": [list(r) for r in self.mul_table],
            "zero": self.zero,
            "one": self.one,
        }


def _check_shape(r: FiniteRig) -> None:
    k = r.size
    if k < 1:
        raise RigStructureError(f"size must be positive, got {k}")
    for label, t in (("add", r.add_table), ("mul", r.mul_table)):
        if len(t) != k or any(len(row) != k for row in t):
            raise RigStructureError(f"{label} table is not {k}x{k}")
        for row in t:
            for v in row:
                if not 0 <= v < k:
                    raise RigStructureError(f"{label} table entry {v} outside [0, {k})")
    for label, v in (("zero", r.zero), ("one", r.one)):
        if not 0 <= v < k:
            raise RigStructureError(f"{label} index {v} outside [0, {k})")


@dataclass(frozen=True)
class ExactRig:
    kind: str  # "integers" or "d_adic"
    d: int | None = None

    is_finite = False
    is_ring = True
    is_commutative = True

    def __post_init__(self):
        if self.kind == "integers":
            if self.d is not None:
                raise ValueError("integers take no base")
        elif self.kind == "d_adic":
            if self.d is None or self.d < 2:
                raise ValueError(f"d-adic base must be >= 2, got {self.d}")
        else:
            raise ValueError(f"unknown exact rig kind {self.kind!r}")

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    @property
    def label(self) -> str:
        return "int" if self.kind == "integers" else f"dadic{self.d}"

    def coerce(self, value):
        if self.kind == "integers":
            if isinstance(value, bool) or not isinstance(value, (int, str)):
                raise RigStructureError(f"{value!r} is not an integer")
            return int(value)
        if isinstance(value, DadicFraction):
            if value.d != self.d:
                raise RigStructureError(f"{value} is not in Z[1/{self.d}]")
            return value
        if isinstance(value, int) and not isinstance(value, bool):
            return DadicFraction(self.d, value)
        if isinstance(value, str):
            return DadicFraction.parse(value, self.d)
        raise RigStructureError(f"{value!r} is not a d-adic value")

    def format(self, value):
        return value if self.kind == "integers" else str(value)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def sum(self, values):
        acc = self.zero
        for v in values:
            acc = acc + v
        return acc


Rig = Union[FiniteRig, ExactRig]


@dataclass
class ValidationReport:
    failures: list = field(default_factory=list)  # (axiom, witness) pairs

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "failures": [{"axiom": a, "witness": list(w)} for a, w in self.failures],
        }


def validate_rig(r: FiniteRig) -> ValidationReport:
    """Check every rig axiom exhaustively; report the first witness per axiom."""
    k = r.elements
    A, M, z, o = r.add_table, r.mul_table, r.zero, r.one
    axioms = [
        ("addition is not associative", 3, lambda a, b, c: A[A[a][b]][c] == A[a][A[b][c]]),
        ("addition is not commutative", 2, lambda a, b: A[a][b] == A[b][a]),
        ("zero is not an additive identity", 1, lambda a: A[a][z] == a and A[z][a] == a),
        ("multiplication is not associative", 3, lambda a, b, c: M[M[a][b]][c] == M[a][M[b][c]]),
        ("one is not a multiplicative identity", 1, lambda a: M[a][o] == a and M[o][a] == a),
        ("left distributivity fails", 3, lambda a, b, c: M[a][A[b][c]] == A[M[a][b]][M[a][c]]),
        ("right distributivity fails", 3, lambda a, b, c: M[A[b][c]][a] == A[M[b][a]][M[c][a]]),
        ("zero does not annihilate", 1, lambda a: M[z][a] == z and M[a][z] == z),
    ]
    report = ValidationReport()
    for name, arity, holds in axioms:
        for args in product(k, repeat=arity):
            if not holds(*args):
                report.failures.append((name, args))
                break
    return report


def finite_rig(size, add, mul, zero=0, one=1, name="") -> FiniteRig:
    """Build a FiniteRig and raise RigStructureError unless every axiom holds."""
    r = FiniteRig(size, add, mul, zero, one, name)
    rep = validate_rig(r)
    if not rep.ok:
        axiom, witness = rep.failures[0]
        raise RigStructureError(f"{axiom} (witness {witness})")
    return r


def rig_from_json(doc) -> FiniteRig:
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        return FiniteRig(doc["size"], doc["add"], doc["mul"], doc["zero"], doc["one"],
                         doc.get("name", ""))
    except (KeyError, TypeError) as exc:
        raise RigStructureError(f"bad rig document: {exc}") from exc


def bool2() -> FiniteRig:
    return FiniteRig(2, [[0, 1], [1, 1]], [[0, 0], [0, 1]], 0, 1, "bool2")


def zmod(m: int) -> FiniteRig:
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    add = [[(a + b) % m for b in range(m)] for a in range(m)]
    mul = [[(a * b) % m for b in range(m)] for a in range(m)]
    return FiniteRig(m, add, mul, 0, 1 % m, f"zmod{m}")


def upper_triangular_z2() -> FiniteRig:
    """The 8-element ring of upper-triangular 2x2 matrices over Z/2.

    ``[[a, b], [0, c]]`` is stored at index ``a + 2*b + 4*c``.
    """
    def dec(i):
        return i & 1, (i >> 1) & 1, (i >> 2) & 1

    def enc(a, b, c):
        return a | (b << 1) | (c << 2)

    add, mul = [], []
    for x in range(8):
        a1, b1, c1 = dec(x)
        add_row, mul_row = [], []
        for y in range(8):
            a2, b2, c2 = dec(y)
            add_row.append(enc(a1 ^ a2, b1 ^ b2, c1 ^ c2))
            mul_row.append(enc(a1 & a2, (a1 & b2) ^ (b1 & c2), c1 & c2))
        add.append(add_row)
        mul.append(mul_row)
    return FiniteRig(8, add, mul, 0, enc(1, 0, 1), "ut2")


INTEGERS = ExactRig("integers")

_NAME = re.compile(r"^(bool2|int|integers|ut2|zmod(\d+)|dadic(\d+))$")


def standard_rig(name: str, param: int | None = None) -> Rig:
    """Look up a named rig: ``bool2``, ``zmod<m>``, ``int``, ``dadic<d>``, ``ut2``.

    ``standard_rig("zmod", 4)`` and ``standard_rig("zmod4")`` are equivalent.
    """
    if param is not None:
        if name in ("zmod",):
            if param < 1:
                raise ValueError(f"modulus must be >= 1, got {param}")
            return zmod(param)
        if name in ("d_adic", "dadic"):
            if param < 2:
                raise ValueError(f"d-adic base must be >= 2, got {param}")
            return ExactRig("d_adic", param)
        raise ValueError(f"rig {name!r} takes no parameter")
    m = _NAME.match(name)
    if not m:
        raise ValueError(f"unknown rig {name!r}")
    if name == "bool2":
        return bool2()
    if name in ("int", "integers"):
        return INTEGERS
    if name == "ut2":
        return upper_triangular_z2()
    if m.group(2) is not None:
        return standard_rig("zmod", int(m.group(2)))
    return standard_rig("dadic", int(m.group(3)))


def opposite_rig(r: Rig) -> Rig:
    if isinstance(r, ExactRig):
        return r
    mul = [[r.mul_table[b][a] for b in r.elements] for a in r.elements]
    if r.name.endswith("^op"):
        name = r.name[:-3]
    else:
        name = f"{r.name}^op" if r.name else ""
    return FiniteRig(r.size, r.add_table, mul, r.zero, r.one, name)


def embed_integer(r: Rig, n: int):
    """The image of ``n`` under the unique rig map from the naturals (integers for rings)."""
    if isinstance(r, ExactRig):
        return r.coerce(n)
    if n < 0 and not r.is_ring:
        raise RigDomainError(f"cannot embed {n} into {r.label}: not a ring")
    # double-and-add keeps this O(log |n|)
    acc, base, m = r.zero, r.one, abs(n)
    while m:
        if m & 1:
            acc = r.add(acc, base)
        base = r.add(base, base)
        m >>= 1
    return r.neg(acc) if n < 0 else acc


def rig_to_json(r: Rig):
    """The rig's standard name when it has one, else its inline table document."""
    if isinstance(r, ExactRig):
        return r.label
    try:
        if r.name and standard_rig(r.name) == r:
            return r.name
    except ValueError:
        pass
    return r.to_json()
