"""Named theories over a finite rig carrier, as generator sets and as slices.

Theory strings look like ``mat-left@zmod4``, ``aff@bool2``, ``pointed@zmod3``,
``uslat``, ``slat-top``, ``fincard`` or ``full@bool2``.  The two semilattice
theories always live on ``bool2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .clone import CloneSlice, GeneratorSet, generate_clone
from .optable import (JOIN2, OpTable, all_tables, binary_op, constant, malcev,
                      op_from_row, op_pointed, projections)
from .rig import FiniteRig, Rig, RigDomainError, bool2, embed_integer, standard_rig

TAGS = ("full_set_theory", "fincard_op", "mat_left", "mat_right", "mat_affine",
        "pointed_right_module", "uslat", "slat_with_top")

_ALIASES = {
    "full": "full_set_theory",
    "fincard": "fincard_op",
    "mat-left": "mat_left",
    "mat-right": "mat_right",
    "aff": "mat_affine",
    "mat-affine": "mat_affine",
    "pointed": "pointed_right_module",
    "uslat": "uslat",
    "slat-top": "slat_with_top",
}
_SHORT = {v: k for k, v in _ALIASES.items() if k != "mat-affine"}


@dataclass(frozen=True)
class TheoryName:
    tag: str
    rig: FiniteRig

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown theory tag {self.tag!r}")
        if not isinstance(self.rig, FiniteRig):
            raise RigDomainError("theories need a finite rig carrier")
        if self.tag in ("uslat", "slat_with_top") and self.rig != bool2():
            raise RigDomainError(f"{self.tag} lives on bool2 only")

    @property
    def k(self) -> int:
        return self.rig.size

    def __str__(self):
        short = _SHORT[self.tag]
        if self.tag in ("uslat", "slat_with_top"):
            return short
        return f"{short}@{self.rig.label}"


def parse_theory(text: str, default_rig: Rig | None = None) -> TheoryName:
    name, _, rig_name = text.partition("@")
    if name not in _ALIASES:
        raise ValueError(f"unknown theory {name!r}; expected one of {sorted(_ALIASES)}")
    tag = _ALIASES[name]
    if rig_name:
        rig = standard_rig(rig_name)
    elif tag in ("uslat", "slat_with_top"):
        rig = bool2()
    elif default_rig is not None:
        rig = default_rig
    else:
        raise ValueError(f"theory {text!r} needs a rig, e.g. {name}@bool2")
    return TheoryName(tag, rig)


def _rows(R: FiniteRig, n: int):
    return product(R.elements, repeat=n)


def affine_rows(R: FiniteRig, n: int) -> list[tuple]:
    return [w for w in _rows(R, n) if R.sum(w) == R.one]


def _join_preserving(n: int) -> list[OpTable]:
    """All f: 2^n -> 2 with f(x v y) = f(x) v f(y), by filtering every table."""
    # on carrier 2 the code of a pointwise join is the bitwise or of the codes
    size = 2**n
    pairs = [(a, b) for a in range(size) for b in range(a + 1, size)]
    return [OpTable(2, n, out) for out in product((0, 1), repeat=size)
            if all(out[a | b] == out[a] | out[b] for a, b in pairs)]


def theory_slice(t: TheoryName, n: int) -> CloneSlice:
    R, k = t.rig, t.k
    if t.tag == "mat_left":
        ops = (op_from_row(w, "left", R) for w in _rows(R, n))
    elif t.tag == "mat_right":
        ops = (op_from_row(w, "right", R) for w in _rows(R, n))
    elif t.tag == "mat_affine":
        ops = (op_from_row(w, "left", R) for w in affine_rows(R, n))
    elif t.tag == "pointed_right_module":
        ops = (op_pointed(w, R) for w in _rows(R, n + 1))
    elif t.tag == "fincard_op":
        ops = projections(n, k)
    elif t.tag == "full_set_theory":
        ops = all_tables(k, n)
    elif t.tag == "uslat":
        return generate_clone([JOIN2], n)
    else:
        ops = _join_preserving(n)
    return CloneSlice.of(k, n, ops)


def _generated_by_one(R: FiniteRig) -> bool:
    """True when every element is an integer multiple of one (as in Z/m)."""
    return {embed_integer(R, i) for i in range(R.size)} == set(R.elements)


def _linear_generators(R: FiniteRig, side: str) -> list[OpTable]:
    gens = [binary_op(R, "add"), constant(R.zero, R.size)]
    for a in R.elements:
        g = op_from_row([a], side, R)
        if g not in gens:
            gens.append(g)
    return gens


def theory_generators(t: TheoryName) -> GeneratorSet:
    R, k = t.rig, t.k
    if t.tag == "mat_left":
        gens = _linear_generators(R, "left")
    elif t.tag == "mat_right":
        gens = _linear_generators(R, "right")
    elif t.tag == "pointed_right_module":
        gens = _linear_generators(R, "right") + [constant(R.one, k)]
    elif t.tag == "mat_affine":
        if R.is_ring:
            gens = [malcev(R)]
            if not _generated_by_one(R):
                # x - y + z only reaches integer coefficients; add (1-a)x + ay
                for a in R.elements:
                    g = op_from_row([R.sub(R.one, a), a], "left", R)
                    if g not in gens:
                        gens.append(g)
        elif R == bool2():
            gens = [JOIN2]
        else:
            raise RigDomainError(
                f"no generating set known for affine combinations over {R.label}")
    elif t.tag == "uslat":
        gens = [JOIN2]
    elif t.tag == "slat_with_top":
        gens = [JOIN2, constant(0, 2), constant(1, 2)]
    elif t.tag == "fincard_op":
        gens = []
    else:
        raise RigDomainError(f"{t.tag} has no finite presentation here")
    return GeneratorSet(k, tuple(gens))


def expected_count(t: TheoryName, n: int) -> int:
    R, k = t.rig, t.k
    if t.tag in ("mat_left", "mat_right"):
        return k**n
    if t.tag == "mat_affine":
        return len(affine_rows(R, n))
    if t.tag == "pointed_right_module":
        if R.is_ring:
            return k ** (1 + n)
        return len({op_pointed(w, R) for w in _rows(R, n + 1)})
    if t.tag == "uslat":
        return 2**n - 1
    if t.tag == "slat_with_top":
        return 2**n + 1
    if t.tag == "full_set_theory":
        return k ** (k**n)
    return n


def fixes_diagonal(op: OpTable) -> bool:
    """``op(x, ..., x) == x`` for every x."""
    return all(op.eval((x,) * op.arity) == x for x in range(op.k))

