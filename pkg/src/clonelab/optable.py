"""Finitary operations on a finite carrier as explicit lookup tables.

An arity-n operation on ``{0..k-1}`` is a flat tuple of ``k**n`` outputs;
the input tuple ``x`` sits at position ``encode_tuple(x, k)``, i.e.
little-endian radix k with the first coordinate varying fastest.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .matrix import RigMatrix
from .rig import FiniteRig, Rig, RigDomainError, RigStructureError


def encode_tuple(digits: Sequence[int], k: int) -> int:
    code, place = 0, 1
    for d in digits:
        if not 0 <= d < k:
            raise RigStructureError(f"digit {d} outside [0, {k})")
        code += d * place
        place *= k
    return code


def decode_tuple(code: int, k: int, n: int) -> tuple[int, ...]:
    if not 0 <= code < k**n:
        raise RigStructureError(f"code {code} outside [0, {k}^{n})")
    out = []
    for _ in range(n):
        code, d = divmod(code, k)
        out.append(d)
    return tuple(out)


@lru_cache(maxsize=None)
def all_tuples(k: int, n: int) -> tuple[tuple[int, ...], ...]:
    """Every n-tuple over ``range(k)`` in encode order."""
    # itertools.product varies the last coordinate fastest; reverse to match
    return tuple(t[::-1] for t in product(range(k), repeat=n))


@dataclass(frozen=True, order=True)
class OpTable:
    k: int
    arity: int
    outputs: tuple

    def __post_init__(self):
        out = tuple(int(v) for v in self.outputs)
        if len(out) != self.k**self.arity:
            raise RigStructureError(
                f"arity-{self.arity} table over {self.k} needs {self.k**self.arity} "
                f"outputs, got {len(out)}")
        if any(not 0 <= v < self.k for v in out):
            raise RigStructureError(f"output outside [0, {self.k})")
        object.__setattr__(self, "outputs", out)

    def __call__(self, *args: int) -> int:
        return self.outputs[encode_tuple(args, self.k)]

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.outputs, dtype=np.int64)

    def eval(self, x: Sequence[int]) -> int:
        return self.outputs[encode_tuple(x, self.k)]

    @classmethod
    def from_function(cls, k: int, arity: int, fn: Callable[..., int]) -> "OpTable":
        return cls(k, arity, [fn(*x) for x in all_tuples(k, arity)])

    def to_json(self) -> dict:
        return {"k": self.k, "arity": self.arity, "outputs": list(self.outputs)}

    @classmethod
    def from_json(cls, doc) -> "OpTable":
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            return cls(doc["k"], doc["arity"], doc["outputs"])
        except (KeyError, TypeError) as exc:
            raise RigStructureError(f"bad operation document: {exc}") from exc


@dataclass(frozen=True)
class MultiOp:
    """A map ``R^n -> R^m`` given by m component operations of arity n."""

    k: int
    arity: int
    components: tuple = ()

    def __post_init__(self):
        comps = tuple(self.components)
        for c in comps:
            if c.k != self.k or c.arity != self.arity:
                raise RigStructureError("components must share carrier and arity")
        object.__setattr__(self, "components", comps)

    @classmethod
    def of(cls, *components: OpTable) -> "MultiOp":
        if not components:
            raise RigStructureError("use MultiOp(k, arity) for the empty map")
        return cls(components[0].k, components[0].arity, components)

    @property
    def width(self) -> int:
        return len(self.components)

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        code = encode_tuple(x, self.k)
        return tuple(c.outputs[code] for c in self.components)


def projection(n: int, i: int, k: int) -> OpTable:
    if not 0 <= i < n:
        raise ValueError(f"projection index {i} outside [0, {n})")
    return OpTable(k, n, [x[i] for x in all_tuples(k, n)])


def projections(n: int, k: int) -> list[OpTable]:
    return [projection(n, i, k) for i in range(n)]


def constant(c: int, k: int, arity: int = 0) -> OpTable:
    return OpTable(k, arity, [c] * k**arity)


def compose(outer: OpTable, inners: Sequence[OpTable], arity: int | None = None) -> OpTable:
    """Superposition ``x -> outer(inners[0](x), ..., inners[m-1](x))``.

    ``arity`` is required only when ``inners`` is empty (``outer`` a constant).
    """
    if len(inners) != outer.arity:
        raise RigStructureError(f"outer has arity {outer.arity}, got {len(inners)} inners")
    k = outer.k
    if inners:
        n = inners[0].arity
        if any(f.arity != n or f.k != k for f in inners):
            raise RigStructureError("inners must share carrier and arity with outer")
        if arity is not None and arity != n:
            raise RigStructureError(f"inners have arity {n}, not {arity}")
    elif arity is None:
        raise RigStructureError("composing a constant needs an explicit arity")
    else:
        n = arity
    size = k**n
    codes = [0] * size
    place = 1
    for f in inners:
        out = f.outputs
        for x in range(size):
            codes[x] += out[x] * place
        place *= k
    g = outer.outputs
    return OpTable(k, n, [g[c] for c in codes])


def _finite(w: RigMatrix | Sequence, rig: Rig | None) -> tuple[FiniteRig, list]:
    if isinstance(w, RigMatrix):
        if w.rows != 1:
            raise RigStructureError(f"expected a row vector, got {w.rows} rows")
        rig, vec = w.rig, list(w.entries[0])
    else:
        vec = list(w)
    if rig is None:
        raise RigStructureError("a bare vector needs an explicit rig")
    if not isinstance(rig, FiniteRig):
        raise RigDomainError("operation tables need a finite carrier")
    return rig, [rig.coerce(v) for v in vec]


def op_from_row(w, side: str = "left", rig: Rig | None = None) -> OpTable:
    """The linear combination ``x -> Σ w_i·x_i`` (left) or ``Σ x_i·w_i`` (right)."""
    R, vec = _finite(w, rig)
    n = len(vec)
    if side == "left":
        fn = lambda *x: R.sum(R.mul(a, b) for a, b in zip(vec, x))
    elif side == "right":
        fn = lambda *x: R.sum(R.mul(b, a) for a, b in zip(vec, x))
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return OpTable.from_function(R.size, n, fn)


def op_pointed(w, rig: Rig | None = None) -> OpTable:
    """``x -> w_0 + Σ x_i·w_i`` for ``w = (w_0, ..., w_n)``."""
    R, vec = _finite(w, rig)
    if not vec:
        raise RigStructureError("pointed vector needs at least the base point w_0")
    w0, ws = vec[0], vec[1:]
    return OpTable.from_function(
        R.size, len(ws), lambda *x: R.add(w0, R.sum(R.mul(a, b) for a, b in zip(x, ws))))


def binary_op(rig: FiniteRig, which: str) -> OpTable:
    """The rig's own ``add`` or ``mul`` as a binary table."""
    t = rig.add_table if which == "add" else rig.mul_table
    return OpTable.from_function(rig.size, 2, lambda a, b: t[a][b])


def malcev(rig: FiniteRig) -> OpTable:
    """``(x, y, z) -> x - y + z`` over a finite ring."""
    if not rig.is_ring:
        raise RigDomainError(f"{rig.label} is not a ring")
    return OpTable.from_function(rig.size, 3, lambda x, y, z: rig.add(rig.sub(x, y), z))


def all_tables(k: int, n: int):
    """Every arity-n table over k, in lexicographic order of outputs."""
    for out in product(range(k), repeat=k**n):
        yield OpTable(k, n, out)


JOIN2 = OpTable(2, 2, (0, 1, 1, 1))
MEET2 = OpTable(2, 2, (0, 0, 0, 1))
