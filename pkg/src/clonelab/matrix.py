"""Matrices over a rig, read as morphisms of the matrix theory.

An ``m x n`` matrix is a morphism ``n -> m``.  Pairs ``(v, t)`` with
``v < j`` and ``t < k`` are encoded as the single index ``v + j*t``
(first coordinate fastest); both Kronecker products use that encoding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .rig import Rig, RigStructureError, opposite_rig, rig_from_json, rig_to_json, standard_rig


@dataclass(frozen=True)
class RigMatrix:
    rig: Rig
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        entries = tuple(tuple(row) for row in self.entries)
        if len(entries) != self.rows or any(len(r) != self.cols for r in entries):
            raise RigStructureError(
                f"entries do not form a {self.rows}x{self.cols} array")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, rig: Rig, rows, cols: int | None = None) -> "RigMatrix":
        """Build from nested lists, coercing every entry into ``rig``.

        ``cols`` is only needed when there are no rows to infer it from.
        """
        rows = [[rig.coerce(v) for v in row] for row in rows]
        if cols is None:
            if not rows:
                raise RigStructureError("cannot infer the column count of a 0-row matrix")
            cols = len(rows[0])
        return cls(rig, len(rows), cols, rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_json(self) -> dict:
        fmt = self.rig.format
        return {
            "rig": rig_to_json(self.rig),
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[fmt(v) for v in row] for row in self.entries],
        }


def matrix_from_json(doc, rig: Rig | None = None) -> RigMatrix:
    if isinstance(doc, str):
        doc = json.loads(doc)
    if isinstance(doc, list):
        if rig is None:
            raise RigStructureError("a bare entries array needs an explicit rig")
        return RigMatrix.of(rig, doc)
    if rig is None:
        name = doc["rig"]
        rig = standard_rig(name) if isinstance(name, str) else rig_from_json(name)
    m = RigMatrix.of(rig, doc["entries"], doc.get("cols"))
    if m.rows != doc.get("rows", m.rows) or m.cols != doc.get("cols", m.cols):
        raise RigStructureError("declared shape disagrees with entries")
    return m


def _same_rig(a: RigMatrix, b: RigMatrix) -> Rig:
    if a.rig != b.rig:
        raise RigStructureError(f"rig mismatch: {a.rig.label} vs {b.rig.label}")
    return a.rig


def identity(rig: Rig, n: int) -> RigMatrix:
    return RigMatrix(rig, n, n, [[rig.one if i == j else rig.zero for j in range(n)]
                                 for i in range(n)])


def zeros(rig: Rig, m: int, n: int) -> RigMatrix:
    return RigMatrix(rig, m, n, [[rig.zero] * n for _ in range(m)])


def basis_row(rig: Rig, n: int, i: int) -> RigMatrix:
    """The i-th projection ``n -> 1``: a 1 in position i, zeros elsewhere."""
    return RigMatrix(rig, 1, n, [[rig.one if c == i else rig.zero for c in range(n)]])


def mat_mul(A: RigMatrix, B: RigMatrix) -> RigMatrix:
    R = _same_rig(A, B)
    if A.cols != B.rows:
        raise RigStructureError(f"cannot multiply {A.shape} by {B.shape}")
    out = [[R.sum(R.mul(A.entries[i][t], B.entries[t][j]) for t in range(A.cols))
            for j in range(B.cols)] for i in range(A.rows)]
    return RigMatrix(R, A.rows, B.cols, out)


def pair_index(v: int, t: int, j: int) -> int:
    """0-based form of the pair encoding: ``(v, t) -> v + j*t``."""
    return v + j * t


def kron_first(X: RigMatrix, Y: RigMatrix) -> RigMatrix:
    """First Kronecker product ``X * Y``; entry ``<u,s>,<v,t>`` is ``Y[s][t]·X[u][v]``.

    This is the classical Kronecker product ``Y ⊗ X``.
    """
    R = _same_rig(X, Y)
    jp, j, kp, k = X.rows, X.cols, Y.rows, Y.cols
    out = [[R.zero] * (j * k) for _ in range(jp * kp)]
    for u in range(jp):
        for s in range(kp):
            row = out[pair_index(u, s, jp)]
            for v in range(j):
                for t in range(k):
                    row[pair_index(v, t, j)] = R.mul(Y.entries[s][t], X.entries[u][v])
    return RigMatrix(R, jp * kp, j * k, out)


def kron_second(X: RigMatrix, Y: RigMatrix) -> RigMatrix:
    """Second Kronecker product; entry ``<u,s>,<v,t>`` is ``X[u][v]·Y[s][t]``."""
    R = _same_rig(X, Y)
    jp, j, kp, k = X.rows, X.cols, Y.rows, Y.cols
    out = [[R.zero] * (j * k) for _ in range(jp * kp)]
    for u in range(jp):
        for s in range(kp):
            row = out[pair_index(u, s, jp)]
            for v in range(j):
                for t in range(k):
                    row[pair_index(v, t, j)] = R.mul(X.entries[u][v], Y.entries[s][t])
    return RigMatrix(R, jp * kp, j * k, out)


def right_power(X: RigMatrix, k: int) -> RigMatrix:
    """``X * k``: act by X on each of the k blocks of the right k-th power."""
    R = X.rig
    jp, j = X.rows, X.cols
    out = [[R.zero] * (j * k) for _ in range(jp * k)]
    for t in range(k):
        for u in range(jp):
            for v in range(j):
                out[pair_index(u, t, jp)][pair_index(v, t, j)] = X.entries[u][v]
    return RigMatrix(R, jp * k, j * k, out)


def left_power(j: int, Y: RigMatrix) -> RigMatrix:
    """``j * Y``: act by Y on each of the j blocks of the left j-th power."""
    R = Y.rig
    kp, k = Y.rows, Y.cols
    out = [[R.zero] * (j * k) for _ in range(j * kp)]
    for u in range(j):
        for s in range(kp):
            for t in range(k):
                out[pair_index(u, s, j)][pair_index(u, t, j)] = Y.entries[s][t]
    return RigMatrix(R, j * kp, j * k, out)


def kron_first_composite(X: RigMatrix, Y: RigMatrix) -> RigMatrix:
    """First Kronecker product built categorically as ``(j' * Y)(X * k)``."""
    _same_rig(X, Y)
    return mat_mul(left_power(X.rows, Y), right_power(X, Y.cols))


def kron_second_composite(X: RigMatrix, Y: RigMatrix) -> RigMatrix:
    """Second Kronecker product built as ``(X * k')(j * Y)``."""
    _same_rig(X, Y)
    return mat_mul(right_power(X, Y.rows), left_power(X.cols, Y))


def matrices_commute(X: RigMatrix, Y: RigMatrix) -> bool:
    return kron_first(X, Y).entries == kron_second(X, Y).entries


def is_affine_matrix(A: RigMatrix) -> bool:
    """True iff every row sums to one."""
    R = A.rig
    return all(R.sum(row) == R.one for row in A.entries)


def transpose_to_opposite(A: RigMatrix) -> RigMatrix:
    Rop = opposite_rig(A.rig)
    out = [[A.entries[i][j] for i in range(A.rows)] for j in range(A.cols)]
    return RigMatrix(Rop, A.cols, A.rows, out)
