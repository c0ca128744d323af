"""Commutation of operations, clone generation, and commutant search.

Everything here works on :class:`~clonelab.optable.OpTable` values over a
fixed finite carrier.  Two operations ``mu`` (arity j) and ``nu`` (arity k)
commute when, for every j x k grid, applying ``mu`` down the columns and
then ``nu`` across the results agrees with applying ``nu`` along the rows
and then ``mu``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .optable import MultiOp, OpTable, all_tables, compose, projections
from .rig import RigStructureError

DEFAULT_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    """The commutant search visited more nodes than its budget allows."""

    def __init__(self, budget: int, visited: int, depth: int, found: int):
        self.budget, self.visited, self.depth, self.found = budget, visited, depth, found
        super().__init__(
            f"search budget of {budget} nodes exhausted at frontier depth {depth} "
            f"({found} solutions found so far)")


def default_budget() -> int:
    env = os.environ.get("CLONELAB_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class GeneratorSet:
    k: int
    generators: tuple = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        for g in gens:
            if g.k != self.k:
                raise RigStructureError(f"generator over {g.k} in a set over {self.k}")
        object.__setattr__(self, "generators", gens)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def union(self, other: "GeneratorSet") -> "GeneratorSet":
        if other.k != self.k:
            raise RigStructureError("carrier mismatch")
        seen = dict.fromkeys(self.generators + other.generators)
        return GeneratorSet(self.k, tuple(seen))

    def to_json(self) -> list:
        return [g.to_json() for g in self.generators]


@dataclass(frozen=True)
class CloneSlice:
    """The arity-n operations of a clone, sorted by output table, no duplicates."""

    k: int
    arity: int
    ops: tuple
    visited: int | None = field(default=None, compare=False)

    @classmethod
    def of(cls, k: int, arity: int, ops: Iterable[OpTable], visited=None) -> "CloneSlice":
        ops = sorted(set(ops), key=lambda op: op.outputs)
        for op in ops:
            if op.k != k or op.arity != arity:
                raise RigStructureError(f"op of arity {op.arity} over {op.k} in a slice "
                                        f"of arity {arity} over {k}")
        return cls(k, arity, tuple(ops), visited)

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def __contains__(self, op):
        return op in set(self.ops)

    @property
    def count(self) -> int:
        return len(self.ops)

    def issubset(self, other: "CloneSlice") -> bool:
        return set(self.ops) <= set(other.ops)

    def to_json(self) -> dict:
        doc = {
            "carrier": self.k,
            "arity": self.arity,
            "ops": [list(op.outputs) for op in self.ops],
            "count": self.count,
        }
        if self.visited is not None:
            doc["visited"] = self.visited
        return doc


def _same_carrier(mu: OpTable, nu: OpTable) -> None:
    if mu.k != nu.k:
        raise RigStructureError(f"carrier mismatch: {mu.k} vs {nu.k}")


@lru_cache(maxsize=None)
def grid_codes(k: int, rows: int, cols: int) -> tuple[np.ndarray, np.ndarray]:
    """Encoded columns and rows of every ``rows x cols`` grid over ``range(k)``.

    Returns ``(col_codes, row_codes)`` with shapes ``(G, cols)`` and
    ``(G, rows)`` where ``G = k**(rows*cols)``; grids are enumerated with
    cell ``(v, t)`` at radix position ``v + rows*t``.
    """
    cells = rows * cols
    G = k**cells
    digits = np.empty((G, cells), dtype=np.int64)
    codes = np.arange(G, dtype=np.int64)
    for c in range(cells):
        codes, digits[:, c] = np.divmod(codes, k)
    grid = digits.reshape(G, cols, rows)  # grid[g, t, v]
    col_codes = np.zeros((G, cols), dtype=np.int64)
    row_codes = np.zeros((G, rows), dtype=np.int64)
    for v in range(rows):
        col_codes += grid[:, :, v] * k**v
    for t in range(cols):
        row_codes += grid[:, t, :] * k**t
    col_codes.setflags(write=False)
    row_codes.setflags(write=False)
    return col_codes, row_codes


def _encode_rows(values: np.ndarray, k: int) -> np.ndarray:
    n = values.shape[1]
    weights = k ** np.arange(n, dtype=np.int64)
    return values @ weights if n else np.zeros(values.shape[0], dtype=np.int64)


def _sides(mu: OpTable, nu: OpTable) -> tuple[np.ndarray, np.ndarray]:
    k, j, kk = mu.k, mu.arity, nu.arity
    col_codes, row_codes = grid_codes(k, j, kk)
    lhs = nu.array[_encode_rows(mu.array[col_codes], k)]
    rhs = mu.array[_encode_rows(nu.array[row_codes], k)]
    return lhs, rhs


def op_commutes(mu: OpTable, nu: OpTable) -> bool:
    _same_carrier(mu, nu)
    lhs, rhs = _sides(mu, nu)
    return bool(np.array_equal(lhs, rhs))


def commutation_witness(mu: OpTable, nu: OpTable) -> list[list[int]] | None:
    """A ``mu.arity x nu.arity`` grid on which the two sides differ, or None."""
    _same_carrier(mu, nu)
    lhs, rhs = _sides(mu, nu)
    bad = np.flatnonzero(lhs != rhs)
    if not bad.size:
        return None
    j, kk, code = mu.arity, nu.arity, int(bad[0])
    grid = [[0] * kk for _ in range(j)]
    for t in range(kk):
        for v in range(j):
            code, grid[v][t] = divmod(code, mu.k)
    return grid


def multiop_commutes(mu: MultiOp, nu: MultiOp) -> bool:
    if mu.k != nu.k:
        raise RigStructureError(f"carrier mismatch: {mu.k} vs {nu.k}")
    return all(op_commutes(a, b) for a in mu.components for b in nu.components)


def _constraints(gens: Sequence[OpTable], k: int, n: int):
    """Equations ``f[q] = g(f[p_0], ..., f[p_{a-1}])`` forced on an arity-n f."""
    seen = set()
    out = []
    for g in gens:
        a = g.arity
        col_codes, row_codes = grid_codes(k, n, a)
        q = _encode_rows(g.array[row_codes], k)
        for qi, deps in zip(q.tolist(), col_codes.tolist()):
            key = (qi, g.outputs, tuple(deps))
            if key not in seen:
                seen.add(key)
                out.append((qi, g.outputs, tuple(deps)))
    return out


class _Search:
    def __init__(self, k, n, gens, budget):
        self.k, self.size, self.budget = k, k**n, budget
        self.cons = _constraints(gens, k, n)
        self.watch = [[] for _ in range(self.size)]
        for ci, (q, _, deps) in enumerate(self.cons):
            for p in set(deps) | {q}:
                self.watch[p].append(ci)
        self.f = [-1] * self.size
        self.trail = []
        self.visited = 0
        self.solutions = []

    def assign(self, pos, val) -> bool:
        f, k, cons, watch = self.f, self.k, self.cons, self.watch
        stack = [(pos, val)]
        while stack:
            pos, val = stack.pop()
            cur = f[pos]
            if cur >= 0:
                if cur != val:
                    return False
                continue
            f[pos] = val
            self.trail.append(pos)
            for ci in watch[pos]:
                q, g, deps = cons[ci]
                code, place = 0, 1
                for p in deps:
                    v = f[p]
                    if v < 0:
                        break
                    code += v * place
                    place *= k
                else:
                    stack.append((q, g[code]))
        return True

    def undo(self, mark):
        f, trail = self.f, self.trail
        while len(trail) > mark:
            f[trail.pop()] = -1

    def run(self):
        for q, g, deps in self.cons:
            if not deps and not self.assign(q, g[0]):
                return
        self._dfs(0)

    def _dfs(self, start):
        f = self.f
        pos = start
        while pos < self.size and f[pos] >= 0:
            pos += 1
        if pos == self.size:
            self.solutions.append(tuple(f))
            return
        for val in range(self.k):
            self.visited += 1
            if self.visited > self.budget:
                raise BudgetExceeded(self.budget, self.visited, pos, len(self.solutions))
            mark = len(self.trail)
            if self.assign(pos, val):
                self._dfs(pos + 1)
            self.undo(mark)


def commutant(gens: GeneratorSet | Sequence[OpTable], n: int, k: int | None = None,
              budget: int | None = None) -> CloneSlice:
    """All arity-n operations commuting with every generator.

    Depth-first search over the output table in encode order.  Each grid
    equation is propagated as soon as the values it reads are fixed, so a
    contradiction prunes the branch immediately.
    """
    if isinstance(gens, GeneratorSet):
        k = gens.k
        gens = gens.generators
    elif k is None:
        if not gens:
            raise ValueError("carrier size needed for an empty generator list")
        k = gens[0].k
    for g in gens:
        if g.k != k:
            raise RigStructureError(f"generator over {g.k} in a search over {k}")
    search = _Search(k, n, gens, default_budget() if budget is None else budget)
    search.run()
    return CloneSlice.of(k, n, (OpTable(k, n, s) for s in search.solutions), search.visited)


def commutant_by_enumeration(gens: GeneratorSet | Sequence[OpTable], n: int,
                             k: int | None = None) -> CloneSlice:
    """Brute-force commutant: test all ``k**(k**n)`` tables."""
    if isinstance(gens, GeneratorSet):
        k, gens = gens.k, gens.generators
    elif k is None:
        k = gens[0].k
    found = [f for f in all_tables(k, n) if all(op_commutes(f, g) for g in gens)]
    return CloneSlice.of(k, n, found)


def generate_clone(gens: GeneratorSet | Sequence[OpTable], n: int,
                   k: int | None = None) -> CloneSlice:
    """Arity-n slice of the clone generated by ``gens``.

    Starts from the n projections and closes under ``g(f_1, ..., f_a)`` for
    generators g, only forming tuples that involve a newly found f.
    """
    if isinstance(gens, GeneratorSet):
        k, gens = gens.k, gens.generators
    elif k is None:
        if not gens:
            raise ValueError("carrier size needed for an empty generator list")
        k = gens[0].k
    found = dict.fromkeys(projections(n, k))
    for g in gens:
        if g.arity == 0:
            found.setdefault(compose(g, [], arity=n))
    frontier = set(found)
    while frontier:
        current = list(found)
        fresh = set()
        for g in gens:
            if g.arity == 0:
                continue
            for args in product(current, repeat=g.arity):
                if not any(a in frontier for a in args):
                    continue
                h = compose(g, args)
                if h not in found and h not in fresh:
                    fresh.add(h)
        for h in sorted(fresh, key=lambda op: op.outputs):
            found[h] = None
        frontier = fresh
    return CloneSlice.of(k, n, found)


def clones_equal_at_arity(a: CloneSlice, b: CloneSlice) -> bool:
    if a.k != b.k or a.arity != b.arity:
        raise RigStructureError(
            f"cannot compare arity {a.arity} over {a.k} with arity {b.arity} over {b.k}")
    return a.ops == b.ops


def collect_generators(slices: Iterable[CloneSlice]) -> GeneratorSet:
    """Pool the operations of several slices (typically arities 0..N) as generators."""
    slices = list(slices)
    if not slices:
        raise ValueError("no slices to collect")
    k = slices[0].k
    ops = [op for s in slices for op in s.ops]
    return GeneratorSet(k, tuple(ops))


def kronecker_maps(mu: MultiOp, nu: MultiOp, grid) -> tuple[list[list[int]], list[list[int]]]:
    """Both Kronecker composites of ``mu: R^n -> R^m`` and ``nu: R^n' -> R^m'`` at one grid.

    ``grid`` is ``n x n'``.  The first result applies mu to every column and
    then nu to every row of that; the second applies nu to every row and
    then mu to every column.  Both come back as ``m x m'`` grids.
    """
    n, n2 = mu.arity, nu.arity
    cols = [[grid[v][t] for v in range(n)] for t in range(n2)]
    mu_cols = [mu(c) for c in cols]  # n' results, each of length m
    first = [[nu([mu_cols[t][u] for t in range(n2)])[s] for s in range(nu.width)]
             for u in range(mu.width)]
    nu_rows = [nu(grid[v]) for v in range(n)]  # n results, each of length m'
    second = [[mu([nu_rows[v][s] for v in range(n)])[u] for s in range(nu.width)]
              for u in range(mu.width)]
    return first, second


def multiop_commutes_direct(mu: MultiOp, nu: MultiOp) -> bool:
    """Commutation straight from the definition, over every ``n x n'`` grid."""
    if mu.k != nu.k:
        raise RigStructureError(f"carrier mismatch: {mu.k} vs {nu.k}")
    n, n2, k = mu.arity, nu.arity, mu.k
    for cells in product(range(k), repeat=n * n2):
        grid = [list(cells[v * n2:(v + 1) * n2]) for v in range(n)]
        first, second = kronecker_maps(mu, nu, grid)
        if first != second:
            return False
    return True
