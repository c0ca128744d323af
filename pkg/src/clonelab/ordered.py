"""Preordered rings, pointed affine maps, and archimedean-style criteria.

A preordered ring is a ring with a chosen subrig of positive elements;
``a <= b`` means ``b - a`` is positive.  Finite cones are validated as
subrigs on construction.  The integers and Z[1/d] carry their natural
order, and their archimedean status is a declared flag, not a computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Sequence

from .dadic import BaseMismatch, DadicFraction, dadic_arith
from .rig import ExactRig, FiniteRig, Rig, RigDomainError, RigStructureError

__all__ = [
    "BaseMismatch", "DadicFraction", "dadic_arith", "PreorderedRing", "SampledMap",
    "AffineExtensionResult", "phi_w", "w_of_phi", "sample_map", "affine_extension_check",
    "auto_archimedean_finite", "positive_cones", "positive_affine_maps_have_positive_weights",
    "order_unit_exponent", "common_difference_identity",
]


@dataclass(frozen=True)
class PreorderedRing:
    ring: Rig
    cone: frozenset | None = None  # finite rings only
    archimedean: bool | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.ring.is_ring:
            raise RigDomainError(f"{self.ring.label} is not a ring")
        if isinstance(self.ring, FiniteRig):
            cone = frozenset(self.ring.elements if self.cone is None else self.cone)
            object.__setattr__(self, "cone", cone)
            problem = _subrig_violation(self.ring, cone)
            if problem:
                raise RigStructureError(f"positive part is not a subrig: {problem}")
        elif self.cone is not None:
            raise RigStructureError("exact rings use their natural order")

    @classmethod
    def natural(cls, ring: ExactRig) -> "PreorderedRing":
        """Z or Z[1/d] with the usual order; both are archimedean."""
        return cls(ring, None, archimedean=True)

    def is_positive(self, x) -> bool:
        if self.cone is not None:
            return x in self.cone
        return x >= 0 if isinstance(x, int) else x.is_positive()

    def leq(self, a, b) -> bool:
        return self.is_positive(self.ring.sub(b, a))

    @property
    def positive_elements(self) -> list:
        if self.cone is None:
            raise RigDomainError("positive part of an infinite ring cannot be listed")
        return sorted(self.cone)


def _subrig_violation(R: FiniteRig, cone: frozenset) -> str | None:
    if R.zero not in cone:
        return "missing zero"
    if R.one not in cone:
        return "missing one"
    for a, b in product(cone, repeat=2):
        if R.add(a, b) not in cone:
            return f"{a} + {b} leaves the cone"
        if R.mul(a, b) not in cone:
            return f"{a} * {b} leaves the cone"
    return None


def positive_cones(R: FiniteRig) -> list[frozenset]:
    """Every subrig of a finite ring, i.e. every admissible positive part."""
    rest = [x for x in R.elements if x not in (R.zero, R.one)]
    base = {R.zero, R.one}
    out = []
    for r in range(len(rest) + 1):
        for extra in combinations(rest, r):
            cone = frozenset(base | set(extra))
            if _subrig_violation(R, cone) is None:
                out.append(cone)
    return out


@dataclass(frozen=True)
class SampledMap:
    """A map ``R_+^n -> R_+`` known at 0, at the basis vectors, and at probes."""

    arity: int
    at_zero: object
    at_basis: tuple
    probes: tuple = ()  # ((x_1, ..., x_n), value) pairs

    def __post_init__(self):
        if len(self.at_basis) != self.arity:
            raise RigStructureError(f"need {self.arity} basis values, got {len(self.at_basis)}")
        for x, _ in self.probes:
            if len(x) != self.arity:
                raise RigStructureError(f"probe {x} does not have arity {self.arity}")


def sample_map(R: PreorderedRing, fn: Callable, n: int, probes: Sequence = ()) -> SampledMap:
    ring = R.ring
    zero = (ring.zero,) * n
    basis = [tuple(ring.one if i == j else ring.zero for j in range(n)) for i in range(n)]
    for x in probes:
        if not all(R.is_positive(v) for v in x):
            raise RigDomainError(f"probe {x} leaves the positive part")
    return SampledMap(n, fn(*zero), tuple(fn(*b) for b in basis),
                      tuple((tuple(x), fn(*x)) for x in probes))


def phi_w(R: PreorderedRing | Rig, w: Sequence, x: Sequence):
    """``w_0 + Σ x_i·w_i``."""
    ring = R.ring if isinstance(R, PreorderedRing) else R
    if len(w) != len(x) + 1:
        raise RigStructureError(f"weights of length {len(w)} need {len(w) - 1} inputs, "
                                f"got {len(x)}")
    return ring.add(w[0], ring.sum(ring.mul(xi, wi) for xi, wi in zip(x, w[1:])))


def w_of_phi(R: PreorderedRing | Rig, phi: SampledMap) -> tuple:
    """``(phi(0), phi(b_1) - phi(0), ..., phi(b_n) - phi(0))``."""
    ring = R.ring if isinstance(R, PreorderedRing) else R
    if not ring.is_ring:
        raise RigDomainError(f"{ring.label} has no subtraction")
    c = phi.at_zero
    return (c,) + tuple(ring.sub(v, c) for v in phi.at_basis)


@dataclass(frozen=True)
class AffineExtensionResult:
    holds: bool
    witness: tuple | None = None
    lhs: object = None
    rhs: object = None


def affine_extension_check(R: PreorderedRing, phi: SampledMap) -> AffineExtensionResult:
    """Test ``phi(x) == phi(0) + Σ x_i·(phi(b_i) - phi(0))`` on each probe.

    Only the supplied probes are checked, so ``holds`` certifies nothing
    beyond them.
    """
    ring = R.ring
    w = w_of_phi(R, phi)
    for x, value in phi.probes:
        rhs = phi_w(ring, w, x)
        if value != rhs:
            return AffineExtensionResult(False, x, value, rhs)
    return AffineExtensionResult(True)


def _require_finite(R: PreorderedRing) -> FiniteRig:
    if not isinstance(R.ring, FiniteRig):
        raise RigDomainError("decision procedure needs a finite ring; infinite rings "
                             "carry a declared archimedean flag instead")
    return R.ring


def auto_archimedean_finite(R: PreorderedRing) -> tuple[bool, object]:
    """Whether every r with an upper-bounded ray ``{s·r : s >= 0}`` has ``r <= 0``.

    Returns ``(True, None)`` or ``(False, r)`` for the first offending r.
    """
    ring = _require_finite(R)
    pos = R.positive_elements
    for r in ring.elements:
        ray = {ring.mul(s, r) for s in pos}
        bounded = any(all(R.leq(y, b) for y in ray) for b in ring.elements)
        if bounded and not R.leq(r, ring.zero):
            return False, r
    return True, None


def positive_affine_maps_have_positive_weights(R: PreorderedRing, n: int) -> tuple[bool, object]:
    """Whether every w whose map sends ``R_+^n`` into ``R_+`` lies in ``R_+^{1+n}``."""
    ring = _require_finite(R)
    pos = R.positive_elements
    inputs = list(product(pos, repeat=n))
    for w in product(ring.elements, repeat=n + 1):
        if all(R.is_positive(phi_w(ring, w, x)) for x in inputs):
            if not all(R.is_positive(v) for v in w):
                return False, w
    return True, None


def order_unit_exponent(x: DadicFraction) -> int:
    """Least e with ``x <= d**e``."""
    if not x.is_positive():
        raise RigDomainError(f"{x} is negative")
    e, bound = 0, DadicFraction(x.d, 1)
    while not x <= bound:
        e += 1
        bound = bound * x.d
    return e


def common_difference_identity(d: int, m: int) -> bool:
    """Check ``(1/d)m + ((d-2)/d)(m+1) + (1/d)(m+2) == m+1`` exactly in Z[1/d].

    Also requires the three coefficients to be non-negative and to sum to 1.
    """
    if d < 2:
        raise ValueError(f"base must be >= 2, got {d}")
    inv = DadicFraction(d, 1, 1)
    coeffs = (inv, DadicFraction(d, d - 2, 1), inv)
    points = (DadicFraction(d, m), DadicFraction(d, m + 1), DadicFraction(d, m + 2))
    total = sum((c * p for c, p in zip(coeffs, points)), DadicFraction(d, 0))
    return (total == points[1]
            and all(c.is_positive() for c in coeffs)
            and sum(coeffs, DadicFraction(d, 0)) == DadicFraction(d, 1))
