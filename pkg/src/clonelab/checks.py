"""Desk-scale theorem checks with structured pass/fail reports.

Each check returns a JSON-ready dict with a ``"pass"`` verdict.  Reports
never contain timings or anything else that varies between runs.
"""

from __future__ import annotations

import random
from itertools import product

from .clone import (BudgetExceeded, CloneSlice, collect_generators, commutant,
                    commutant_by_enumeration, generate_clone, multiop_commutes,
                    multiop_commutes_direct, op_commutes)
from .dadic import DadicFraction
from .matrix import RigMatrix, kron_first, kron_first_composite, matrices_commute
from .optable import JOIN2, MultiOp, OpTable, all_tables, op_pointed
from .ordered import (PreorderedRing, SampledMap, affine_extension_check,
                      common_difference_identity, phi_w, sample_map, w_of_phi)
from .rig import ExactRig, INTEGERS, bool2, upper_triangular_z2, zmod
from .theories import TheoryName, parse_theory, theory_generators, theory_slice

SEED = 20240917


class CheckAborted(RuntimeError):
    """A check ran out of search budget; ``report`` holds what was computed."""

    def __init__(self, report: dict, cause: BudgetExceeded):
        self.report = report
        super().__init__(str(cause))


def _slice_row(n: int, expected: CloneSlice, actual: CloneSlice, **extra) -> dict:
    row = {"arity": n, "expected": expected.count, "actual": actual.count,
           "equal": expected == actual}
    row.update(extra)
    return row


def _finish(report: dict) -> dict:
    report["pass"] = all(r["equal"] for r in report["arities"]) and report.get("pass", True)
    return report


def _guard(fn):
    def run(*args, **kwargs):
        report = {"check": fn.__name__.replace("_", "-"), "arities": []}
        try:
            out = fn(report, *args, **kwargs)
            if not out["arities"]:
                del out["arities"]
            return out
        except BudgetExceeded as exc:
            report["pass"] = False
            report["budget_exceeded"] = str(exc)
            raise CheckAborted(report, exc) from exc
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def mutual_direction(report: dict, gens_of: TheoryName, slice_of: TheoryName,
                     max_arity: int, budget=None, naive: bool = False) -> None:
    """Append rows comparing commutant(gens_of) with the slice of ``slice_of``."""
    gens = theory_generators(gens_of)
    for n in range(max_arity + 1):
        expected = theory_slice(slice_of, n)
        found = commutant(gens, n, budget=budget)
        extra = {"direction": f"{gens_of}^perp = {slice_of}", "visited": found.visited}
        if naive:
            extra["naive_agrees"] = commutant_by_enumeration(gens, n) == found
        row = _slice_row(n, expected, found, **extra)
        if naive:
            row["equal"] = row["equal"] and extra["naive_agrees"]
        report["arities"].append(row)


@_guard
def mutual(report, left: str, right: str, max_arity: int = 2, budget=None) -> dict:
    """Each theory is the commutant of the other, at arities 0..max_arity."""
    lt, rt = parse_theory(left), parse_theory(right)
    if lt.k != rt.k:
        raise ValueError(f"{left} and {right} live on different carriers")
    report.update(left=str(lt), right=str(rt))
    mutual_direction(report, lt, rt, max_arity, budget)
    mutual_direction(report, rt, lt, max_arity, budget)
    return _finish(report)


@_guard
def balanced_slat(report, max_arity: int = 3, budget=None) -> dict:
    """Join semilattices (2-modules) form a balanced theory: their own commutant."""
    t = parse_theory("mat-left@bool2")
    mutual_direction(report, t, t, max_arity, budget, naive=True)
    report["counts"] = [r["actual"] for r in report["arities"]]
    return _finish(report)


@_guard
def uslat_top(report, max_arity: int = 3, budget=None) -> dict:
    """Unbounded semilattices and semilattices with top are mutual commutants on 2."""
    uslat, top = parse_theory("uslat"), parse_theory("slat-top")
    mutual_direction(report, uslat, top, max_arity, budget)
    mutual_direction(report, top, uslat, max_arity, budget)
    # the affine slice over bool2 is the same theory as uslat
    aff = parse_theory("aff@bool2")
    for n in range(max_arity + 1):
        report["arities"].append(
            _slice_row(n, theory_slice(aff, n), theory_slice(uslat, n),
                       direction="aff@bool2 = uslat"))
    rows = report["arities"]
    report["counts"] = [r["actual"] for r in rows[:max_arity + 1]]
    report["reverse_counts"] = [r["actual"] for r in rows[max_arity + 1:2 * (max_arity + 1)]]
    return _finish(report)


@_guard
def ring_affine(report, m: int, max_arity: int = 2, budget=None) -> dict:
    """Over Z/m, affine combinations and pointed right modules are mutual commutants."""
    aff, pointed = parse_theory(f"aff@zmod{m}"), parse_theory(f"pointed@zmod{m}")
    report["modulus"] = m
    mutual_direction(report, aff, pointed, max_arity, budget)
    mutual_direction(report, pointed, aff, max_arity, budget)
    for row in report["arities"][:max_arity + 1]:
        row["predicted"] = m ** (1 + row["arity"])
        row["equal"] = row["equal"] and row["actual"] == row["predicted"]
    return _finish(report)


@_guard
def modules_mutual(report, m: int, max_arity: int = 2, budget=None) -> dict:
    """Left and right Z/m-modules are mutual commutants."""
    left, right = parse_theory(f"mat-left@zmod{m}"), parse_theory(f"mat-right@zmod{m}")
    report["modulus"] = m
    mutual_direction(report, left, right, max_arity, budget)
    mutual_direction(report, right, left, max_arity, budget)
    return _finish(report)


@_guard
def saturation(report, max_arity: int = 3, collect_arity: int = 2, budget=None) -> dict:
    """The double commutant of {join} on 2 gives back the clone {join} generates."""
    first = [commutant([JOIN2], a, budget=budget) for a in range(collect_arity + 1)]
    gens = collect_generators(first)
    report["collected_generators"] = len(gens)
    for n in range(max_arity + 1):
        report["arities"].append(_slice_row(
            n, generate_clone([JOIN2], n), commutant(gens, n, budget=budget)))
    return _finish(report)


@_guard
def dadic_identity(report, d: int, max_m: int = 10) -> dict:
    """Exact check that m+1 is the affine combination (1/d)m + ((d-2)/d)(m+1) + (1/d)(m+2)."""
    report["d"] = d
    for m in range(max_m + 1):
        ok = common_difference_identity(d, m)
        report["arities"].append({"m": m, "equal": ok})
    return _finish(report)


def _random_matrix(rng, rig, rows, cols):
    return RigMatrix(rig, rows, cols, [[rng.randrange(rig.size) for _ in range(cols)]
                                       for _ in range(rows)])


@_guard
def kron_agreement(report, max_dim: int = 3, samples: int = 2) -> dict:
    """Entry-formula Kronecker product equals the block-matrix composite over Z/5."""
    rng = random.Random(SEED)
    R = zmod(5)
    mismatches = total = 0
    for jp, j, kp, k in product(range(max_dim + 1), repeat=4):
        for _ in range(samples):
            X, Y = _random_matrix(rng, R, jp, j), _random_matrix(rng, R, kp, k)
            total += 1
            if kron_first(X, Y) != kron_first_composite(X, Y):
                mismatches += 1
    report.update(pairs=total, mismatches=mismatches, **{"pass": mismatches == 0})
    return report


def _ops_upto(k: int, max_arity: int) -> list[OpTable]:
    return [op for n in range(max_arity + 1) for op in all_tables(k, n)]


@_guard
def commutation_laws(report, max_arity: int = 3, multiop_pairs: int = 500) -> dict:
    """Commutation is symmetric, and multi-output commutation reduces to components."""
    ops = _ops_upto(2, max_arity)
    asym = 0
    for a in ops:
        for b in ops:
            if op_commutes(a, b) != op_commutes(b, a):
                asym += 1
    report["symmetry_pairs"] = len(ops) ** 2
    report["symmetry_mismatches"] = asym

    rng = random.Random(SEED)
    small = {n: list(all_tables(2, n)) for n in range(3)}
    mismatch = 0
    for _ in range(multiop_pairs):
        ms = []
        for _side in range(2):
            n, width = rng.randrange(3), rng.randrange(3)
            ms.append(MultiOp(2, n, tuple(rng.choice(small[n]) for _ in range(width))))
        if multiop_commutes(*ms) != multiop_commutes_direct(*ms):
            mismatch += 1
    report["multiop_pairs"] = multiop_pairs
    report["multiop_mismatches"] = mismatch
    report["pass"] = asym == 0 and mismatch == 0
    return report


def _random_positive_dadic(rng, d):
    return DadicFraction(d, rng.randrange(0, 64), rng.randrange(0, 5))


@_guard
def ordered(report, samples: int = 100) -> dict:
    """Pointed-map roundtrip over Z[1/2], the Z counterexample, the d-adic identity."""
    rng = random.Random(SEED)
    R = PreorderedRing.natural(ExactRig("d_adic", 2))
    bad = 0
    for _ in range(samples):
        n = rng.randrange(4)
        w = tuple(_random_positive_dadic(rng, 2) for _ in range(n + 1))
        probes = [tuple(_random_positive_dadic(rng, 2) for _ in range(n)) for _ in range(3)]
        phi = sample_map(R, lambda *x, w=w: phi_w(R, w, x), n, probes)
        if w_of_phi(R, phi) != w or not affine_extension_check(R, phi).holds:
            bad += 1
    report["roundtrip"] = {"samples": samples, "mismatches": bad}

    Z = PreorderedRing.natural(INTEGERS)
    pow2 = SampledMap(1, 1, (2,), (((2,), 4),))
    res = affine_extension_check(Z, pow2)
    report["integer_counterexample"] = {
        "holds": res.holds, "witness": list(res.witness or ()), "lhs": res.lhs, "rhs": res.rhs}
    z_ok = (not res.holds) and res.witness == (2,) and res.lhs == 4 and res.rhs == 3

    identity = {d: all(common_difference_identity(d, m) for m in range(11)) for d in (2, 3, 5)}
    report["common_difference"] = {str(d): ok for d, ok in identity.items()}

    B = bool2()
    collide = op_pointed((1, 0), B) == op_pointed((1, 1), B)
    report["bool2_collision"] = collide

    report["pass"] = bad == 0 and z_ok and all(identity.values()) and collide
    return report


@_guard
def noncommutative(report) -> dict:
    """Over the upper-triangular ring, left and right modules differ."""
    R = upper_triangular_z2()
    left = theory_slice(TheoryName("mat_left", R), 1)
    right = theory_slice(TheoryName("mat_right", R), 1)
    witness = None
    for a, b in product(R.elements, repeat=2):
        if not matrices_commute(RigMatrix(R, 1, 1, [[a]]), RigMatrix(R, 1, 1, [[b]])):
            witness = [a, b]
            break
    report.update(slices_differ=left != right, noncommuting_pair=witness,
                  **{"pass": left != right and witness is not None})
    return report


def run_all(budget=None) -> dict:
    """Every check, in a fixed order."""
    reports = [
        kron_agreement(),
        balanced_slat(budget=budget),
        uslat_top(budget=budget),
        ring_affine(2, budget=budget),
        ring_affine(3, budget=budget),
        modules_mutual(2, budget=budget),
        modules_mutual(3, budget=budget),
        modules_mutual(4, budget=budget),
        saturation(budget=budget),
        commutation_laws(),
        ordered(),
        noncommutative(),
        dadic_identity(2),
        dadic_identity(3),
        dadic_identity(5),
    ]
    return {"check": "all", "pass": all(r["pass"] for r in reports), "reports": reports}


CHECKS = {
    "balanced-slat": balanced_slat,
    "uslat-top": uslat_top,
    "ring-affine": ring_affine,
    "modules-mutual": modules_mutual,
    "saturation": saturation,
    "dadic-identity": dadic_identity,
    "kron-agreement": kron_agreement,
    "commutation-laws": commutation_laws,
    "ordered": ordered,
    "noncommutative": noncommutative,
    "mutual": mutual,
}

