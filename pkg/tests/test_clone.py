import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from clonelab.clone import (BudgetExceeded, CloneSlice, GeneratorSet, clones_equal_at_arity,
                            collect_generators, commutant, commutant_by_enumeration,
                            commutation_witness, generate_clone, multiop_commutes,
                            multiop_commutes_direct, op_commutes)
from clonelab.matrix import RigMatrix, matrices_commute
from clonelab.optable import (JOIN2, MEET2, MultiOp, OpTable, all_tables, compose, constant,
                              malcev, op_from_row, projection, projections)
from clonelab.rig import RigStructureError, bool2, zmod
from oracles import clone_closure, commutant_naive, commutes_naive, multiop_direct

C0, C1 = constant(0, 2), constant(1, 2)
ID = projection(1, 0, 2)


def ops_upto(k, n):
    return [op for a in range(n + 1) for op in all_tables(k, a)]


@st.composite
def small_op(draw, k=2, max_arity=2):
    n = draw(st.integers(0, max_arity))
    return OpTable(k, n, draw(st.lists(st.integers(0, k - 1), min_size=k**n, max_size=k**n)))


@st.composite
def small_multiop(draw, k=2):
    n = draw(st.integers(0, 2))
    width = draw(st.integers(0, 2))
    comps = [OpTable(k, n, draw(st.lists(st.integers(0, k - 1), min_size=k**n,
                                         max_size=k**n))) for _ in range(width)]
    return MultiOp(k, n, tuple(comps))


# --- commutation --------------------------------------------------------------

def test_projection_is_central():
    for nu in ops_upto(2, 2):
        assert op_commutes(projection(2, 0, 2), nu)


def test_join_meet_do_not_commute():
    assert not op_commutes(JOIN2, MEET2)
    assert commutation_witness(JOIN2, MEET2) is not None
    g = [[1, 0], [0, 1]]
    # the stated witness: column joins then meet vs row meets then join
    cols = [JOIN2(g[0][t], g[1][t]) for t in range(2)]
    rows = [MEET2(*g[v]) for v in range(2)]
    assert MEET2(*cols) != JOIN2(*rows)


def test_join_commutes_with_itself():
    assert op_commutes(JOIN2, JOIN2)
    assert commutation_witness(JOIN2, JOIN2) is None


def test_nullary_rules():
    assert op_commutes(C0, C0) and not op_commutes(C0, C1)
    assert op_commutes(C0, JOIN2) and op_commutes(C1, JOIN2)
    assert not op_commutes(C1, OpTable(2, 2, (1, 1, 1, 0)))  # nand(1,1) = 0


def test_witness_is_a_real_counterexample():
    rng = random.Random(0)
    for _ in range(300):
        j, m = rng.randrange(3), rng.randrange(3)
        mu = OpTable(3, j, [rng.randrange(3) for _ in range(3**j)])
        nu = OpTable(3, m, [rng.randrange(3) for _ in range(3**m)])
        w = commutation_witness(mu, nu)
        if w is None:
            continue
        cols = [mu.eval([w[v][t] for v in range(j)]) for t in range(m)]
        rows = [nu.eval(w[v]) for v in range(j)]
        assert nu.eval(cols) != mu.eval(rows)


@settings(max_examples=300)
@given(small_op(k=3, max_arity=2), small_op(k=3, max_arity=2))
def test_commutes_matches_naive(mu, nu):
    assert op_commutes(mu, nu) == commutes_naive(mu, nu)
    assert op_commutes(mu, nu) == op_commutes(nu, mu)


def test_carrier_mismatch():
    with pytest.raises(RigStructureError):
        op_commutes(JOIN2, projection(1, 0, 3))


def test_multiop_examples():
    pi = MultiOp.of(*projections(2, 2))
    assert multiop_commutes(pi, MultiOp.of(JOIN2))
    assert multiop_commutes(MultiOp.of(MEET2), MultiOp(2, 2))


@settings(max_examples=300)
@given(small_multiop(), small_multiop())
def test_multiop_reduction(mu, nu):
    direct = multiop_direct(mu, nu)
    assert multiop_commutes(mu, nu) == direct
    assert multiop_commutes_direct(mu, nu) == direct


@pytest.mark.parametrize("R", [bool2(), zmod(3)], ids=lambda r: r.label)
def test_matrix_table_coherence(R):
    rng = random.Random(1)
    for _ in range(60):
        dims = [rng.randrange(1, 3) for _ in range(4)]
        X = RigMatrix(R, dims[0], dims[1], [[rng.randrange(R.size) for _ in range(dims[1])]
                                            for _ in range(dims[0])])
        Y = RigMatrix(R, dims[2], dims[3], [[rng.randrange(R.size) for _ in range(dims[3])]
                                            for _ in range(dims[2])])
        mx = MultiOp(R.size, X.cols, tuple(op_from_row(r, "left", R) for r in X.entries))
        my = MultiOp(R.size, Y.cols, tuple(op_from_row(r, "left", R) for r in Y.entries))
        assert matrices_commute(X, Y) == multiop_commutes(mx, my)


# --- commutant ----------------------------------------------------------------

def test_commutant_examples():
    s = commutant([JOIN2], 1)
    assert s.ops == (OpTable(2, 1, (0, 0)), ID, OpTable(2, 1, (1, 1)))
    s = commutant([JOIN2, C0], 2)
    assert set(s) == {op_from_row(w, "left", bool2()) for w in product((0, 1), repeat=2)}
    assert set(s) == {constant(0, 2, 2), *projections(2, 2), JOIN2}
    assert commutant([], 1, k=2).count == 4


@pytest.mark.parametrize("gens,counts", [
    ([JOIN2], [2, 3, 5, 9]),
    ([JOIN2, C0], [1, 2, 4, 8]),
    ([JOIN2, C0, C1], [0, 1, 3, 7]),
])
def test_commutant_counts_and_oracle(gens, counts):
    for n, c in enumerate(counts):
        s = commutant(gens, n)
        assert s.count == c
        assert [op.outputs for op in s] == commutant_naive(gens, n, 2)
        assert s == commutant_by_enumeration(gens, n)


@settings(max_examples=60, deadline=None)
@given(st.lists(small_op(k=2, max_arity=3), max_size=3), st.integers(0, 2))
def test_commutant_matches_oracle_random(gens, n):
    assert [op.outputs for op in commutant(gens, n, k=2)] == commutant_naive(gens, n, 2)


@settings(max_examples=30, deadline=None)
@given(st.lists(small_op(k=3, max_arity=2), min_size=1, max_size=2), st.integers(0, 1))
def test_commutant_matches_oracle_carrier3(gens, n):
    assert [op.outputs for op in commutant(gens, n)] == commutant_naive(gens, n, 3)


def test_commutant_contains_projections_and_is_closed():
    for gens in ([JOIN2], [MEET2], [malcev(zmod(3))]):
        k = gens[0].k
        one = commutant(gens, 1)
        for p in projections(1, k):
            assert p in one
        for f, g in product(one, repeat=2):
            assert compose(f, [g]) in one
        two = commutant(gens, 2)
        for p in projections(2, k):
            assert p in two
        for f in two:
            for a, b in product(one, repeat=2):
                # f(a(x), b(x)) is unary and must stay in the commutant
                assert compose(f, [a, b]) in one


def test_generator_invariance():
    # the arity-2 slice of the clone join generates contains join itself
    gen = generate_clone([JOIN2], 2)
    for n in range(3):
        assert commutant(list(gen), n, k=2) == commutant([JOIN2], n)


def test_generator_invariance_with_pooled_slices():
    pooled = collect_generators([generate_clone([JOIN2], a) for a in range(3)])
    for n in range(3):
        assert commutant(pooled, n) == commutant([JOIN2], n)


def test_galois_antitone_and_closure():
    G = [JOIN2]
    H = [JOIN2, C0]
    for n in range(4):
        assert commutant(H, n).issubset(commutant(G, n))
    for gens in (G, H, [MEET2, C1]):
        back = collect_generators([commutant(gens, a) for a in range(3)])
        for g in gens:
            assert g in commutant(back, g.arity)


def test_saturation():
    back = collect_generators([commutant([JOIN2], a) for a in range(3)])
    for n in range(4):
        assert commutant(back, n) == generate_clone([JOIN2], n)


def test_budget():
    with pytest.raises(BudgetExceeded) as info:
        commutant([], 2, k=3, budget=50)
    assert info.value.visited > 50 and info.value.budget == 50


def test_budget_env(monkeypatch):
    monkeypatch.setenv("CLONELAB_BUDGET", "5")
    with pytest.raises(BudgetExceeded):
        commutant([], 2, k=2)


# --- generation ---------------------------------------------------------------

def test_generate_examples():
    s = generate_clone([JOIN2], 2)
    assert set(s) == {*projections(2, 2), JOIN2}
    assert generate_clone([], 2, k=3).ops == tuple(sorted(projections(2, 3),
                                                          key=lambda o: o.outputs))


def test_generate_malcev_z3():
    m = malcev(zmod(3))
    s = generate_clone([m], 1)
    assert [op.outputs for op in s] == clone_closure([m], 1, 3)
    # only x -> x survives at arity 1: x - x + x = x
    assert s.count == 1


@settings(max_examples=60, deadline=None)
@given(st.lists(small_op(k=2, max_arity=2), max_size=3), st.integers(0, 2))
def test_generate_matches_closure_oracle(gens, n):
    assert [op.outputs for op in generate_clone(gens, n, k=2)] == clone_closure(gens, n, 2)


def test_clones_equal():
    a = commutant([JOIN2, C0, C1], 2)
    assert clones_equal_at_arity(a, generate_clone([JOIN2], 2))
    assert not clones_equal_at_arity(commutant([JOIN2], 1), generate_clone([JOIN2], 1))
    assert clones_equal_at_arity(a, a)
    with pytest.raises(RigStructureError):
        clones_equal_at_arity(a, commutant([JOIN2], 1))


def test_slice_order_and_json():
    s = CloneSlice.of(2, 1, [OpTable(2, 1, (1, 1)), ID, ID])
    assert [op.outputs for op in s] == [(0, 1), (1, 1)]
    doc = commutant([JOIN2], 1).to_json()
    assert doc["count"] == 3 and doc["ops"] == [[0, 0], [0, 1], [1, 1]] and "visited" in doc
    with pytest.raises(RigStructureError):
        CloneSlice.of(2, 1, [JOIN2])
    with pytest.raises(RigStructureError):
        GeneratorSet(2, (JOIN2, projection(1, 0, 3)))
