import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from clonelab.ordered import (DadicFraction, PreorderedRing, SampledMap,
                              affine_extension_check, auto_archimedean_finite,
                              common_difference_identity, order_unit_exponent, phi_w,
                              positive_affine_maps_have_positive_weights, positive_cones,
                              sample_map, w_of_phi)
from clonelab.rig import (INTEGERS, ExactRig, RigDomainError, RigStructureError, bool2,
                          upper_triangular_z2, zmod)

D2 = PreorderedRing.natural(ExactRig("d_adic", 2))
Z = PreorderedRing.natural(INTEGERS)
h = lambda s: DadicFraction.parse(s, 2)


def test_phi_w_examples():
    assert phi_w(D2, (h("1/2^1"), h("3/2^2")), (h("2"),)) == h("2")
    for n in range(1, 4):
        w = (0, 1) + (0,) * (n - 1)
        x = tuple(range(7, 7 + n))
        assert phi_w(Z, w, x) == x[0]
    assert phi_w(Z, (5,), ()) == 5
    with pytest.raises(RigStructureError):
        phi_w(Z, (1, 2), (1, 2))


def test_w_of_phi_examples():
    phi = SampledMap(1, h("1/2^1"), (h("5/2^2"),))
    assert w_of_phi(D2, phi) == (h("1/2^1"), h("3/2^2"))
    ident = sample_map(Z, lambda x: x, 1)
    assert w_of_phi(Z, ident) == (0, 1)
    with pytest.raises(RigDomainError):
        w_of_phi(bool2(), SampledMap(0, 1, ()))


@st.composite
def positive_weights(draw, d):
    n = draw(st.integers(0, 3))
    mk = lambda: DadicFraction(d, draw(st.integers(0, 200)), draw(st.integers(0, 6)))
    return tuple(mk() for _ in range(n + 1)), [tuple(mk() for _ in range(n)) for _ in range(3)]


@pytest.mark.parametrize("d", [2, 3, 5])
@given(data=st.data())
def test_roundtrip_and_positivity(d, data):
    R = PreorderedRing.natural(ExactRig("d_adic", d))
    w, probes = data.draw(positive_weights(d))
    phi = sample_map(R, lambda *x: phi_w(R, w, x), len(w) - 1, probes)
    assert w_of_phi(R, phi) == w
    assert affine_extension_check(R, phi).holds
    for x, v in phi.probes:
        assert R.is_positive(v)


def test_integer_counterexample():
    phi = sample_map(Z, lambda x: 2**x, 1, [(2,)])
    res = affine_extension_check(Z, phi)
    assert not res.holds and res.witness == (2,) and (res.lhs, res.rhs) == (4, 3)


def test_dadic_extension_holds():
    phi = SampledMap(1, h("1/2^1"), (h("5/2^2"),), (((h("2"),), h("2")),))
    assert affine_extension_check(D2, phi).holds


def test_probe_validation():
    with pytest.raises(RigDomainError):
        sample_map(Z, lambda x: x, 1, [(-1,)])
    with pytest.raises(RigStructureError):
        SampledMap(2, 0, (1,))


def test_cones():
    for m in (2, 3, 4, 5, 6):
        assert positive_cones(zmod(m)) == [frozenset(range(m))]
    with pytest.raises(RigStructureError):
        PreorderedRing(zmod(4), frozenset({0, 1}))
    with pytest.raises(RigDomainError):
        PreorderedRing(bool2())
    ut = upper_triangular_z2()
    cones = positive_cones(ut)
    assert all(ut.zero in c and ut.one in c for c in cones)
    assert frozenset(ut.elements) in cones


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_auto_archimedean_full_cone(m):
    R = PreorderedRing(zmod(m))
    assert auto_archimedean_finite(R) == (True, None)


def test_auto_archimedean_needs_finite():
    with pytest.raises(RigDomainError):
        auto_archimedean_finite(Z)
    assert Z.archimedean and D2.archimedean


def test_archimedean_matches_positive_weights():
    ut = upper_triangular_z2()
    rings = [PreorderedRing(zmod(m)) for m in (2, 3, 4)]
    rings += [PreorderedRing(ut, c) for c in positive_cones(ut)]
    for R in rings:
        auto, _ = auto_archimedean_finite(R)
        for n in range(3):
            ok, _ = positive_affine_maps_have_positive_weights(R, n)
            assert ok == auto


def test_order_unit_exponent():
    assert order_unit_exponent(h("7/2^2")) == 1
    assert order_unit_exponent(DadicFraction(2, 1)) == 0
    assert order_unit_exponent(DadicFraction(3, 9)) == 2
    assert order_unit_exponent(DadicFraction(3, 0)) == 0
    with pytest.raises(RigDomainError):
        order_unit_exponent(DadicFraction(2, -1))


def test_common_difference():
    assert common_difference_identity(3, 5)
    assert common_difference_identity(2, 0)
    assert common_difference_identity(5, 10)
    for d, m in product((2, 3, 5, 7), range(11)):
        assert common_difference_identity(d, m)
    with pytest.raises(ValueError):
        common_difference_identity(1, 0)


def test_leq_and_positive_elements():
    assert D2.leq(h("7/2^2"), h("2")) and not D2.leq(h("2"), h("7/2^2"))
    with pytest.raises(RigDomainError):
        D2.positive_elements
    assert PreorderedRing(zmod(3)).positive_elements == [0, 1, 2]
