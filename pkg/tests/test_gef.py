from itertools import combinations

import pytest

from stabpar import plants
from stabpar.gef import (
    IndexSet,
    RadicalMismatch,
    check_radical_equality,
    enumerate_index_sets,
    gef_ideal,
    is_stabilizable,
    tau,
)
from stabpar.groebner import ideal_membership

from conftest import plant


def same_ideal(a, b):
    return all(ideal_membership(g, b) for g in a) and all(ideal_membership(g, a) for g in b)


def test_negative_example_ideals():
    P = plant("ring z1 z2; plant [z1/z2]")
    z1, z2 = P.ring.gens()
    # lam * z2 = k * z1 forces lam in (z1), and symmetrically
    assert same_ideal(gef_ideal(P, [1]).generators, [z1])
    assert same_ideal(gef_ideal(P, [2]).generators, [z2])
    assert is_stabilizable(P) is None


def test_running_example_ideals():
    P = plant("ring z; plant [1/(1-2*z)]")
    z = P.ring.gen("z")
    assert same_ideal(gef_ideal(P, [1]).generators, [P.ring.one()])
    assert same_ideal(gef_ideal(P, [2]).generators, [1 - 2 * z])


def test_two_piece_certificate():
    P = plant("ring z; plant [z/(1-z)]")
    z = P.ring.gen("z")
    cert = is_stabilizable(P)
    assert cert.check()
    assert [tuple(I) for I in cert.index_sets] == [(1,), (2,)]
    assert [l.monic() for l in cert.lambdas] == [z, (1 - z).monic()]
    c2 = cert.with_omega(3)
    assert c2.check() and c2.omega == 3


def test_witness_shape_and_forced_rows():
    P = plant("ring z1 z2; plant [1/(1-2*z1), z2]")
    for I in enumerate_index_sets(P.m, P.n):
        g = gef_ideal(P, I)
        assert g.check()
        for lam, K in zip(g.generators, g.witnesses):
            for k, i in enumerate(I):
                assert K[i - 1, k] == lam


def test_fraction_choice_does_not_change_ideals():
    a = plants.load("bivariate_scalar").to_plant()
    b = plants.load("bivariate_declared").to_plant()
    for I in enumerate_index_sets(1, 1):
        assert same_ideal(gef_ideal(a, I).generators, gef_ideal(b, I).generators)


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 2)])
def test_tau_is_a_bijection(m, n):
    images = {tau(I, m, n) for I in enumerate_index_sets(m, n)}
    assert images == {IndexSet(c) for c in combinations(range(1, m + n + 1), n)}


def test_tau_examples():
    assert tau([1], 1, 1) == (1,)
    assert tau([2], 1, 1) == (2,)
    # n = 2, m = 1: I = {3} is all-denominator, so J = {} U {1+1, 2+1}
    assert tau([3], 1, 2) == (2, 3)


def test_index_set_validation():
    with pytest.raises(ValueError):
        IndexSet([2, 1])
    with pytest.raises(ValueError):
        gef_ideal(plant("ring z; plant [z]"), [1, 2])


@pytest.mark.parametrize("name", plants.names())
def test_radical_equality_bundled(name):
    P = plants.load(name).to_plant()
    Pt = P.transpose()
    for I in enumerate_index_sets(P.m, P.n):
        assert check_radical_equality(P, I, Pt)


def test_radical_mismatch_is_an_assertion():
    assert issubclass(RadicalMismatch, AssertionError)
