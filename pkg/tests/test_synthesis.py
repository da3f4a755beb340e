import random

import pytest

from stabpar import plants
from stabpar.feedback import compute_H
from stabpar.fracring import Causality
from stabpar.gef import is_stabilizable
from stabpar.param import random_matrix
from stabpar.synthesis import (
    Unstabilizable,
    ZSingularDenominator,
    choose_omega,
    glued_closed_loop,
    controller_causality,
    glued_controller,
    local_factorization,
    synthesize,
    verify_controller,
)

from conftest import mat, plant

STABILIZABLE = [n for n in plants.names() if n != "bivariate_unstabilizable"]


def base_factorizations(P):
    cert = is_stabilizable(P)
    Pt = P.transpose()
    return [local_factorization(P, I, lam, K, Pt) for I, lam, K, _ in cert.entries]


def test_running_example_goes_through_fallback():
    P = plant("ring z; plant [1/(1-2*z)]")
    facts = base_factorizations(P)
    with pytest.raises(ZSingularDenominator):
        glued_controller(facts, [P.ring.one()], choose_omega(facts))
    res = synthesize(P)
    assert res.controller == mat("[2*z]", P.ring)
    assert res.attempts == 2 and res.report["fallback_shifts"] == 1
    assert res.closed_loop.H == mat("[1-2*z, -1; 2*z*(1-2*z), 1-2*z]", P.ring)


def test_strictly_causal_plant_gets_causal_controller():
    P = plant("ring z; plant [z/(1-z)]")
    res = synthesize(P)
    z = P.ring.gen("z")
    assert [tuple(I) for I in res.index_sets] == [(1,), (2,)]
    assert [l.monic() for l in res.lambdas] == [z, (1 - z).monic()]
    assert res.report["controller_causal"]
    assert controller_causality(res.controller) is not Causality.NOT_CAUSAL
    # C = 1: 1 + PC = 1/(1 - z), so H11 = 1 - z
    assert res.controller == mat("[1]", P.ring)


def test_unstabilizable():
    with pytest.raises(Unstabilizable):
        synthesize(plant("ring z1 z2; plant [z1/z2]"))
    with pytest.raises(Unstabilizable):
        synthesize(plant("ring z1 z2; plant [z1*z2/(z1+z2)]"))


@pytest.mark.parametrize("name", STABILIZABLE)
def test_bundled_synthesis(name):
    P = plants.load(name).to_plant()
    res = synthesize(P)
    assert all(v for k, v in res.report.items() if k.endswith(("_over_A", "stabilizing", "nonsingular")))
    H = compute_H(P, res.controller)
    assert H == res.closed_loop
    assert glued_closed_loop(res.factorizations, res.coefficients, res.omega) == H
    for f in res.factorizations:
        assert f.check(P) and f.normalization_holds()
        assert f.X0.shape == (P.n, P.n) and f.Xt.shape == (P.m, P.m)
    if P.is_strictly_causal():
        assert res.report["controller_causal"]


def test_shift_preserves_normalization():
    P = plant("ring z1 z2; plant [1/(1-2*z1), z2]")
    rng = random.Random(3)
    for f in base_factorizations(P):
        for _ in range(5):
            R = random_matrix(P.ring, P.m, P.n, rng, 1)
            g = f.shifted(R)
            assert g.check(P) and g.normalization_holds()


def test_verify_reports_failure():
    P = plant("ring z; plant [1/(1-2*z)]")
    rep = verify_controller(P, mat("[0]", P.ring))
    assert rep["loop_nonsingular"] and not rep["stabilizing"]


def test_synthesis_is_deterministic():
    P = plant("ring z1 z2; plant [1/(1-2*z1), z2]")
    a, b = synthesize(P), synthesize(P)
    assert a.controller == b.controller and a.attempts == b.attempts
