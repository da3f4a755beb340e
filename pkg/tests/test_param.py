import random

import pytest

from stabpar import plants
from stabpar.feedback import compute_H
from stabpar.fracring import Causality, causality
from stabpar.linalg import det, zeros
from stabpar.param import (
    NoFactorization,
    OmegaContext,
    SingularOmega,
    SingularYoulaDenominator,
    controllers_from_q,
    glue_q,
    h_hat,
    omega,
    q_for_controller,
    q_from_r,
    r_from_q,
    random_matrix,
    sample_parameterization,
    youla_controller,
    youla_controller_dual,
)
from stabpar.synthesis import synthesize

from conftest import mat, plant


@pytest.fixture(scope="module")
def scalar():
    P = plant("ring z; plant [1/(1-2*z)]")
    return OmegaContext.from_synthesis(synthesize(P))


@pytest.fixture(scope="module")
def two_piece():
    P = plant("ring z; plant [z/(1-z)]")
    return OmegaContext.from_synthesis(synthesize(P))


def M(text, ctx):
    return mat(text, ctx.ring)


def test_reference_factorization(scalar):
    g = scalar.global_
    # Yt0 = 2z, Xt0 = 1, Nt = 1, Dt = 1 - 2z
    assert (g.Yt0, g.Xt0, g.Nt, g.Dt) == (M("[2*z]", scalar), M("[1]", scalar), M("[1]", scalar), M("[1-2*z]", scalar))
    assert g.unimodular() and g.normalization_holds()


def test_youla(scalar):
    assert youla_controller(scalar, M("[0]", scalar)) == scalar.C0
    # (1 - z)^-1 (2z + z(1 - 2z))
    assert youla_controller(scalar, M("[z]", scalar)) == M("[(3*z - 2*z^2)/(1 - z)]", scalar)
    with pytest.raises(SingularYoulaDenominator):
        youla_controller(scalar, M("[1]", scalar))
    assert youla_controller_dual(scalar, M("[z]", scalar)) == youla_controller(scalar, M("[z]", scalar))
    assert youla_controller_dual(scalar, M("[0]", scalar)) == scalar.C0


def test_h_hat(scalar):
    assert h_hat(scalar, M("[0]", scalar)) == scalar.H0.H
    expected = M("[(1-2*z)^2, -(1-2*z); 2*z*(1-2*z)*(2-2*z), (1-2*z)^2]", scalar)
    assert h_hat(scalar, M("[2*z]", scalar)) == expected
    assert not det(h_hat(scalar, M("[1]", scalar)))
    C = youla_controller(scalar, M("[z]", scalar))
    assert h_hat(scalar, M("[z]", scalar)) == compute_H(scalar.P, C).H


def test_omega_examples(scalar):
    Z = zeros(scalar.ring, 2, 2)
    assert omega(scalar, Z) == scalar.H0.H
    Q = M("[0, 0; 0, 1]", scalar)
    W = omega(scalar, Q)
    assert W == h_hat(scalar, M("[2*z]", scalar))
    assert det(W) == scalar.ring.parse("(1-2*z)^2")
    with pytest.raises(ValueError):
        omega(scalar, M("[1]", scalar))


def test_r_and_q_maps(scalar):
    assert r_from_q(scalar, M("[0, 0; 0, 1]", scalar)) == M("[2*z]", scalar)
    assert r_from_q(scalar, zeros(scalar.ring, 2, 2)) == M("[0]", scalar)
    assert q_from_r(scalar, M("[0]", scalar)) == zeros(scalar.ring, 2, 2)
    expected = M("[2*z*(1-2*z), 2*z; 2*z*(1-2*z)^2, 2*z*(1-2*z)]", scalar)
    assert q_from_r(scalar, M("[2*z]", scalar)) == expected


def test_extraction(scalar):
    assert controllers_from_q(scalar, zeros(scalar.ring, 2, 2)) == scalar.C0
    C = controllers_from_q(scalar, M("[0, 0; 0, 1]", scalar))
    assert C == M("[2*z*(2-2*z)/(1-2*z)]", scalar)
    assert compute_H(scalar.P, C).H11 == M("[(1-2*z)^2]", scalar)
    with pytest.raises(SingularOmega):
        controllers_from_q(scalar, q_from_r(scalar, M("[1]", scalar)))


def test_image_equality_small(scalar):
    rng = random.Random(11)
    for _ in range(10):
        R = random_matrix(scalar.ring, 1, 1, rng, 2)
        assert omega(scalar, q_from_r(scalar, R)) == h_hat(scalar, R)
        assert r_from_q(scalar, q_from_r(scalar, R)) == R
        Q = random_matrix(scalar.ring, 2, 2, rng, 2)
        assert h_hat(scalar, r_from_q(scalar, Q)) == omega(scalar, Q)


def test_two_piece_context(two_piece):
    assert len(two_piece.pieces) == 2
    rng = random.Random(5)
    for i, loc in enumerate(two_piece.pieces):
        assert loc.unimodular() and loc.normalization_holds()
        for _ in range(5):
            R = random_matrix(two_piece.ring, 1, 1, rng, 2)
            Q = q_from_r(two_piece, R, i)
            assert omega(two_piece, Q) == h_hat(two_piece, R, i)
            assert r_from_q(two_piece, Q, i) == R


def test_glue_reproduces_closed_loop(two_piece):
    rep = sample_parameterization(two_piece.P, 3, seed=4, ctx=two_piece)
    for Q, C, H in rep:
        Qg = q_for_controller(two_piece, C)
        assert omega(two_piece, Qg) == H.H
    zero = zeros(two_piece.ring, 2, 2)
    assert glue_q(two_piece.pieces, [zero] * len(two_piece.pieces)) == zero


def test_glue_single_trivial(scalar):
    Q = M("[z, 1; 0, 2]", scalar)
    assert glue_q(scalar.pieces, [Q], coeffs=[scalar.ring.one()], w=1) == Q


def test_no_global_factorization_needs_index():
    P = plant("ring z; plant [z/(1-z)]")
    ctx = OmegaContext.from_synthesis(synthesize(P))
    assert ctx.global_ is None
    with pytest.raises(NoFactorization):
        youla_controller(ctx, mat("[0]", P.ring))


def test_sampling_determinism_and_edges(scalar):
    a = sample_parameterization(scalar.P, 3, seed=5, ctx=scalar)
    b = sample_parameterization(scalar.P, 3, seed=5, ctx=scalar)
    assert [s.controller for s in a.samples] == [s.controller for s in b.samples]
    assert len(sample_parameterization(scalar.P, 0, ctx=scalar)) == 0
    one = sample_parameterization(scalar.P, 1, seed=9, degree=0, ctx=scalar)
    assert len(one) == 1 and one.samples[0].Q.to_poly().entries()
    for s in a.samples:
        assert s.checks["stabilizing"] and s.checks["H_equals_omega_Q"]


def test_strictly_causal_samples_are_causal(two_piece):
    rep = sample_parameterization(two_piece.P, 5, seed=2, ctx=two_piece)
    for s in rep.samples:
        assert all(causality(x) is not Causality.NOT_CAUSAL for x in s.controller.entries())


@pytest.mark.parametrize("name", ["bivariate_row", "bivariate_column", "bivariate_diagonal"])
def test_mimo_pieces_unimodular(name):
    P = plants.load(name).to_plant()
    ctx = OmegaContext.from_synthesis(synthesize(P))
    for loc in ctx.pieces:
        assert loc.unimodular() and loc.normalization_holds()
