import random

import pytest

from stabpar.groebner import (
    groebner_basis,
    ideal_membership,
    ideal_quotient,
    module_syzygies,
    one_combination,
    power_combination,
    radical_membership,
    saturate,
)
from stabpar.polyring import PolyRing

from _corpus import IDEALS

R = PolyRing("x y z")
x, y, z = R.gens()


def P(t):
    return R.parse(t)


def combo(gens, rng):
    out = R.zero()
    for g in gens:
        c = R.poly({(rng.randint(0, 1), rng.randint(0, 1), rng.randint(0, 1)): rng.randint(-3, 3)})
        out = out + c * g
    return out


@pytest.mark.parametrize("texts", IDEALS, ids=[" ; ".join(t) for t in IDEALS])
def test_corpus_memberships_recertify(texts):
    gens = [P(t) for t in texts]
    eb = groebner_basis(gens, ring=R)
    eb.check()
    rng = random.Random(hash(tuple(texts)) & 0xFFFF)
    for _ in range(4):
        f = combo(gens, rng)
        cert = ideal_membership(f, gens, eb)
        assert cert is not None and cert.check()
    for g in gens:
        cert = radical_membership(g * g, gens)
        assert cert is not None and cert[0] == 1 and cert[1].check()


def test_basis_is_groebner_for_twisted_cubic():
    gens = [P("x^2 - y"), P("x^3 - z")]
    # y = x^2, z = x^3 gives y^3 = z^2 and x*y = z
    for f in ["y^3 - z^2", "x*y - z", "x*z - y^2"]:
        assert ideal_membership(P(f), gens).check()
    assert ideal_membership(P("y - z"), gens) is None


def test_non_member_and_unit_ideal():
    assert ideal_membership(x, [x**2, y]) is None
    assert groebner_basis([x * y - 1, x], ring=R).is_unit_ideal()
    assert not groebner_basis([x, y], ring=R).is_unit_ideal()


def test_radical_minimal_power():
    k, cert = radical_membership(x, [x**3, y])
    assert k == 3 and cert.check()
    k, cert = radical_membership(x + y, [x**2, y**2])
    assert k == 3 and cert.check()  # (x + y)^2 = 2xy is not in (x^2, y^2)
    assert radical_membership(x, [x * y]) is None


def test_one_combination_sums_to_one():
    out = one_combination([[x], [1 - x]])
    assert sum((lam for lam, _ in out), R.zero()) == 1
    for lam, cert in out:
        assert cert.check()
    assert one_combination([[x], [y]]) is None


def test_power_combination():
    lams = [z, 1 - z]
    for w in (1, 2, 3):
        a = power_combination(lams, w)
        assert sum((ai * l**w for ai, l in zip(a, lams)), R.zero()) == 1
    assert power_combination([x, y], 2) is None


def test_syzygies_of_two_scalars_are_koszul():
    f, g = (x + 1) * y, (x + 1) * z
    syz = module_syzygies([[f], [g]])
    assert syz
    for s in syz:
        assert s[0] * f + s[1] * g == 0
        # the module is generated by (z, -y); every element is a multiple
        assert z.divides(s[0])
        q = s[0].exact_div(z)
        assert s[1] == -q * y
    assert any(s[0].total_degree() == 1 for s in syz)


def test_vector_syzygies_annihilate():
    cols = [[x, y], [y, z], [z, x]]
    syz = module_syzygies(cols)
    for s in syz:
        for row in range(2):
            assert sum((s[i] * cols[i][row] for i in range(3)), R.zero()) == 0


def test_saturation_and_quotient():
    assert saturate([x * y], x) == [y]
    assert ideal_quotient([x * y], x) == [y]
    q = ideal_quotient([(1 - x) * y**2], y)
    assert len(q) == 1 and q[0].monic() == ((1 - x) * y).monic()
