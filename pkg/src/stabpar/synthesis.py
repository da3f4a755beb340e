"""Local coprime factorizations from GEF witnesses and controller synthesis.

Each index set ``I`` with ``lam_I`` in its factor yields a doubly coprime
factorization of the plant over the localization ``A_{lam_I}``; the pieces
are glued with coefficients ``a_I`` satisfying ``sum a_I lam_I^w = 1``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .feedback import ClosedLoop, SingularLoop, _tidy_mat, compute_H
from .fracring import Causality, LocalizedElement, causality, in_A_lambda
from .gef import RadicalMismatch, all_gef_ideals, delta_matrix, gef_ideal, is_stabilizable, tau
from .groebner import CertificateError, power_combination, radical_membership
from .linalg import Mat, block, det, identity, inverse, zeros

__all__ = [
    "LocalFactorization",
    "Unstabilizable",
    "FallbackExhausted",
    "ZSingularDenominator",
    "DegenerateWitness",
    "MembershipFailure",
    "CausalityViolation",
    "SynthesisResult",
    "local_rcf",
    "local_lcf",
    "local_factorization",
    "choose_omega",
    "glued_controller",
    "glued_closed_loop",
    "synthesize",
    "MAX_FALLBACK_RETRIES",
]

MAX_FALLBACK_RETRIES = 32


class Unstabilizable(Exception):
    """The generalized elementary factors do not generate the unit ideal."""


class FallbackExhausted(RuntimeError):
    """No shift produced a denominator outside the causality ideal."""


class ZSingularDenominator(ArithmeticError):
    """``det(sum a lam^w D X~)`` is zero or lies in the causality ideal."""


class DegenerateWitness(AssertionError):
    pass


class MembershipFailure(AssertionError):
    """A matrix expected over ``A`` has an entry outside ``A``."""


class CausalityViolation(AssertionError):
    """A strictly causal plant received a non-causal controller."""


def _loc(M, lam, power):
    """Entry-wise ``M / lam**power`` as localized elements."""
    return M.map(lambda x: LocalizedElement(x, lam, power))


@dataclass
class LocalFactorization:
    """Doubly coprime data over ``A_lam``.

    Right side ``P = N D^-1`` with ``Yt N + Xt D = E_m``; left side
    ``P = Dt^-1 Nt`` with ``Nt Y0 + Dt X0 = E_n``; normalized so that
    ``[[Xt, Yt], [Nt, -Dt]] [[D, Y0], [N, -X0]] = E``.
    """

    I: tuple
    lam: object
    N: Mat
    D: Mat
    Yt: Mat
    Xt: Mat
    Dt: Mat = None
    Nt: Mat = None
    Y0: Mat = None
    X0: Mat = None
    K: Mat = field(default=None, repr=False)

    @property
    def n(self):
        return self.N.rows

    @property
    def m(self):
        return self.N.cols

    @property
    def ring(self):
        return self.N.ring

    def has_left(self):
        return self.Dt is not None

    def left_block(self):
        return block([[self.Xt, self.Yt], [self.Nt, -self.Dt]])

    def right_block(self):
        return block([[self.D, self.Y0], [self.N, -self.X0]])

    def check(self, P=None):
        ring, n, m = self.ring, self.n, self.m
        if self.Yt @ self.N + self.Xt @ self.D != identity(ring, m):
            raise CertificateError("Yt N + Xt D != E")
        for M in (self.N, self.D, self.Yt, self.Xt):
            if any(in_A_lambda(x, self.lam) is None for x in M.entries()):
                raise CertificateError("right factorization leaves A_lam")
        if P is not None and P.matrix @ self.D != self.N:
            raise CertificateError("P != N D^-1")
        if self.has_left():
            if self.Nt @ self.Y0 + self.Dt @ self.X0 != identity(ring, n):
                raise CertificateError("Nt Y0 + Dt X0 != E")
            if self.left_block() @ self.right_block() != identity(ring, n + m):
                raise CertificateError("doubly coprime normalization fails")
            if P is not None and self.Dt @ P.matrix != self.Nt:
                raise CertificateError("P != Dt^-1 Nt")
        return True

    def normalization_holds(self):
        n, m = self.n, self.m
        return self.left_block() @ self.right_block() == identity(self.ring, n + m)

    def shifted(self, R):
        """Shift by ``R`` (``m x n``): ``Yt + R Dt``, ``Xt - R Nt``, ``Y0 + D R``, ``X0 - N R``."""
        if not self.has_left():
            raise ValueError("shift needs the left factorization")
        return LocalFactorization(
            self.I,
            self.lam,
            self.N,
            self.D,
            self.Yt + R @ self.Dt,
            self.Xt - R @ self.Nt,
            self.Dt,
            self.Nt,
            self.Y0 + self.D @ R,
            self.X0 - self.N @ R,
            self.K,
        )


def local_rcf(P, I, lam, K):
    """Right factorization over ``A_lam`` from a witness ``lam T = K Delta_I T``."""
    ring = P.ring
    n, m = P.shape
    if not lam:
        raise ValueError("lam must be nonzero")
    delta = delta_matrix(I, m, n, ring)
    if P.T * lam != K @ (delta @ P.T):
        raise CertificateError("K is not a witness for lam")
    if delta @ K != identity(ring, m) * lam:
        raise CertificateError("Delta_I K != lam E")
    Kt, Kb = K.submatrix(range(n), range(m)), K.submatrix(range(n, n + m), range(m))
    if not det(Kb):
        raise DegenerateWitness("bottom block of K is singular")
    N = _loc(Kt, lam, 1)
    D = _loc(Kb, lam, 1)
    Yt = delta.submatrix(range(m), range(n))
    Xt = delta.submatrix(range(m), range(n, n + m))
    fact = LocalFactorization(tuple(I), lam, N, D, Yt, Xt, K=K)
    fact.check(P)
    return fact


def local_lcf(P, fact, Pt=None):
    """Complete ``fact`` with a normalized left factorization over ``A_lam``."""
    ring = P.ring
    n, m = P.shape
    lam = fact.lam
    Pt = Pt if Pt is not None else P.transpose()
    J = tau(fact.I, m, n)
    g = gef_ideal(Pt, J)
    found = radical_membership(lam, g.generators) if g.generators else None
    if found is None:
        raise RadicalMismatch(f"lam_I = {lam} is not in the radical of the transposed factor for J = {J}")
    k, cert = found
    Kp = zeros(ring, n + m, n)
    for c, W in zip(cert.cofactors, g.witnesses):
        if c:
            Kp = Kp + W * c
    lam_k = lam**k
    delta = delta_matrix(J, n, m, ring)
    if Pt.T * lam_k != Kp @ (delta @ Pt.T):
        raise CertificateError("combined transposed witness fails")
    Np = _loc(Kp.submatrix(range(m), range(n)), lam, k)  # m x n
    Dp = _loc(Kp.submatrix(range(m, m + n), range(n)), lam, k)  # n x n
    Ytp = delta.submatrix(range(n), range(m))
    Xtp = delta.submatrix(range(n), range(m, m + n))
    Dt, Nt = Dp.T(), Np.T()
    Yp, Xp = Ytp.T(), Xtp.T()
    V = fact.Yt @ Xp - fact.Xt @ Yp
    Y0 = Yp + fact.D @ V
    X0 = Xp - fact.N @ V
    out = LocalFactorization(fact.I, lam, fact.N, fact.D, fact.Yt, fact.Xt, Dt, Nt, Y0, X0, fact.K)
    out.check(P)
    return out


def local_factorization(P, I, lam, K, Pt=None):
    return local_lcf(P, local_rcf(P, I, lam, K), Pt)


def _power(x):
    return x.power if isinstance(x, LocalizedElement) else 0


def choose_omega(facts):
    """Least ``w >= 1`` with ``lam^w`` clearing ``D Xt``, ``D Yt``, ``N Yt``, ``N Xt``."""
    if not facts:
        raise ValueError("need at least one factorization")
    w = 0
    for f in facts:
        for M in (f.D @ f.Xt, f.D @ f.Yt, f.N @ f.Yt, f.N @ f.Xt):
            for x in M.entries():
                w = max(w, _power(x))
    return max(w, 1)


def _weighted_sum(facts, coeffs, omega, pick):
    """``sum a_I lam_I^w M_I`` as a polynomial matrix (raises MembershipFailure)."""
    total = None
    for f, a in zip(facts, coeffs):
        # pieces live in different localizations, so add as plain fractions
        M = (pick(f) * (a * f.lam**omega)).to_fractions()
        total = M if total is None else total + M
    out = total.to_poly()
    if out is None:
        raise MembershipFailure("weighted sum has entries outside A")
    return out


def _in_Z(p):
    if p.ring.variables_causality:
        return not p.constant_term()
    from .fracring import in_causality_ideal

    return in_causality_ideal(p)


def glued_controller(facts, coeffs, omega):
    """``C = (sum a lam^w D Xt)^-1 (sum a lam^w D Yt)``."""
    X = _weighted_sum(facts, coeffs, omega, lambda f: f.D @ f.Xt)
    Y = _weighted_sum(facts, coeffs, omega, lambda f: f.D @ f.Yt)
    d = det(X)
    if not d or _in_Z(d):
        raise ZSingularDenominator(f"det of the controller denominator is {d}")
    return _tidy_mat(inverse(X) @ Y)


def glued_closed_loop(facts, coeffs, omega, P=None, C=None):
    """The closed loop assembled from the local data; compared with ``H(P, C)`` when given."""
    ring = facts[0].ring
    n, m = facts[0].n, facts[0].m
    NY = _weighted_sum(facts, coeffs, omega, lambda f: f.N @ f.Yt)
    NX = _weighted_sum(facts, coeffs, omega, lambda f: f.N @ f.Xt)
    DY = _weighted_sum(facts, coeffs, omega, lambda f: f.D @ f.Yt)
    DX = _weighted_sum(facts, coeffs, omega, lambda f: f.D @ f.Xt)
    H = ClosedLoop(block([[identity(ring, n) - NY, -NX], [DY, DX]]), n, m)
    if P is not None and C is not None:
        ref = compute_H(P, C)
        if ref != H:
            raise MembershipFailure("assembled closed loop differs from H(P, C)")
    return H


def _identity_like(ring, m, n, sign=-1):
    return Mat(ring, [[ring.const(sign) if i == j else ring.zero() for j in range(n)] for i in range(m)])


def _random_shift(ring, m, n, rng):
    """Degree <= 1 matrix with coefficients in {-1, 0, 1}."""
    monos = [ring.one()] + list(ring.gens())
    rows = []
    for _ in range(m):
        row = []
        for _ in range(n):
            p = ring.zero()
            for mono in monos:
                c = rng.choice((-1, 0, 1))
                if c:
                    p = p + mono * c
            row.append(p)
        rows.append(row)
    return Mat(ring, rows)


def _shift_candidates(ring, m, n, count, seed, max_retries):
    """Shift lists (one ``R_I`` per piece): none, ``-E``-like, then random."""
    yield None
    yield [_identity_like(ring, m, n)] * count
    rng = random.Random(seed)
    for _ in range(max_retries - 1):
        yield [_random_shift(ring, m, n, rng) for _ in range(count)]


@dataclass
class SynthesisResult:
    plant: object
    controller: Mat
    closed_loop: ClosedLoop
    certificate: object
    factorizations: list
    coefficients: list
    omega: int
    shifts: list
    attempts: int
    report: dict

    @property
    def lambdas(self):
        return [f.lam for f in self.factorizations]

    @property
    def index_sets(self):
        return [f.I for f in self.factorizations]


def synthesize(P, max_retries=MAX_FALLBACK_RETRIES, seed=0):
    """Stabilizing controller for ``P`` with a verification report.

    Raises :class:`Unstabilizable` or :class:`FallbackExhausted`.
    """
    ring = P.ring
    n, m = P.shape
    gefs = all_gef_ideals(P)
    cert = is_stabilizable(P, gefs=gefs)
    if cert is None:
        raise Unstabilizable("the generalized elementary factors do not generate A")
    Pt = P.transpose()
    base = [local_factorization(P, I, lam, K, Pt) for I, lam, K, _ in cert.entries]
    attempts = 0
    for shifts in _shift_candidates(ring, m, n, len(base), seed, max_retries):
        attempts += 1
        facts = base if shifts is None else [f.shifted(R) for f, R in zip(base, shifts)]
        omega = choose_omega(facts)
        coeffs = power_combination([f.lam for f in facts], omega)
        try:
            C = glued_controller(facts, coeffs, omega)
        except ZSingularDenominator:
            continue
        H = glued_closed_loop(facts, coeffs, omega, P, C)
        break
    else:
        raise FallbackExhausted(f"no admissible shift after {max_retries} retries")
    report = verify_controller(P, C, H)
    if report["plant_strictly_causal"] and not report["controller_causal"]:
        raise CausalityViolation("strictly causal plant with a non-causal controller")
    report.update(
        {
            "assembled_H_matches": True,
            "normalization_identity": all(f.normalization_holds() for f in facts),
            "sum_a_lambda_omega_is_one": _sum_is_one(facts, coeffs, omega),
            "fallback_shifts": attempts - 1,
        }
    )
    return SynthesisResult(P, C, H, cert, facts, coeffs, omega, shifts, attempts, report)


def _sum_is_one(facts, coeffs, omega):
    total = facts[0].ring.zero()
    for f, a in zip(facts, coeffs):
        total = total + a * f.lam**omega
    return total == 1


def controller_causality(C):
    worst = Causality.STRICTLY_CAUSAL
    for x in C.entries():
        c = causality(x)
        if c is Causality.NOT_CAUSAL:
            return c
        if c is Causality.CAUSAL:
            worst = c
    return worst


def verify_controller(P, C, H=None):
    """Exact checks for a candidate controller; returns a dict of verdicts."""
    try:
        H = H if H is not None else compute_H(P, C)
        loop_ok = True
    except SingularLoop:
        H, loop_ok = None, False
    stab = loop_ok and H.is_over_A()
    ccaus = controller_causality(C)
    return {
        "loop_nonsingular": loop_ok,
        "H_over_A": bool(stab),
        "stabilizing": bool(stab),
        "plant_strictly_causal": P.is_strictly_causal(),
        "controller_causality": ccaus.value,
        "controller_causal": ccaus.is_causal,
    }
