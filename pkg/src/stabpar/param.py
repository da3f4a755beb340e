"""Parameterizations of all stabilizing controllers.

Two families are available. The Youla form ``(Xt0 - R Nt)^-1 (Yt0 + R Dt)``
needs a doubly coprime factorization over the working ring. The map

    Omega(Q) = (H0 - diag(E_n, O)) Q (H0 - diag(O, E_m)) + H0

only needs one stabilizing closed loop ``H0`` and always works over ``A``;
its nonsingular values are exactly the achievable closed loops.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .feedback import ClosedLoop, SingularH, _tidy_mat, compute_H, extract_controller
from .fracring import in_A_lambda
from .groebner import power_combination
from .linalg import Mat, NotLocal, Singular, block, identity, inverse, is_unimodular, zeros
from .synthesis import synthesize, verify_controller

__all__ = [
    "OmegaContext",
    "LocalContext",
    "NoFactorization",
    "SingularYoulaDenominator",
    "SingularOmega",
    "DenominatorNotCleared",
    "youla_controller",
    "youla_controller_dual",
    "h_hat",
    "omega",
    "r_from_q",
    "q_from_r",
    "glue_q",
    "q_for_controller",
    "controllers_from_q",
    "sample_parameterization",
    "random_poly",
    "random_matrix",
]


class NoFactorization(LookupError):
    """The context carries no doubly coprime data over the requested ring."""


class SingularYoulaDenominator(ArithmeticError):
    pass


class SingularOmega(ArithmeticError):
    pass


class DenominatorNotCleared(ArithmeticError):
    pass


@dataclass
class LocalContext:
    """Doubly coprime data over ``A_lam`` normalized to the reference controller.

    ``Xt0``, ``Yt0`` satisfy ``C0 = Xt0^-1 Yt0``; ``X0``, ``Y0`` satisfy
    ``C0 = Y0 X0^-1``; ``lam = 1`` means the data live over ``A``.
    """

    lam: object
    N: Mat
    D: Mat
    Nt: Mat
    Dt: Mat
    X0: Mat
    Y0: Mat
    Xt0: Mat
    Yt0: Mat
    I: tuple = None
    a: object = None

    @property
    def n(self):
        return self.N.rows

    @property
    def m(self):
        return self.N.cols

    @property
    def ring(self):
        return self.N.ring

    @property
    def is_global(self):
        return self.lam.is_constant()

    def M1(self):
        return block([[self.X0, self.N], [-self.Y0, self.D]])

    def M2(self):
        return block([[-self.Yt0, self.Xt0], [self.Dt, self.Nt]])

    def normalization_holds(self):
        L = block([[self.Xt0, self.Yt0], [self.Nt, -self.Dt]])
        Rb = block([[self.D, self.Y0], [self.N, -self.X0]])
        return L @ Rb == identity(self.ring, self.n + self.m)

    def unimodular(self):
        lam = None if self.is_global else self.lam
        M1, M2 = self.M1(), self.M2()
        if lam is None:
            M1, M2 = M1.to_poly(), M2.to_poly()
            if M1 is None or M2 is None:
                return False
        return is_unimodular(M1, lam) and is_unimodular(M2, lam)

    def localize(self, M):
        """Entries of ``M`` over ``A_lam`` (polynomials when global)."""
        if self.is_global:
            P = M.to_poly()
            if P is None:
                raise NotLocal("matrix is not over A")
            return P
        out = []
        for r in M.tolist():
            row = []
            for x in r:
                y = in_A_lambda(x, self.lam)
                if y is None:
                    raise NotLocal(f"{x} is not in A_({self.lam})")
                row.append(y.num if not y.power else y)
            out.append(row)
        return Mat(M.ring, out)


class OmegaContext:
    """Reference closed loop ``H0 = H(P, C0)`` plus factorization pieces.

    ``pieces`` holds one :class:`LocalContext` per index set; when the only
    piece is global it is also exposed as ``global_``.
    """

    def __init__(self, P, C0, H0=None, pieces=(), omega=1):
        self.P = P
        self.C0 = C0
        self.H0 = H0 if H0 is not None else compute_H(P, C0)
        if not self.H0.is_over_A():
            raise ValueError("reference controller is not stabilizing")
        self.pieces = list(pieces)
        self.omega = omega
        glob = [p for p in self.pieces if p.is_global]
        self.global_ = glob[0] if glob else None

    @property
    def n(self):
        return self.P.n

    @property
    def m(self):
        return self.P.m

    @property
    def ring(self):
        return self.P.ring

    @classmethod
    def from_synthesis(cls, result):
        H0 = result.closed_loop
        pieces = []
        for f, a in zip(result.factorizations, result.coefficients):
            pieces.append(_local_context(f, H0, a))
        return cls(result.plant, result.controller, H0, pieces, result.omega)

    @classmethod
    def from_coprime(cls, P, N, D, Nt, Dt, Xt0, Yt0, X0, Y0, lam=None):
        """Context from a user-supplied doubly coprime factorization."""
        ring = P.ring
        lam = ring.one() if lam is None else lam
        loc = LocalContext(lam, N, D, Nt, Dt, X0, Y0, Xt0, Yt0, None, ring.one())
        if not loc.normalization_holds():
            raise ValueError("data are not doubly coprime")
        C0 = _tidy_mat(inverse(Xt0) @ Yt0)
        return cls(P, C0, None, [loc], 1)

    def piece(self, index=None):
        if index is None:
            if self.global_ is None:
                raise NoFactorization("no factorization over A; pass a piece index")
            return self.global_
        return self.pieces[index]


def _local_context(f, H0, a):
    ring = H0.H.ring
    n, m = H0.n, H0.m
    H11, H12, H21, H22 = H0.H11, H0.H12, H0.H21, H0.H22
    E_n = identity(ring, n)
    # D^-1 = Yt P + Xt and Dt^-1 = P Y0 + X0, with P H22 = -H12, P H21 = E - H11,
    # H11 P = -H12 and H21 P = E - H22
    Xt0 = f.Xt @ H22 - f.Yt @ H12
    Yt0 = f.Yt @ (E_n - H11) + f.Xt @ H21
    X0 = H11 @ f.X0 - H12 @ f.Y0
    Y0 = H21 @ f.X0 + (identity(ring, m) - H22) @ f.Y0
    lam = f.lam
    if lam.is_constant():
        conv = _globalize
    else:
        conv = lambda M: _simplify_local(M, lam)  # noqa: E731
    loc = LocalContext(
        lam, conv(f.N), conv(f.D), conv(f.Nt), conv(f.Dt), conv(X0), conv(Y0), conv(Xt0), conv(Yt0), f.I, a
    )
    if not loc.normalization_holds():
        raise AssertionError("renormalized factorization is not doubly coprime")
    return loc


def _globalize(M):
    P = M.to_poly()
    if P is None:
        raise AssertionError("global factorization has entries outside A")
    return P


def _simplify_local(M, lam):
    def conv(x):
        y = in_A_lambda(x, lam)
        if y is None:
            raise AssertionError(f"{x} left A_({lam})")
        return y.num if not y.power else y

    return M.map(conv)


# -- Youla family ------------------------------------------------------------
def _check_R(ctx, R):
    if R.shape != (ctx.m, ctx.n):
        raise ValueError(f"R must be {ctx.m} x {ctx.n}, got {R.shape}")


def youla_controller(ctx, R, index=None):
    """``(Xt0 - R Nt)^-1 (Yt0 + R Dt)``."""
    loc = ctx.piece(index)
    _check_R(ctx, R)
    X = loc.Xt0 - R @ loc.Nt
    try:
        Xi = inverse(X)
    except Singular:
        raise SingularYoulaDenominator("Xt0 - R Nt is singular") from None
    return _tidy_mat(Xi @ (loc.Yt0 + R @ loc.Dt))


def youla_controller_dual(ctx, S, index=None):
    """``(Y0 + D S)(X0 - N S)^-1``."""
    loc = ctx.piece(index)
    _check_R(ctx, S)
    X = loc.X0 - loc.N @ S
    try:
        Xi = inverse(X)
    except Singular:
        raise SingularYoulaDenominator("X0 - N S is singular") from None
    return _tidy_mat((loc.Y0 + loc.D @ S) @ Xi)


def h_hat(ctx, R, index=None):
    """Closed loop of the Youla parameter ``R``, defined even when singular."""
    loc = ctx.piece(index)
    _check_R(ctx, R)
    Y = loc.Yt0 + R @ loc.Dt
    X = loc.Xt0 - R @ loc.Nt
    E = identity(ctx.ring, ctx.n)
    return _tidy_mat(block([[E - loc.N @ Y, -(loc.N @ X)], [loc.D @ Y, loc.D @ X]]))


# -- Omega family ------------------------------------------------------------
def _corners(ctx):
    ring, n, m = ctx.ring, ctx.n, ctx.m
    top = block([[identity(ring, n), zeros(ring, n, m)], [zeros(ring, m, n), zeros(ring, m, m)]])
    bot = block([[zeros(ring, n, n), zeros(ring, n, m)], [zeros(ring, m, n), identity(ring, m)]])
    return ctx.H0.H - top, ctx.H0.H - bot


def omega(ctx, Q):
    """``(H0 - diag(E, O)) Q (H0 - diag(O, E)) + H0``."""
    k = ctx.n + ctx.m
    if Q.shape != (k, k):
        raise ValueError(f"Q must be {k} x {k}, got {Q.shape}")
    L, Rt = _corners(ctx)
    return _tidy_mat(L @ Q @ Rt + ctx.H0.H)


def r_from_q(ctx, Q, index=None):
    """Youla parameter with ``h_hat(R) == omega(Q)``: a block of ``M1^-1 Q M2^-1``."""
    loc = ctx.piece(index)
    n, m = ctx.n, ctx.m
    M1i = loc.localize(inverse(loc.M1()))
    M2i = loc.localize(inverse(loc.M2()))
    Qp = M1i @ Q @ M2i
    return _tidy_mat(Qp.submatrix(range(n, n + m), range(m, m + n)))


def q_from_r(ctx, R, index=None):
    """``Q = M1 [[O, O], [O, R]] M2`` so that ``omega(Q) == h_hat(R)``."""
    loc = ctx.piece(index)
    _check_R(ctx, R)
    ring, n, m = ctx.ring, ctx.n, ctx.m
    mid = block([[zeros(ring, n, m), zeros(ring, n, n)], [zeros(ring, m, m), R]])
    return _tidy_mat(loc.M1() @ mid @ loc.M2())


def _clearing_power(M, lam):
    w = 0
    for x in M.entries():
        y = in_A_lambda(x, lam)
        if y is None:
            raise DenominatorNotCleared(f"{x} is not in A_({lam})")
        w = max(w, y.power)
    return w


def glue_q(pieces, Qs, coeffs=None, w=None):
    """``Q = sum a_I lam_I^w Q_I`` over ``A``.

    ``w`` defaults to the least power clearing every ``Q_I``; the ``a_I``
    are recomputed for that power unless supplied.
    """
    lams = [p.lam for p in pieces]
    if w is None:
        w = max([1] + [_clearing_power(Q, lam) for Q, lam in zip(Qs, lams)])
        coeffs = None
    if coeffs is None:
        coeffs = power_combination(lams, w)
        if coeffs is None:
            raise DenominatorNotCleared("the lambdas do not generate A")
    total = None
    for Q, lam, a in zip(Qs, lams, coeffs):
        term = (Q * (a * lam**w)).to_fractions()
        total = term if total is None else total + term
    out = total.to_poly()
    if out is None:
        raise DenominatorNotCleared("glued Q has entries outside A")
    return out


def q_for_controller(ctx, C):
    """A ``Q`` over ``A`` with ``omega(Q) == H(P, C)`` for a stabilizing ``C``."""
    H = compute_H(ctx.P, C)
    if not H.is_over_A():
        raise ValueError("controller is not stabilizing")
    Qs = []
    for i, loc in enumerate(ctx.pieces):
        R = loc.localize(inverse(loc.D) @ H.H21 - loc.Yt0) @ inverse(loc.Dt)
        R = loc.localize(R)
        Qs.append(q_from_r(ctx, R, i))
    Q = glue_q(ctx.pieces, Qs)
    if omega(ctx, Q) != H.H:
        raise AssertionError("glued Q does not reproduce H(P, C)")
    return Q


def controllers_from_q(ctx, Q, check=True):
    """Controller whose closed loop is ``omega(Q)``; raises :class:`SingularOmega`."""
    W = omega(ctx, Q)
    try:
        C = extract_controller(ClosedLoop(W, ctx.n, ctx.m))
    except SingularH:
        raise SingularOmega("Omega(Q) is singular") from None
    if check:
        H = compute_H(ctx.P, C)
        if H.H != W:
            raise AssertionError("H(P, C) != Omega(Q)")
        if not H.is_over_A():
            raise AssertionError("extracted controller is not stabilizing")
    return C


# -- sampling ----------------------------------------------------------------
def random_poly(ring, rng, degree, coeffs=(-2, -1, 0, 1, 2), density=0.5):
    """Random polynomial of total degree ``<= degree`` with small coefficients."""
    from itertools import product

    out = ring.zero()
    gens = ring.gens()
    for exps in product(range(degree + 1), repeat=ring.nvars):
        if sum(exps) > degree:
            continue
        if rng.random() > density:
            continue
        c = rng.choice(coeffs)
        if not c:
            continue
        mono = ring.one()
        for g, e in zip(gens, exps):
            if e:
                mono = mono * g**e
        out = out + mono * c
    return out


def random_matrix(ring, rows, cols, rng, degree, **kw):
    return Mat(ring, [[random_poly(ring, rng, degree, **kw) for _ in range(cols)] for _ in range(rows)])


@dataclass
class Sample:
    index: int
    seed: str
    Q: Mat
    controller: Mat
    closed_loop: ClosedLoop
    checks: dict = field(default_factory=dict)
    duplicate_of: int = None


@dataclass
class SampleReport:
    samples: list
    skipped: list
    context: OmegaContext = field(repr=False, default=None)

    def __iter__(self):
        return iter((s.Q, s.controller, s.closed_loop) for s in self.samples)

    def __len__(self):
        return len(self.samples)


def sample_parameterization(P, count, seed=0, degree=1, ctx=None, max_attempts=None):
    """Deterministic samples ``(Q, C, H)`` with ``H(P, C) == Omega(Q)``.

    Candidate ``i`` draws from ``random.Random(f"{seed}:{i}")``; candidates
    with singular ``Omega(Q)`` are skipped and listed in the report.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    if ctx is None:
        ctx = OmegaContext.from_synthesis(synthesize(P))
    k = ctx.n + ctx.m
    samples, skipped = [], []
    max_attempts = max_attempts if max_attempts is not None else 10 * count + 10
    i = 0
    while len(samples) < count and i < max_attempts:
        tag = f"{seed}:{i}"
        rng = random.Random(tag)
        Q = random_matrix(ctx.ring, k, k, rng, degree)
        i += 1
        try:
            C = controllers_from_q(ctx, Q, check=False)
        except SingularOmega:
            skipped.append({"candidate": i - 1, "seed": tag, "reason": "singular Omega(Q)"})
            continue
        H = compute_H(ctx.P, C)
        checks = verify_controller(P, C, H)
        checks["H_equals_omega_Q"] = H.H == omega(ctx, Q)
        dup = next((s.index for s in samples if s.controller == C), None)
        samples.append(Sample(i - 1, tag, Q, C, H, checks, dup))
    return SampleReport(samples, skipped, ctx)
