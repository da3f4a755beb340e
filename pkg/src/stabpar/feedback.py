"""Plants, the closed-loop matrix H(P, C), stabilization tests, extraction."""
from __future__ import annotations

from .fracring import Causality, causality, in_A, in_A_lambda, lowest_terms
from .linalg import Mat, Singular, _frac, block, det, identity, inverse, zeros
from .polyring import Poly

__all__ = [
    "Plant",
    "ClosedLoop",
    "SingularLoop",
    "SingularH",
    "InconsistentFraction",
    "compute_H",
    "is_stabilizing",
    "extract_controller",
    "tidy",
]


class SingularLoop(ArithmeticError):
    """``det(E_n + P C)`` vanishes."""


class SingularH(ArithmeticError):
    """The closed-loop matrix is singular, so no controller can be read off."""


class InconsistentFraction(ValueError):
    """Declared ``N``, ``D`` do not reproduce the plant matrix."""


def tidy(x):
    """Replace a fraction that lies in ``A`` by the polynomial it equals."""
    if isinstance(x, Poly):
        return x
    p = in_A(x)
    return p if p is not None else lowest_terms(x)


def _tidy_mat(M):
    return M.map(tidy)


def _default_fraction(P):
    """Right fraction ``P = N D^-1`` with ``D`` diagonal (column denominators)."""
    ring = P.ring
    n, m = P.shape
    N = [[None] * m for _ in range(n)]
    D = zeros(ring, m, m).tolist()
    for j in range(m):
        col = [_frac(P[i, j]) for i in range(n)]
        lcm = {}
        for f in col:
            for a, e in f.factors.items():
                lcm[a] = max(lcm.get(a, 0), e)
        d = ring.one()
        for a, e in lcm.items():
            d = d * a**e
        D[j][j] = d
        for i, f in enumerate(col):
            N[i][j] = (f * d).num if f else ring.zero()
    return Mat(ring, N), Mat(ring, D)


class Plant:
    """``n x m`` transfer matrix with a right fraction ``P = N D^-1`` over ``A``.

    Without an explicit fraction the diagonal one obtained by clearing each
    column's denominators is used (``declared`` is then False).
    """

    def __init__(self, matrix, N=None, D=None):
        if not isinstance(matrix, Mat):
            raise TypeError("plant matrix must be a Mat")
        self.matrix = _tidy_mat(matrix)
        self.ring = matrix.ring
        self.n_outputs, self.m_inputs = matrix.shape
        if (N is None) != (D is None):
            raise ValueError("declare both N and D or neither")
        if N is None:
            N, D = _default_fraction(self.matrix)
            self.declared = False
        else:
            self.declared = True
            if N.shape != matrix.shape or D.shape != (self.m_inputs, self.m_inputs):
                raise ValueError("declared fraction has the wrong shape")
            if not N.is_polynomial() or not D.is_polynomial():
                raise ValueError("declared N and D must be polynomial")
            N, D = N.to_poly(), D.to_poly()
            if not det(D):
                raise InconsistentFraction("declared D is singular")
            if N != self.matrix @ D:
                raise InconsistentFraction("declared N D^-1 differs from the plant")
        self.N, self.D = N, D

    @classmethod
    def from_fraction(cls, N, D):
        return cls(_tidy_mat(N @ inverse(D)), N, D)

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def n(self):
        return self.n_outputs

    @property
    def m(self):
        return self.m_inputs

    @property
    def T(self):
        """The stacked matrix ``[N; D]`` of size ``(n+m) x m``."""
        return block([[self.N], [self.D]])

    def transpose(self):
        """``P^t`` with its default column-cleared fraction."""
        return Plant(self.matrix.T())

    def is_strictly_causal(self):
        return all(causality(x) is Causality.STRICTLY_CAUSAL for x in self.matrix.entries())

    def is_causal(self):
        return all(causality(x).is_causal for x in self.matrix.entries())

    def __repr__(self):
        return f"Plant({self.matrix})"


class ClosedLoop:
    """The ``(n+m) x (n+m)`` matrix ``H(P, C)`` with its block sizes."""

    def __init__(self, H, n, m):
        if H.shape != (n + m, n + m):
            raise ValueError(f"H has shape {H.shape}, expected {(n + m, n + m)}")
        self.H, self.n, self.m = H, n, m

    @property
    def H11(self):
        return self.H.blocks(self.n, self.n)[0][0]

    @property
    def H12(self):
        return self.H.blocks(self.n, self.n)[0][1]

    @property
    def H21(self):
        return self.H.blocks(self.n, self.n)[1][0]

    @property
    def H22(self):
        return self.H.blocks(self.n, self.n)[1][1]

    def is_over_A(self):
        return self.H.is_polynomial()

    def is_over_A_lambda(self, lam):
        return all(in_A_lambda(x, lam) is not None for x in self.H.entries())

    def __eq__(self, other):
        if not isinstance(other, ClosedLoop):
            return NotImplemented
        return (self.n, self.m) == (other.n, other.m) and self.H == other.H

    __hash__ = None

    def __repr__(self):
        return f"ClosedLoop({self.H})"


def _loop_matrix(P, C):
    n, m = P.shape
    ring = P.ring
    return block([[identity(ring, n), P.matrix], [-C, identity(ring, m)]])


def compute_H(P, C):
    """``H(P, C)``; raises :class:`SingularLoop` when ``E + P C`` is singular."""
    if C.shape != (P.m, P.n):
        raise ValueError(f"controller shape {C.shape} does not match plant {P.shape}")
    ring = P.ring
    n, m = P.shape
    EPC = identity(ring, n) + P.matrix @ C
    ECP = identity(ring, m) + C @ P.matrix
    try:
        S = inverse(EPC)
        T = inverse(ECP)
    except Singular:
        raise SingularLoop("det(E + P C) = 0") from None
    H11 = S
    H12 = -(P.matrix @ T)
    H21 = C @ S
    H22 = T
    H = _tidy_mat(block([[H11, H12], [H21, H22]]))
    if H @ _loop_matrix(P, C) != identity(ring, n + m):
        raise AssertionError("H(P, C) is not the inverse of [[E, P], [-C, E]]")
    return ClosedLoop(H, n, m)


def is_stabilizing(P, C, lam=None):
    """``H(P, C)`` exists and lies over ``A`` (or over ``A_lam``)."""
    try:
        H = compute_H(P, C)
    except SingularLoop:
        return False
    if lam is None:
        return H.is_over_A()
    return H.is_over_A_lambda(lam)


def extract_controller(H):
    """Controller with ``H(P, C) = H``: ``C = -[O E_m] H^-1 [E_n; O]``.

    When ``H22`` (resp. ``H11``) is invertible the alternative forms
    ``H22^-1 H21`` and ``H21 H11^-1`` are evaluated and must agree.
    """
    n, m = H.n, H.m
    try:
        Hi = inverse(H.H)
    except Singular:
        raise SingularH("closed-loop matrix is singular") from None
    C = _tidy_mat(-Hi.submatrix(range(n, n + m), range(n)))
    if det(H.H22):
        alt = inverse(H.H22) @ H.H21
        if alt != C:
            raise AssertionError("H22^-1 H21 disagrees with the full-inverse formula")
    if det(H.H11):
        alt = H.H21 @ inverse(H.H11)
        if alt != C:
            raise AssertionError("H21 H11^-1 disagrees with the full-inverse formula")
    return C
