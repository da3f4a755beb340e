"""Generalized elementary factors, the stabilizability test and the map tau.

For an ``n x m`` plant with right fraction ``T = [N; D]`` and an index set
``I`` of ``m`` rows, the factor ``Lambda_PI`` is the ideal of ``lam`` for
which ``lam * T = K * Delta_I * T`` has a polynomial solution ``K``.
Indices in :class:`IndexSet` are 1-based to match the usual notation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .groebner import CertificateError, ideal_membership, module_syzygies, power_combination, radical_membership
from .linalg import Mat, identity, zeros

__all__ = [
    "IndexSet",
    "GefCertificate",
    "StabilizabilityCertificate",
    "RadicalMismatch",
    "enumerate_index_sets",
    "delta_matrix",
    "gef_ideal",
    "all_gef_ideals",
    "is_stabilizable",
    "tau",
    "check_radical_equality",
]


class RadicalMismatch(AssertionError):
    """The two radicals related by ``tau`` differ (a fatal diagnostic)."""


class IndexSet(tuple):
    """Strictly ascending tuple of distinct 1-based row indices."""

    def __new__(cls, members, bound=None):
        members = tuple(int(i) for i in members)
        if any(a >= b for a, b in zip(members, members[1:])):
            raise ValueError(f"index set {members} is not strictly ascending")
        if members and members[0] < 1:
            raise ValueError("indices are 1-based")
        if bound is not None and members and members[-1] > bound:
            raise ValueError(f"index {members[-1]} exceeds {bound}")
        return super().__new__(cls, members)

    def __repr__(self):
        return "{" + ", ".join(map(str, self)) + "}"

    __str__ = __repr__


def enumerate_index_sets(m, n):
    """All ``m``-subsets of ``1..m+n`` in lexicographic order."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    return [IndexSet(c) for c in combinations(range(1, m + n + 1), m)]


def delta_matrix(I, m, n, ring):
    """``m x (m+n)`` selector whose ``k``-th row is the unit vector ``e_{i_k}``."""
    if len(I) != m:
        raise ValueError(f"|I| = {len(I)} but m = {m}")
    one, zero = ring.one(), ring.zero()
    return Mat(ring, [[one if j + 1 == i else zero for j in range(m + n)] for i in I])


@dataclass
class GefCertificate:
    I: IndexSet
    generators: list
    witnesses: list
    T: Mat = field(repr=False)

    def check(self):
        m = self.T.cols
        n = self.T.rows - m
        delta = delta_matrix(self.I, m, n, self.T.ring)
        DT = delta @ self.T
        for lam, K in zip(self.generators, self.witnesses):
            if self.T * lam != K @ DT:
                raise CertificateError(f"witness fails for generator {lam} of I = {self.I}")
            if delta @ K != identity(self.T.ring, m) * lam:
                raise CertificateError(f"Delta_I K != lam E for I = {self.I}")
        return True

    def is_zero_ideal(self):
        return not self.generators


@dataclass
class StabilizabilityCertificate:
    """Entries ``(I, lam_I, K_I, a_I)`` with ``sum(a_I * lam_I**omega) == 1``."""

    entries: list
    omega: int
    T: Mat = field(repr=False)

    @property
    def index_sets(self):
        return [e[0] for e in self.entries]

    @property
    def lambdas(self):
        return [e[1] for e in self.entries]

    @property
    def witnesses(self):
        return [e[2] for e in self.entries]

    @property
    def coefficients(self):
        return [e[3] for e in self.entries]

    def with_omega(self, omega):
        a = power_combination(self.lambdas, omega)
        if a is None:  # pragma: no cover - lambdas sum to one
            raise CertificateError("lambdas no longer generate the unit ideal")
        entries = [(I, lam, K, ai) for (I, lam, K, _), ai in zip(self.entries, a)]
        return StabilizabilityCertificate(entries, omega, self.T)

    def check(self):
        ring = self.T.ring
        total = ring.zero()
        for I, lam, K, a in self.entries:
            GefCertificate(I, [lam], [K], self.T).check()
            total = total + a * lam**self.omega
        if total != 1:
            raise CertificateError("sum a_I lam_I^omega != 1")
        return True


def gef_ideal(P, I):
    """Generators of ``Lambda_PI`` with witnesses ``K``.

    Rows of ``K`` indexed by ``I`` are forced (``K[i_k] = lam e_k``); the
    others solve ``lam T[r] = K[r] T_I``. All of them come out of a single
    syzygy computation whose first coordinate is ``lam``.
    """
    ring = P.ring
    n, m = P.shape
    I = IndexSet(I, m + n)
    if len(I) != m:
        raise ValueError(f"|I| = {len(I)} but m = {m}")
    T = P.T
    rows_in = [i - 1 for i in I]
    rows_out = [r for r in range(n + m) if r not in rows_in]
    TI = [[T[i, c] for c in range(m)] for i in rows_in]
    zero = ring.zero()
    npos = len(rows_out) * m
    # unknowns: lam, then K[r][k] for r in rows_out, k in 0..m-1
    columns = [[T[r, c] for r in rows_out for c in range(m)]]
    for a, r in enumerate(rows_out):
        for k in range(m):
            col = [zero] * npos
            for c in range(m):
                col[a * m + c] = -TI[k][c]
            columns.append(col)
    generators, witnesses = [], []
    seen = set()
    for s in module_syzygies(columns):
        lam = s[0]
        if not lam:
            continue
        scale = 1 / (lam.constant_term() or lam.lead_coeff())
        lam = lam * scale
        s = [x * scale for x in s]
        key = lam.monic()
        if key in seen:
            continue
        seen.add(key)
        K = [[zero] * m for _ in range(n + m)]
        for k, i in enumerate(rows_in):
            K[i][k] = lam
        for a, r in enumerate(rows_out):
            for k in range(m):
                K[r][k] = s[1 + a * m + k]
        generators.append(lam)
        witnesses.append(Mat(ring, K))
    cert = GefCertificate(I, generators, witnesses, T)
    cert.check()
    return cert


def all_gef_ideals(P):
    return [gef_ideal(P, I) for I in enumerate_index_sets(P.m, P.n)]


def is_stabilizable(P, omega=1, gefs=None):
    """Certificate that the factors of ``P`` generate ``A``, or ``None``.

    ``None`` is definitive: ``1`` is not in the sum of the ``Lambda_PI``.
    """
    ring = P.ring
    n, m = P.shape
    if gefs is None:
        gefs = all_gef_ideals(P)
    flat = [(g.I, lam, K) for g in gefs for lam, K in zip(g.generators, g.witnesses)]
    if not flat:
        return None
    cert = ideal_membership(ring.one(), [lam for _, lam, _ in flat])
    if cert is None:
        return None
    by_I = {}
    for (I, lam, K), c in zip(flat, cert.cofactors):
        if not c:
            continue
        acc = by_I.setdefault(I, [ring.zero(), zeros(ring, n + m, m)])
        acc[0] = acc[0] + c * lam
        acc[1] = acc[1] + K * c
    entries = [(I, lam, K, ring.one()) for I, (lam, K) in sorted(by_I.items()) if lam]
    out = StabilizabilityCertificate(entries, 1, P.T)
    if omega != 1:
        out = out.with_omega(omega)
    out.check()
    return out


def tau(I, m, n):
    """The bijection from ``m``-subsets to ``n``-subsets of ``1..m+n``."""
    I = IndexSet(I, m + n)
    if len(I) != m:
        raise ValueError(f"|I| = {len(I)} but m = {m}")
    I_N = {i for i in I if i <= n}
    I_d = {i for i in I if i > n}
    J_N = set(range(1, m + 1)) - {i - n for i in I_d}
    J_d = {i + m for i in range(1, n + 1) if i not in I_N}
    return IndexSet(sorted(J_N | J_d))


def _radical_contains(f, gens):
    return radical_membership(f, gens) is not None


def check_radical_equality(P, I, Pt=None):
    """Whether ``rad(Lambda_PI) == rad(Lambda_{P^t tau(I)})``."""
    n, m = P.shape
    Pt = Pt if Pt is not None else P.transpose()
    left = gef_ideal(P, I).generators
    right = gef_ideal(Pt, tau(I, m, n)).generators
    if not left or not right:
        return not left and not right
    return all(_radical_contains(g, right) for g in left) and all(_radical_contains(g, left) for g in right)
