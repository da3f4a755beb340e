"""Dense matrices over polynomials, fractions and localizations."""
from __future__ import annotations

from .fracring import Fraction, LocalizedElement, in_A, in_A_lambda
from .polyring import Poly, PolyRing, RingMismatch

__all__ = [
    "Mat",
    "Singular",
    "NotLocal",
    "det",
    "adjugate",
    "inverse",
    "inverse_local",
    "is_nonsingular",
    "is_unimodular",
    "mat_arith",
    "block",
    "identity",
    "zeros",
]


class Singular(ArithmeticError):
    """Matrix has zero determinant."""


class NotLocal(ArithmeticError):
    """Inverse exists over the fraction field but not over the localization."""


class Mat:
    """Immutable ``rows x cols`` matrix over one polynomial ring.

    Entries may mix :class:`Poly`, :class:`Fraction` and
    :class:`LocalizedElement`; arithmetic promotes as the entries do.
    ``@`` is the matrix product, ``*`` scales by a ring element.
    """

    __slots__ = ("ring", "rows", "cols", "_e")

    def __init__(self, ring, entries, shape=None):
        if not isinstance(ring, PolyRing):
            raise TypeError("Mat needs a PolyRing")
        entries = [list(r) for r in entries]
        if shape is None:
            if not entries:
                raise ValueError("empty matrix needs an explicit shape")
            shape = (len(entries), len(entries[0]))
        rows, cols = shape
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError("ragged matrix entries")
        self.ring = ring
        self.rows, self.cols = rows, cols
        self._e = tuple(tuple(self._conv(x) for x in r) for r in entries)

    def _conv(self, x):
        if isinstance(x, Poly):
            return self.ring.coerce(x)
        if isinstance(x, (Fraction, LocalizedElement)):
            if x.ring != self.ring:
                raise RingMismatch("matrix entry from another ring")
            return x
        return self.ring.const(x)

    @classmethod
    def _wrap(cls, ring, rows, shape):
        m = cls.__new__(cls)
        m.ring = ring
        m.rows, m.cols = shape
        m._e = tuple(tuple(r) for r in rows)
        return m

    # -- access -------------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            if isinstance(i, int) and isinstance(j, int):
                return self._e[i][j]
            ri = range(self.rows)[i] if isinstance(i, slice) else [i]
            rj = range(self.cols)[j] if isinstance(j, slice) else [j]
            return self.submatrix(list(ri), list(rj))
        return self._e[idx]

    def tolist(self):
        return [list(r) for r in self._e]

    def entries(self):
        for r in self._e:
            yield from r

    def submatrix(self, rows, cols):
        rows, cols = list(rows), list(cols)
        return Mat._wrap(self.ring, [[self._e[i][j] for j in cols] for i in rows], (len(rows), len(cols)))

    def row_block(self, rows):
        return self.submatrix(rows, range(self.cols))

    def col_block(self, cols):
        return self.submatrix(range(self.rows), cols)

    def blocks(self, r, c):
        """Split at row ``r`` and column ``c``: ``((A, B), (C, D))``."""
        R, C = range(r), range(c)
        R2, C2 = range(r, self.rows), range(c, self.cols)
        return (
            (self.submatrix(R, C), self.submatrix(R, C2)),
            (self.submatrix(R2, C), self.submatrix(R2, C2)),
        )

    def T(self):
        return Mat._wrap(self.ring, [list(c) for c in zip(*self._e)] if self.rows else [], (self.cols, self.rows))

    transpose = T

    def map(self, fn):
        return Mat._wrap(self.ring, [[fn(x) for x in r] for r in self._e], self.shape)

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Mat):
            raise TypeError("expected a Mat")
        if other.ring != self.ring:
            raise RingMismatch("matrices over different rings")

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return Mat._wrap(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)], self.shape)

    def __sub__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return Mat._wrap(self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)], self.shape)

    def __neg__(self):
        return self.map(lambda x: -x)

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other._e)) if other.rows else [() for _ in range(other.cols)]
        zero = self.ring.zero()
        out = []
        for r in self._e:
            row = []
            for c in cols:
                acc = zero
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Mat._wrap(self.ring, out, (self.rows, other.cols))

    def __mul__(self, s):
        if isinstance(s, Mat):
            return self @ s
        return self.map(lambda x: x * s)

    def __rmul__(self, s):
        return self.map(lambda x: s * x)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self.entries(), other.entries()))

    __hash__ = None

    def is_zero(self):
        return not any(self.entries())

    def is_polynomial(self):
        return all(in_A(x) is not None for x in self.entries())

    def to_poly(self):
        """Same matrix with :class:`Poly` entries; ``None`` if some entry is not in ``A``."""
        out = []
        for r in self._e:
            row = []
            for x in r:
                p = in_A(x)
                if p is None:
                    return None
                row.append(p)
            out.append(row)
        return Mat._wrap(self.ring, out, self.shape)

    def to_fractions(self):
        return self.map(_frac)

    def __str__(self):
        return "[" + "; ".join(", ".join(str(x) for x in r) for r in self._e) + "]"

    def __repr__(self):
        return f"Mat({self})"


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, LocalizedElement):
        return x.to_fraction()
    return Fraction(x)


def identity(ring, n):
    one, zero = ring.one(), ring.zero()
    return Mat._wrap(ring, [[one if i == j else zero for j in range(n)] for i in range(n)], (n, n))


def zeros(ring, r, c):
    zero = ring.zero()
    return Mat._wrap(ring, [[zero] * c for _ in range(r)], (r, c))


def block(grid):
    """Assemble ``[[A, B], [C, D]]`` (any rectangular grid of Mats)."""
    grid = [list(r) for r in grid]
    ring = grid[0][0].ring
    for r in grid:
        h = r[0].rows
        if any(m.rows != h for m in r):
            raise ValueError("block row heights differ")
    widths = [m.cols for m in grid[0]]
    for r in grid:
        if [m.cols for m in r] != widths:
            raise ValueError("block column widths differ")
    rows = []
    for r in grid:
        for i in range(r[0].rows):
            rows.append([x for m in r for x in m._e[i]])
    return Mat._wrap(ring, rows, (sum(r[0].rows for r in grid), sum(widths)))


# -- determinants ------------------------------------------------------------
def _bareiss(rows, ring):
    """Fraction-free determinant of a square list-of-lists of Polys."""
    n = len(rows)
    if n == 0:
        return ring.one()
    M = [list(r) for r in rows]
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        if not M[k][k]:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return ring.zero()
        p = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = M[i][j] * p - M[i][k] * M[k][j]
                M[i][j] = v if k == 0 else v.exact_div(prev)
            M[i][k] = ring.zero()
        prev = p
    d = M[n - 1][n - 1]
    return d if sign > 0 else -d


def _laplace(rows, ring):
    n = len(rows)
    if n == 0:
        return ring.one()
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = ring.zero()
    for j, a in enumerate(rows[0]):
        if not a:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = a * _laplace(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def _poly_det(rows, ring):
    return _laplace(rows, ring) if len(rows) <= 3 else _bareiss(rows, ring)


def _clear_rows(M):
    """``(P, dens)`` with ``M[i] == P[i] / dens[i]`` and ``P`` polynomial."""
    ring = M.ring
    P, dens = [], []
    for r in M._e:
        fr = [_frac(x) for x in r]
        lcm = {}
        for f in fr:
            for a, e in f.factors.items():
                lcm[a] = max(lcm.get(a, 0), e)
        d = ring.one()
        for a, e in lcm.items():
            d = d * a**e
        row = []
        for f in fr:
            if not f.num:
                row.append(ring.zero())
                continue
            mult = ring.one()
            for a, e in lcm.items():
                k = e - f.factors.get(a, 0)
                if k:
                    mult = mult * a**k
            row.append(f.num * mult)
        P.append(row)
        dens.append(d)
    return P, dens


def det(M):
    """Determinant; a :class:`Poly` for polynomial matrices, else a :class:`Fraction`."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    ring = M.ring
    if all(isinstance(x, Poly) for x in M.entries()):
        return _poly_det(M.tolist(), ring)
    P, dens = _clear_rows(M)
    d = _poly_det(P, ring)
    den = ring.one()
    for x in dens:
        den = den * x
    out = Fraction(d, den)
    return out.num if out.is_polynomial() else out


def adjugate(M):
    """Classical adjoint of a polynomial (or fraction) matrix."""
    n = M.rows
    if n != M.cols:
        raise ValueError("adjugate of a non-square matrix")
    ring = M.ring
    if n == 1:
        return identity(ring, 1)
    out = [[None] * n for _ in range(n)]
    idx = list(range(n))
    for i in range(n):
        for j in range(n):
            minor = det(M.submatrix([r for r in idx if r != j], [c for c in idx if c != i]))
            out[i][j] = minor if (i + j) % 2 == 0 else -minor
    return Mat._wrap(ring, out, (n, n))


def inverse(M):
    """Inverse over the fraction field; raises :class:`Singular`."""
    if M.rows != M.cols:
        raise ValueError("inverse of a non-square matrix")
    ring = M.ring
    P, dens = _clear_rows(M)
    Pm = Mat._wrap(ring, P, M.shape)
    d = _poly_det(P, ring)
    if not d:
        raise Singular("matrix is singular")
    adj = adjugate(Pm)
    inv_d = Fraction(ring.one(), d)
    # M = diag(1/dens) P  =>  M^-1 = P^-1 diag(dens)
    out = [[_simplify(adj[i, j] * inv_d * dens[j]) for j in range(M.cols)] for i in range(M.rows)]
    res = Mat._wrap(ring, out, M.shape)
    return res


def _simplify(f):
    if isinstance(f, Fraction) and f.is_polynomial():
        return f.num
    return f


def inverse_local(M, lam):
    """Inverse with entries in ``A_lam``; raises :class:`Singular` or :class:`NotLocal`."""
    inv = inverse(M)
    out = []
    for r in inv._e:
        row = []
        for x in r:
            y = in_A_lambda(x, lam)
            if y is None:
                raise NotLocal(f"entry {x} of the inverse is not in A_({lam})")
            row.append(y)
        out.append(row)
    return Mat._wrap(M.ring, out, M.shape)


def is_nonsingular(M):
    return M.rows == M.cols and bool(det(M))


def is_unimodular(M, lam=None):
    """Invertible with inverse over ``A`` (``lam=None``) or over ``A_lam``."""
    if M.rows != M.cols:
        return False
    ring = M.ring
    if lam is None:
        if not M.is_polynomial():
            return False
        d = det(M.to_poly())
        return bool(d) and d.is_constant()
    entries = [in_A_lambda(x, lam) for x in M.entries()]
    if any(e is None for e in entries):
        return False
    d = det(M)
    if not d:
        return False
    inv = in_A_lambda(Fraction(ring.one()) / d, lam)
    return inv is not None


def mat_arith(op, X, Y=None):
    """``op`` in ``{"add", "sub", "mul", "inv", "det"}``."""
    if op == "add":
        return X + Y
    if op == "sub":
        return X - Y
    if op == "mul":
        return X @ Y
    if op == "inv":
        return inverse(X)
    if op == "det":
        return det(X)
    raise ValueError(f"unknown operation {op!r}")
