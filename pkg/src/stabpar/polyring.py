"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`PolyRing` fixes the variable names, the monomial order and the
causality ideal; :class:`Poly` values are immutable term maps over one ring.
Terms are kept in a dict keyed by exponent tuples; the canonical (printing,
leading-term) order is derived from the ring order, so two equal
polynomials always have identical term maps.
"""
from __future__ import annotations

import re
from numbers import Rational as _RationalABC

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Rational

from . import kernels

__all__ = [
    "Rational",
    "RingMismatch",
    "PolyRing",
    "Poly",
    "poly_arith",
    "poly_reduce",
    "poly_eval_origin",
]

_ORDERS = ("grevlex", "lex")
_VAR_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class RingMismatch(ValueError):
    """Operands belong to different ring contexts."""


def to_rational(c):
    if isinstance(c, int):
        return Rational(c)
    if isinstance(c, _RationalABC) or type(c) is Rational:
        return Rational(c)
    try:
        return Rational(c)
    except (TypeError, ValueError):
        raise TypeError(f"cannot use {c!r} as a rational coefficient") from None


def _grevlex_nkey(m):
    return (-sum(m),) + m[::-1]


def _lex_nkey(m):
    return tuple([-e for e in m])


def _block_nkey(k):
    def nkey(m):
        a, b = m[:k], m[k:]
        return (-sum(a),) + a[::-1] + (-sum(b),) + b[::-1]

    return nkey


class PolyRing:
    """Ring context: ordered variables, a monomial order, a causality ideal.

    ``order`` is ``"grevlex"``, ``"lex"`` or ``"block:k"`` (grevlex on the
    first ``k`` variables, ties broken by grevlex on the rest; eliminates
    the first block). ``causality`` lists generators of the prime ideal used
    by the causality test; ``None`` means the ideal of all variables.
    """

    __slots__ = ("variables", "order", "nvars", "nkey", "_causality", "_gens", "__weakref__")

    def __init__(self, variables, order="grevlex", causality=None):
        if isinstance(variables, str):
            variables = variables.replace(",", " ").split()
        variables = tuple(variables)
        if not variables:
            raise ValueError("a ring needs at least one variable")
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        for v in variables:
            if not _VAR_RE.match(v):
                raise ValueError(f"bad variable name {v!r}")
        self.variables = variables
        self.nvars = len(variables)
        if order in _ORDERS:
            self.nkey = _grevlex_nkey if order == "grevlex" else _lex_nkey
        elif isinstance(order, str) and order.startswith("block:"):
            k = int(order.split(":", 1)[1])
            if not 0 < k < self.nvars:
                raise ValueError(f"block size {k} out of range")
            self.nkey = _block_nkey(k)
        else:
            raise ValueError(f"unknown monomial order {order!r}")
        self.order = order
        self._gens = tuple(
            Poly._raw(self, {tuple(int(i == j) for j in range(self.nvars)): Rational(1)})
            for i in range(self.nvars)
        )
        if causality is None:
            self._causality = None
        else:
            gens = tuple(self.coerce(g) for g in causality)
            if any(g.is_constant() for g in gens):
                raise ValueError("causality ideal generators must be non-constant")
            self._causality = gens

    # -- identity -----------------------------------------------------------
    def _ident(self):
        caus = None if self._causality is None else tuple(g._key() for g in self._causality)
        return (self.variables, self.order, caus)

    def __eq__(self, other):
        return self is other or (isinstance(other, PolyRing) and self._ident() == other._ident())

    def __hash__(self):
        return hash((self.variables, self.order))

    def __repr__(self):
        return f"PolyRing({' '.join(self.variables)!r}, order={self.order!r})"

    # -- constructors -------------------------------------------------------
    def gens(self):
        return self._gens

    def gen(self, name):
        return self._gens[self.variables.index(name)]

    def zero(self):
        return Poly._raw(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = to_rational(c)
        if not c:
            return self.zero()
        return Poly._raw(self, {(0,) * self.nvars: c})

    def poly(self, terms):
        return Poly(self, terms)

    def coerce(self, x):
        if isinstance(x, Poly):
            if x.ring is not self and x.ring != self:
                raise RingMismatch(f"{x.ring!r} vs {self!r}")
            return x
        return self.const(x)

    def parse(self, text):
        from .parse import parse_poly

        return parse_poly(text, self)

    @property
    def causality_ideal(self):
        if self._causality is None:
            return self._gens
        return self._causality

    @property
    def variables_causality(self):
        """True when the causality ideal is the ideal of all variables."""
        return self._causality is None

    def with_order(self, order):
        if order == self.order:
            return self
        caus = None if self._causality is None else [g.terms for g in self._causality]
        ring = PolyRing(self.variables, order)
        if caus is not None:
            ring = PolyRing(self.variables, order, [Poly(ring, t) for t in caus])
        return ring

    def extend(self, name=None, first=False, order=None):
        """Ring with one extra variable; ``first`` puts it in front."""
        if name is None:
            name = "t"
            while name in self.variables:
                name = "_" + name
        if name in self.variables:
            raise ValueError(f"variable {name!r} already present")
        variables = (name,) + self.variables if first else self.variables + (name,)
        return PolyRing(variables, order or ("grevlex" if self.order.startswith("block") else self.order))


class Poly:
    """Immutable sparse polynomial over :class:`PolyRing` ``ring``."""

    __slots__ = ("ring", "terms", "_hash", "_lead")

    def __init__(self, ring, terms):
        clean = {}
        n = ring.nvars
        for m, c in dict(terms).items():
            m = tuple(int(e) for e in m)
            if len(m) != n or any(e < 0 for e in m):
                raise ValueError(f"bad exponent vector {m} for {ring!r}")
            c = to_rational(c)
            if c:
                clean[m] = clean.get(m, 0) + c
        self.ring = ring
        self.terms = {m: c for m, c in clean.items() if c}
        self._hash = None
        self._lead = None

    @classmethod
    def _raw(cls, ring, terms):
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        p._lead = None
        return p

    # -- arithmetic ---------------------------------------------------------
    def _other(self, other):
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
            return other.terms
        if isinstance(other, (int, _RationalABC)) or type(other) is Rational:
            c = to_rational(other)
            return {(0,) * self.ring.nvars: c} if c else {}
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Poly._raw(self.ring, kernels.active().add(self.terms, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Poly._raw(self.ring, kernels.active().sub(self.terms, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Poly._raw(self.ring, kernels.active().sub(o, self.terms))

    def __neg__(self):
        return Poly._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Poly):
            o = self._other(other)
            return Poly._raw(self.ring, kernels.active().mul(self.terms, o))
        if isinstance(other, (int, _RationalABC)) or type(other) is Rational:
            return Poly._raw(self.ring, kernels.active().scale(self.terms, to_rational(other)))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison ---------------------------------------------------------
    def _key(self):
        return tuple(sorted(self.terms.items()))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.terms == o

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ---------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, Rational(0))

    def sorted_terms(self):
        """Terms in descending monomial order."""
        nkey = self.ring.nkey
        return sorted(self.terms.items(), key=lambda mc: nkey(mc[0]))

    def lead_monomial(self):
        if self._lead is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading term")
            self._lead = min(self.terms, key=self.ring.nkey)
        return self._lead

    def lead_coeff(self):
        return self.terms[self.lead_monomial()]

    def total_degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, index):
        return max((m[index] for m in self.terms), default=-1)

    def monic(self):
        return self * (1 / self.lead_coeff())

    def coefficients_in(self, index):
        """Split as ``sum_k c_k * x_index**k``; returns ``{k: c_k}``."""
        out = {}
        for m, c in self.terms.items():
            k = m[index]
            mm = m[:index] + (0,) + m[index + 1 :]
            out.setdefault(k, {})[mm] = c
        return {k: Poly._raw(self.ring, t) for k, t in out.items()}

    def in_ring(self, ring, positions=None):
        """Re-home into ``ring``; ``positions[i]`` is the new index of variable ``i``."""
        if ring == self.ring and positions is None:
            return self if ring is self.ring else Poly._raw(ring, dict(self.terms))
        if positions is None:
            positions = [ring.variables.index(v) for v in self.ring.variables]
        out = {}
        for m, c in self.terms.items():
            mm = [0] * ring.nvars
            for i, e in enumerate(m):
                if e:
                    mm[positions[i]] = e
            out[tuple(mm)] = c
        return Poly._raw(ring, out)

    # -- division -----------------------------------------------------------
    def divmod(self, divisor):
        """Multivariate division by a single polynomial: ``(q, r)``."""
        (q,), r = poly_reduce(self, [divisor])
        return q, r

    def divides(self, other):
        if not self.terms:
            return not other
        return not self.ring.coerce(other).divmod(self)[1]

    def exact_div(self, divisor):
        divisor = self.ring.coerce(divisor)
        if not divisor:
            raise ZeroDivisionError("polynomial division by zero")
        if divisor.is_constant():
            return self * (1 / divisor.constant_term())
        q, r = self.divmod(divisor)
        if r:
            raise ArithmeticError(f"{divisor} does not divide {self}")
        return q

    # -- text ---------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.variables
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                (v if e == 1 else f"{v}^{e}") for v, e in zip(names, m) if e
            )
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"Poly({str(self)!r})"


def poly_arith(op, p, q):
    """``op`` in ``{"add", "sub", "mul"}``; raises :class:`RingMismatch`."""
    if not isinstance(p, Poly) or not isinstance(q, Poly):
        raise TypeError("poly_arith expects Poly operands")
    if p.ring != q.ring:
        raise RingMismatch(f"{p.ring!r} vs {q.ring!r}")
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def poly_reduce(f, basis, order=None):
    """Multivariate division of ``f`` by ``basis``.

    Returns ``(quotients, remainder)`` with ``f == sum(q*b) + remainder``
    exactly and no remainder term divisible by a leading term of ``basis``
    (leading terms taken in ``order``, default the ring order).
    """
    ring = f.ring
    basis = [ring.coerce(b) for b in basis]
    if any(not b for b in basis):
        raise ValueError("zero polynomial in division basis")
    work_ring = ring if order is None else ring.with_order(order)
    fw = f.in_ring(work_ring)
    bw = [b.in_ring(work_ring) for b in basis]
    if not bw:
        return [], f
    leads, monics, lcs = [], [], []
    for b in bw:
        lm = b.lead_monomial()
        lc = b.terms[lm]
        inv = 1 / lc
        leads.append((0,) + lm)
        monics.append({(0,) + m: c * inv for m, c in b.terms.items()})
        lcs.append(inv)
    nkey = work_ring.nkey

    def ekey(t):
        return (t[0],) + nkey(t[1:])

    quot, rem = kernels.active().normal_form(
        {(0,) + m: c for m, c in fw.terms.items()}, leads, monics, ekey, True
    )
    quotients = [
        Poly._raw(ring, {m[1:]: c * inv for m, c in q.items()}) for q, inv in zip(quot, lcs)
    ]
    remainder = Poly._raw(ring, {m[1:]: c for m, c in rem.items()})
    return quotients, remainder


def poly_eval_origin(f):
    """Constant term of ``f`` (its value at the origin)."""
    return f.constant_term()
