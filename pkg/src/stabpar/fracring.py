"""Fractions over the polynomial ring, localizations ``A_lam``, causality.

No multivariate gcd is used. A :class:`Fraction` keeps its denominator as a
product of monic "atoms" and cancels an atom from the numerator only when
division by it is exact; equality is always decided by cross-multiplication.
"""
from __future__ import annotations

import enum

from .groebner import _rabinowitsch, groebner_basis, ideal_quotient
from .polyring import Poly, Rational, RingMismatch, to_rational

__all__ = [
    "Fraction",
    "LocalizedElement",
    "Causality",
    "NotInvertible",
    "frac_arith",
    "in_A",
    "in_A_lambda",
    "causality",
    "in_causality_ideal",
    "localize",
    "lowest_terms",
    "SATURATION_CAP",
]

SATURATION_CAP = 64


class NotInvertible(ZeroDivisionError):
    pass


def _wrap(p):
    s = str(p)
    return s if len(p.terms) == 1 and "*" not in s else f"({s})"


def _split_atom(p):
    """Monic atoms and a constant with ``p == const * prod(atoms)``."""
    ring = p.ring
    n = ring.nvars
    content = [min(m[i] for m in p.terms) for i in range(n)]
    atoms = []
    if any(content):
        for i, e in enumerate(content):
            if e:
                atoms.append((ring.gens()[i], e))
        shift = tuple(content)
        p = Poly._raw(ring, {tuple(a - b for a, b in zip(m, shift)): c for m, c in p.terms.items()})
    const = Rational(1)
    if not p.is_constant():
        # normalize to constant term 1 when possible (1 - 2*z rather than z - 1/2)
        lc = p.constant_term() or p.lead_coeff()
        if lc != 1:
            p = p * (1 / lc)
        const = lc
        atoms.append((p, 1))
    else:
        const = p.constant_term()
    return const, atoms


def _merge(dst, atoms, sign=1):
    for a, e in atoms:
        dst[a] = dst.get(a, 0) + sign * e
    return dst


def _product(ring, factors):
    out = ring.one()
    for a, e in factors.items():
        if e:
            out = out * a**e
    return out


def _cancel(num, factors):
    """Strip atoms from the denominator that divide ``num`` exactly."""
    if not num:
        return num, {}
    factors = {a: e for a, e in factors.items() if e > 0}
    if not factors:
        return num, factors
    den = _product(num.ring, factors)
    q, r = num.divmod(den)
    if not r:
        return q, {}
    for a in list(factors):
        e = factors[a]
        while e:
            q, r = num.divmod(a)
            if r:
                break
            num, e = q, e - 1
        if e:
            factors[a] = e
        else:
            del factors[a]
    return num, factors


class Fraction:
    """Element ``num / den`` of the field of fractions of a polynomial ring."""

    __slots__ = ("num", "factors")

    def __init__(self, num, den=None):
        if not isinstance(num, Poly):
            raise TypeError("Fraction numerator must be a Poly")
        ring = num.ring
        if den is None:
            self.num, self.factors = num, {}
            return
        den = ring.coerce(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        const, atoms = _split_atom(den)
        num = num * (1 / const)
        self.num, self.factors = _cancel(num, _merge({}, atoms))

    @classmethod
    def _make(cls, num, factors):
        x = cls.__new__(cls)
        x.num, x.factors = _cancel(num, factors)
        return x

    @property
    def ring(self):
        return self.num.ring

    @property
    def den(self):
        return _product(self.ring, self.factors)

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Fraction):
            if other.ring != self.ring:
                raise RingMismatch("fractions over different rings")
            return other
        if isinstance(other, Poly):
            return Fraction(self.ring.coerce(other))
        if isinstance(other, LocalizedElement):
            return other.to_fraction()
        try:
            return Fraction(self.ring.const(to_rational(other)))
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.factors:
            return Fraction._make(self.num + o.num * _product(self.ring, self.factors), dict(self.factors)) if o.num else self
        if not self.factors:
            return o.__add__(self)
        lcm = dict(self.factors)
        for a, e in o.factors.items():
            lcm[a] = max(lcm.get(a, 0), e)
        ring = self.ring
        ma = _product(ring, {a: e - self.factors.get(a, 0) for a, e in lcm.items()})
        mb = _product(ring, {a: e - o.factors.get(a, 0) for a, e in lcm.items()})
        return Fraction._make(self.num * ma + o.num * mb, lcm)

    __radd__ = __add__

    def __neg__(self):
        x = Fraction.__new__(Fraction)
        x.num, x.factors = -self.num, dict(self.factors)
        return x

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return Fraction(self.ring.zero())
        return Fraction._make(self.num * o.num, _merge(dict(self.factors), o.factors.items()))

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("integer exponent required")
        if k < 0:
            return self.inverse() ** (-k)
        return Fraction._make(self.num**k, {a: e * k for a, e in self.factors.items()})

    def inverse(self):
        if not self.num:
            raise NotInvertible("inverse of zero fraction")
        const, atoms = _split_atom(self.num)
        num = _product(self.ring, self.factors) * (1 / const)
        return Fraction._make(num, _merge({}, atoms))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.factors and not o.factors:
            return self.num == o.num
        return self.num * o.den == o.num * self.den

    __hash__ = None

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    def is_polynomial(self):
        return not self.factors

    def __str__(self):
        if not self.factors:
            return str(self.num)
        return f"{_wrap(self.num)} / {_wrap(self.den)}"

    def __repr__(self):
        return f"Fraction({str(self)!r})"


class LocalizedElement:
    """``num / lam**power`` in the localization ``A_lam``.

    Stored reduced: ``lam`` does not divide ``num`` when ``power > 0``.
    """

    __slots__ = ("num", "lam", "power")

    def __init__(self, num, lam, power=0):
        if not lam:
            raise ValueError("cannot localize at zero")
        if power < 0:
            raise ValueError("negative power")
        lam = num.ring.coerce(lam)
        if lam.is_constant():
            num = num * (1 / lam.constant_term()) ** power
            power = 0
        while power and num:
            q, r = num.divmod(lam)
            if r:
                break
            num, power = q, power - 1
        if not num:
            power = 0
        self.num, self.lam, self.power = num, lam, power

    @property
    def ring(self):
        return self.num.ring

    def _coerce(self, other):
        if isinstance(other, LocalizedElement):
            if other.lam != self.lam:
                raise RingMismatch(f"localizations at {self.lam} and {other.lam}")
            return other
        if isinstance(other, Poly):
            return LocalizedElement(self.ring.coerce(other), self.lam, 0)
        if isinstance(other, Fraction):
            return None
        try:
            return LocalizedElement(self.ring.const(to_rational(other)), self.lam, 0)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        k = max(self.power, o.power)
        lam = self.lam
        num = self.num * lam ** (k - self.power) + o.num * lam ** (k - o.power)
        return LocalizedElement(num, lam, k)

    __radd__ = __add__

    def __neg__(self):
        x = LocalizedElement.__new__(LocalizedElement)
        x.num, x.lam, x.power = -self.num, self.lam, self.power
        return x

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LocalizedElement(self.num * o.num, self.lam, self.power + o.power)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Fraction):
            return self.to_fraction() == other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        lam = self.lam
        if self.power == o.power:
            return self.num == o.num
        return self.num * lam**o.power == o.num * lam**self.power

    __hash__ = None

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    def to_fraction(self):
        if not self.power:
            return Fraction(self.num)
        const, atoms = _split_atom(self.lam)
        factors = {a: e * self.power for a, e in atoms}
        return Fraction._make(self.num * (1 / const) ** self.power, factors)

    def to_poly(self):
        """The polynomial value, or ``None`` when a denominator remains."""
        return self.num if not self.power else None

    def unit_power(self, cap=SATURATION_CAP):
        """Least ``k`` with ``num | lam**k``, or ``None`` if ``num`` is not a unit."""
        if not self.num:
            return None
        if self.num.is_constant():
            return 0
        res = _localize(self.ring.one(), self.num, self.lam, cap)
        return None if res is None else res[1]

    def is_unit(self, cap=SATURATION_CAP):
        return self.unit_power(cap) is not None

    def inverse(self, cap=SATURATION_CAP):
        if not self.num:
            raise NotInvertible("zero is not a unit")
        lam = self.lam
        if self.num.is_constant():
            return LocalizedElement(lam**self.power * (1 / self.num.constant_term()), lam, 0)
        res = _localize(self.ring.one(), self.num, lam, cap)
        if res is None:
            raise NotInvertible(f"{self.num} is not a unit after inverting {lam}")
        w, k = res
        return LocalizedElement(w * lam**self.power, lam, k)

    def __str__(self):
        if not self.power:
            return str(self.num)
        num, lam = _wrap(self.num), _wrap(self.lam)
        return f"{num} / {lam}^{self.power}" if self.power > 1 else f"{num} / {lam}"

    def __repr__(self):
        return f"LocalizedElement({str(self)!r})"


def _saturation_power(lam, den, num, cap):
    """Least ``k <= cap`` with ``den | num * lam**k`` or ``None``.

    Iterates remainders ``r_k = NF(num * lam**k)`` modulo ``(den)``.
    """
    r = num.divmod(den)[1]
    if not r:
        return 0
    lam_r = lam.divmod(den)[1]
    for k in range(1, cap + 1):
        r = (r * lam_r).divmod(den)[1]
        if not r:
            return k
    return None


def _localize(num, den, lam, cap):
    """``(w, k)`` with ``num / den == w / lam**k`` or ``None``."""
    k = _saturation_power(lam, den, num, cap)
    if k is not None:
        return (num * lam**k).exact_div(den), k
    # decides num in (den) : lam^inf and yields num * lam^K = c * den
    res = _rabinowitsch(lam, [den], target=num)
    if res is None:
        return None
    k, (c,) = res
    return c, k


def localize(x, lam, cap=SATURATION_CAP):
    """Alias of :func:`in_A_lambda` accepting Poly, Fraction or LocalizedElement."""
    return in_A_lambda(x, lam, cap)


def lowest_terms(x):
    """Equal fraction with numerator and denominator coprime.

    ``(den) : (num)`` is the principal ideal ``(den / gcd)``, so its single
    reduced generator yields the gcd without factoring.
    """
    x = _as_fraction(x)
    if not x.factors or not x.num:
        return x
    den = x.den
    gens = ideal_quotient([den], x.num)
    if len(gens) != 1:  # pragma: no cover - principal in a UFD
        return x
    g = den.exact_div(gens[0])
    if g.is_constant():
        return x
    return Fraction(x.num.exact_div(g), den.exact_div(g))


def frac_arith(op, x, y=None):
    """``op`` in ``{"add", "sub", "mul", "inv"}`` on fractions."""
    if op == "inv":
        return x.inverse()
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown operation {op!r}")


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Poly):
        return Fraction(x)
    if isinstance(x, LocalizedElement):
        return x.to_fraction()
    raise TypeError(f"not a ring element: {x!r}")


def in_A(x):
    """The polynomial equal to ``x``, or ``None`` when ``x`` is not in ``A``."""
    if isinstance(x, Poly):
        return x
    x = _as_fraction(x)
    if not x.factors:
        return x.num
    q, r = x.num.divmod(x.den)
    return None if r else q


def in_A_lambda(x, lam, cap=SATURATION_CAP):
    """``x`` as ``num / lam**k``, or ``None`` when ``x`` is not in ``A_lam``."""
    if isinstance(x, Poly):
        return LocalizedElement(x, lam, 0)
    if isinstance(x, LocalizedElement):
        if x.lam == lam:
            return x
        x = x.to_fraction()
    x = _as_fraction(x)
    lam = x.ring.coerce(lam)
    if not lam:
        raise ValueError("cannot localize at zero")
    if not x.factors:
        return LocalizedElement(x.num, lam, 0)
    res = _localize(x.num, x.den, lam, cap)
    if res is None:
        return None
    w, k = res
    return LocalizedElement(w, lam, k)


class Causality(enum.Enum):
    STRICTLY_CAUSAL = "strictly causal"
    CAUSAL = "causal"
    NOT_CAUSAL = "not causal"

    @property
    def is_causal(self):
        return self is not Causality.NOT_CAUSAL


def in_causality_ideal(p, Z=None):
    ring = p.ring
    if Z is None:
        if ring.variables_causality:
            return not p.constant_term()
        Z = ring.causality_ideal
    return groebner_basis(Z, ring=ring).contains(p)


def causality(x, Z=None):
    """Classify ``x`` as strictly causal, causal or not causal.

    ``x`` is causal iff the ideal quotient ``(den) : (num)`` (the admissible
    alternative denominators) is not contained in the causality ideal.
    """
    x = _as_fraction(x)
    num, den = x.num, x.den
    if not num:
        return Causality.STRICTLY_CAUSAL
    if not in_causality_ideal(den, Z):
        return Causality.STRICTLY_CAUSAL if in_causality_ideal(num, Z) else Causality.CAUSAL
    for d2 in ideal_quotient([den], num):
        if not in_causality_ideal(d2, Z):
            n2 = (d2 * num).exact_div(den)
            if in_causality_ideal(n2, Z):
                return Causality.STRICTLY_CAUSAL
            return Causality.CAUSAL
    return Causality.NOT_CAUSAL
