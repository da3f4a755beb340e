"""Buchberger's algorithm with transformation tracking.

Everything that the control-theoretic layers need to *prove* (that an
element lies in an ideal, that some power does, that a family of ideals is
comaximal, which vectors are syzygies) is produced here as an explicit
certificate and re-checked by multiplication before it is returned.

The engine works on submodules of free modules ``A^k`` with a
position-over-term order: engine terms are tuples ``(pos, e_1, ..., e_n)``
and ideals are the special case ``k == 1``.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass

from . import kernels
from .polyring import Poly, Rational

__all__ = [
    "ExtendedBasis",
    "MembershipCertificate",
    "CertificateError",
    "groebner_basis",
    "ideal_membership",
    "radical_membership",
    "one_combination",
    "power_combination",
    "module_syzygies",
    "saturate",
    "ideal_quotient",
]


class CertificateError(AssertionError):
    """A certificate failed to re-multiply; indicates an engine bug."""


@dataclass(frozen=True)
class MembershipCertificate:
    element: Poly
    generators: tuple
    cofactors: tuple

    def check(self):
        total = self.element.ring.zero()
        for c, g in zip(self.cofactors, self.generators):
            total = total + c * g
        if total != self.element or len(self.cofactors) != len(self.generators):
            raise CertificateError(f"certificate does not re-multiply to {self.element}")
        return True


def _engine_nkey(ring):
    nkey = ring.nkey

    def key(t):
        return (t[0],) + nkey(t[1:])

    return key


def _to_engine(p, pos=0):
    return {(pos,) + m: c for m, c in p.terms.items()}


def _vec_to_engine(vec, offset=0):
    out = {}
    for i, p in enumerate(vec):
        for m, c in p.terms.items():
            out[(offset + i,) + m] = c
    return out


def _lead(f, nkey):
    return min(f, key=nkey)


def _lcm(a, b):
    return (a[0],) + tuple(max(x, y) for x, y in zip(a[1:], b[1:]))


def _disjoint(a, b):
    return all(not (x and y) for x, y in zip(a[1:], b[1:]))


def _add_tracked(total, q, trans):
    """``total += sum_k q[k] * trans[k]`` on transform vectors (ring dicts)."""
    K = kernels.active()
    for qk, tk in zip(q, trans):
        if not qk:
            continue
        qr = {m[1:]: c for m, c in qk.items()}
        for i, ti in enumerate(tk):
            if ti:
                total[i] = K.add(total[i], K.mul(qr, ti))
    return total


class _Buchberger:
    """One run of the normal-strategy Buchberger algorithm."""

    def __init__(self, nkey, ideal, ngens=None):
        self.nkey = nkey
        self.ideal = ideal
        self.track = ngens is not None
        self.ngens = ngens
        self.leads = []
        self.polys = []
        self.trans = []
        self.pairs = []
        self.pending = set()

    def _sort_key(self, t):
        # normal strategy: smallest lcm first
        return tuple(-x for x in self.nkey(t))

    def _reduce(self, f):
        quot, rem = kernels.active().normal_form(f, self.leads, self.polys, self.nkey, self.track)
        return quot, rem

    def _insert(self, h, th):
        K = kernels.active()
        lm = _lead(h, self.nkey)
        inv = 1 / h[lm]
        h = K.scale(h, inv)
        if th is not None:
            th = [K.scale(t, inv) for t in th]
        j = len(self.polys)
        for i in range(j):
            if self.leads[i][0] != lm[0]:
                continue
            lcm = _lcm(self.leads[i], lm)
            heapq.heappush(self.pairs, (self._sort_key(lcm), i, j, lcm))
            self.pending.add((i, j))
        self.leads.append(lm)
        self.polys.append(h)
        self.trans.append(th)

    def _chain_skip(self, i, j, lcm):
        div = kernels.active().divides
        for k in range(len(self.polys)):
            if k == i or k == j:
                continue
            if not div(self.leads[k], lcm):
                continue
            if (min(i, k), max(i, k)) in self.pending or (min(j, k), max(j, k)) in self.pending:
                continue
            return True
        return False

    def add_input(self, f, tf):
        quot, rem = self._reduce(f)
        if not rem:
            return
        th = None
        if self.track:
            th = [dict(x) for x in tf]
            neg = [{m: -c for m, c in q.items()} for q in quot]
            th = _add_tracked(th, neg, self.trans)
        self._insert(rem, th)

    def run(self):
        K = kernels.active()
        while self.pairs:
            _, i, j, lcm = heapq.heappop(self.pairs)
            self.pending.discard((i, j))
            if self.ideal and _disjoint(self.leads[i], self.leads[j]):
                continue
            if self._chain_skip(i, j, lcm):
                continue
            s = K.spoly(self.polys[i], self.leads[i], self.polys[j], self.leads[j])
            quot, rem = self._reduce(s)
            if not rem:
                continue
            th = None
            if self.track:
                li, lj = self.leads[i], self.leads[j]
                si = {tuple(x - y for x, y in zip(lcm[1:], li[1:])): Rational(1)}
                sj = {tuple(x - y for x, y in zip(lcm[1:], lj[1:])): Rational(-1)}
                th = [K.add(K.mul(si, a), K.mul(sj, b)) for a, b in zip(self.trans[i], self.trans[j])]
                neg = [{m: -c for m, c in q.items()} for q in quot]
                th = _add_tracked(th, neg, self.trans)
            self._insert(rem, th)

    def reduced(self):
        """Minimal, interreduced basis as ``[(lead, poly, transform)]``."""
        div = kernels.active().divides
        n = len(self.polys)
        keep = []
        for i in range(n):
            li = self.leads[i]
            if not any(
                j != i and div(self.leads[j], li) and (self.leads[j] != li or j < i)
                for j in range(n)
            ):
                keep.append(i)
        leads = [self.leads[i] for i in keep]
        polys = [self.polys[i] for i in keep]
        trans = [self.trans[i] for i in keep]
        out = []
        K = kernels.active()
        for idx in range(len(keep)):
            others = [k for k in range(len(keep)) if k != idx]
            f = polys[idx]
            lm = leads[idx]
            tail = {m: c for m, c in f.items() if m != lm}
            quot, rem = K.normal_form(
                tail, [leads[k] for k in others], [polys[k] for k in others], self.nkey, self.track
            )
            rem[lm] = f[lm]
            th = None
            if self.track:
                th = [dict(x) for x in trans[idx]]
                neg = [{m: -c for m, c in q.items()} for q in quot]
                th = _add_tracked(th, neg, [trans[k] for k in others])
            out.append((lm, rem, th))
        out.sort(key=lambda e: self.nkey(e[0]))
        return out


class ExtendedBasis:
    """Reduced Groebner basis with the matrix expressing it in the inputs.

    ``basis[j] == sum_i transform[j][i] * input_generators[i]`` exactly.
    """

    def __init__(self, input_generators, basis, transform, ring):
        self.input_generators = tuple(input_generators)
        self.basis = tuple(basis)
        self.transform = tuple(tuple(row) for row in transform)
        self.ring = ring
        self._leads = [(0,) + b.lead_monomial() for b in self.basis]
        self._monic = [_to_engine(b) for b in self.basis]

    def check(self):
        for g, row in zip(self.basis, self.transform):
            MembershipCertificate(g, self.input_generators, row).check()
        for f in self.input_generators:
            if self.reduce(f)[1]:
                raise CertificateError(f"input {f} does not reduce to zero")
        return True

    def is_unit_ideal(self):
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def _own(self, f):
        if isinstance(f, Poly) and f.ring != self.ring and f.ring.variables == self.ring.variables:
            return f.in_ring(self.ring)
        return self.ring.coerce(f)

    def reduce(self, f):
        """``(basis_quotients, remainder)`` of ``f`` modulo the basis."""
        f = self._own(f)
        quot, rem = kernels.active().normal_form(
            _to_engine(f), self._leads, self._monic, _engine_nkey(self.ring), True
        )
        ring = self.ring
        quotients = [Poly._raw(ring, {m[1:]: c for m, c in q.items()}) for q in quot]
        return quotients, Poly._raw(ring, {m[1:]: c for m, c in rem.items()})

    def contains(self, f):
        return not self.reduce(f)[1]

    def certificate(self, f):
        """Membership certificate for ``f`` or ``None`` when ``f`` is not a member."""
        f = self._own(f)
        quotients, rem = self.reduce(f)
        if rem:
            return None
        ring = self.ring
        cof = [ring.zero() for _ in self.input_generators]
        for q, row in zip(quotients, self.transform):
            if not q:
                continue
            for i, t in enumerate(row):
                if t:
                    cof[i] = cof[i] + q * t
        cert = MembershipCertificate(f, self.input_generators, tuple(cof))
        cert.check()
        return cert


def _common_ring(polys):
    rings = {id(p.ring): p.ring for p in polys}
    if not rings:
        raise ValueError("need at least one polynomial")
    ring = next(iter(rings.values()))
    for r in rings.values():
        if r != ring:
            raise ValueError("generators live in different rings")
    return ring


def groebner_basis(gens, order=None, ring=None):
    """Reduced Groebner basis of ``(gens)`` with transformation matrix."""
    gens = list(gens)
    if ring is None:
        ring = _common_ring(gens)
    gens = [ring.coerce(g) for g in gens]
    work = ring if order is None else ring.with_order(order)
    wgens = [g.in_ring(work) for g in gens]
    s = len(gens)
    bb = _Buchberger(_engine_nkey(work), ideal=True, ngens=s)
    zero_m = (0,) * work.nvars
    for i, g in enumerate(wgens):
        if not g:
            continue
        tf = [{zero_m: Rational(1)} if k == i else {} for k in range(s)]
        bb.add_input(_to_engine(g), tf)
    bb.run()
    basis, transform = [], []
    for lm, poly, th in bb.reduced():
        basis.append(Poly._raw(work, {m[1:]: c for m, c in poly.items()}))
        transform.append([Poly._raw(work, t) for t in th])
    return ExtendedBasis(wgens, basis, transform, work)


def ideal_membership(f, gens, basis=None):
    """Certificate that ``f`` lies in ``(gens)``, or ``None``."""
    gens = list(gens)
    ring = f.ring
    if not gens:
        return MembershipCertificate(f, (), ()) if not f else None
    eb = basis if basis is not None else groebner_basis(gens, ring=ring)
    return eb.certificate(f)


def _substitute_inverse(c, t_index, f, power, ring):
    """``f**power * c(z, 1/f)`` for ``c`` over the ring extended by ``t``."""
    parts = c.coefficients_in(t_index)
    out = ring.zero()
    for k, ck in parts.items():
        if k > power:
            raise ValueError("power too small to clear the substitution")
        base = Poly._raw(ring, {m[:t_index] + m[t_index + 1 :]: v for m, v in ck.terms.items()})
        out = out + base * f ** (power - k)
    return out


def _rabinowitsch(f, gens, target=None):
    """Certificate ``target * f**K in (gens)`` via ``1 - t f``; ``(K, cofactors)``."""
    ring = f.ring
    ext = ring.extend()
    t_index = ext.nvars - 1
    t = ext.gens()[t_index]
    egens = [g.in_ring(ext, list(range(ring.nvars))) for g in gens]
    ef = f.in_ring(ext, list(range(ring.nvars)))
    tgt = ext.one() if target is None else target.in_ring(ext, list(range(ring.nvars)))
    cert = ideal_membership(tgt, egens + [1 - t * ef])
    if cert is None:
        return None
    cofs = cert.cofactors[: len(gens)]
    K = max((c.degree_in(t_index) for c in cofs if c), default=0)
    K = max(K, 0)
    cofactors = [_substitute_inverse(c, t_index, f, K, ring) if c else ring.zero() for c in cofs]
    return K, cofactors


def radical_membership(f, gens):
    """``(k, certificate for f**k)`` with ``k`` minimal, or ``None``.

    Membership of ``f`` in the radical is decided by the Rabinowitsch test;
    its ``t``-degree bounds ``k`` and an exact search finds the least power.
    """
    gens = [f.ring.coerce(g) for g in gens]
    ring = f.ring
    if not any(gens):
        if not f:
            return 1, MembershipCertificate(f, tuple(gens), tuple(ring.zero() for _ in gens))
        return None
    res = _rabinowitsch(f, gens)
    if res is None:
        return None
    k0, cofactors = res
    K = max(k0, 1)
    eb = groebner_basis(gens, ring=ring)
    power = ring.one()
    for k in range(1, K):
        power = power * f
        cert = eb.certificate(power)
        if cert is not None:
            return k, cert
    scale = f ** (K - k0)
    cert = MembershipCertificate(f**K, tuple(gens), tuple(c * scale for c in cofactors))
    cert.check()
    return K, cert


def one_combination(ideals):
    """Elements ``lam_i`` of the given ideals with ``sum(lam_i) == 1``.

    ``ideals`` is a list of generator lists. Returns a list of
    ``(lam_i, certificate)`` or ``None`` when the ideals are not comaximal.
    """
    ideals = [list(g) for g in ideals]
    if not ideals:
        raise ValueError("need at least one ideal")
    flat = [g for gens in ideals for g in gens]
    ring = _common_ring(flat)
    cert = ideal_membership(ring.one(), flat)
    if cert is None:
        return None
    out = []
    pos = 0
    total = ring.zero()
    for gens in ideals:
        cofs = cert.cofactors[pos : pos + len(gens)]
        pos += len(gens)
        lam = ring.zero()
        for c, g in zip(cofs, gens):
            lam = lam + c * g
        sub = MembershipCertificate(lam, tuple(gens), tuple(cofs))
        sub.check()
        total = total + lam
        out.append((lam, sub))
    if total != 1:
        raise CertificateError("combination does not sum to one")
    return out


def power_combination(elements, omega):
    """Coefficients ``a_i`` with ``sum(a_i * elements[i]**omega) == 1`` or ``None``."""
    if omega < 1:
        raise ValueError("omega must be positive")
    elements = list(elements)
    ring = _common_ring(elements)
    powers = [e**omega for e in elements]
    combo = one_combination([[p] for p in powers])
    if combo is None:
        return None
    a = [sub.cofactors[0] for _, sub in combo]
    # shift multiples of the last power into the last coefficient; gives
    # the least-degree solution in the two-element univariate case
    if len(a) > 1 and not powers[-1].is_constant():
        last = powers[-1]
        for i in range(len(a) - 1):
            q, r = a[i].divmod(last)
            if q:
                a[i] = r
                a[-1] = a[-1] + q * powers[i]
    total = ring.zero()
    for ai, p in zip(a, powers):
        total = total + ai * p
    if total != 1:
        raise CertificateError("power combination does not sum to one")
    return a


def module_syzygies(columns):
    """Generators of ``{s : sum_i s_i * columns[i] == 0}``.

    ``columns`` is a list of equal-length vectors of polynomials. Uses the
    augmented module ``(v_i | e_i)`` under a position-over-term order whose
    first ``k`` positions dominate; basis elements with a zero ``v``-part
    generate the syzygy module.
    """
    columns = [list(c) for c in columns]
    if not columns:
        raise ValueError("need at least one column")
    k = len(columns[0])
    if any(len(c) != k for c in columns):
        raise ValueError("columns of different lengths")
    ring = _common_ring([p for c in columns for p in c])
    columns = [[ring.coerce(p) for p in c] for c in columns]
    s = len(columns)
    zero_m = (0,) * ring.nvars
    bb = _Buchberger(_engine_nkey(ring), ideal=False)
    for i, col in enumerate(columns):
        v = _vec_to_engine(col)
        v[(k + i,) + zero_m] = Rational(1)
        bb.add_input(v, None)
    bb.run()
    syz = []
    for lm, poly, _ in bb.reduced():
        if lm[0] < k:
            continue
        vec = [{} for _ in range(s)]
        for t, c in poly.items():
            vec[t[0] - k][t[1:]] = c
        syz.append([Poly._raw(ring, d) for d in vec])
    for vec in syz:
        total = [ring.zero() for _ in range(k)]
        for si, col in zip(vec, columns):
            if si:
                total = [a + si * b for a, b in zip(total, col)]
        if any(total):
            raise CertificateError("syzygy does not annihilate the columns")
    return syz


def saturate(gens, f):
    """Reduced Groebner basis of ``(gens) : f**inf`` by eliminating a tag variable."""
    gens = list(gens)
    ring = f.ring
    ext = ring.extend(first=True, order="block:1")
    t = ext.gens()[0]
    shift = list(range(1, ring.nvars + 1))
    egens = [ring.coerce(g).in_ring(ext, shift) for g in gens]
    eb = groebner_basis(egens + [1 - t * f.in_ring(ext, shift)], ring=ext)
    out = []
    for b in eb.basis:
        if b.degree_in(0) <= 0:
            out.append(Poly._raw(ring, {m[1:]: c for m, c in b.terms.items()}))
    return out


def ideal_quotient(num_ideal, f):
    """Generators of ``(num_ideal) : (f)`` via syzygies of ``[f, g_1, ...]``."""
    gens = list(num_ideal)
    ring = f.ring
    if not f:
        return [ring.one()]
    if not any(gens):
        return []
    syz = module_syzygies([[f]] + [[g] for g in gens])
    out = [v[0] for v in syz if v[0]]
    return out
