"""Pure-Python term kernels.

Polynomials are plain ``dict`` objects mapping exponent tuples to nonzero
coefficients. Inside the Groebner engine every term tuple carries a leading
position component, so the same routines serve ideals (position 0) and
submodules of free modules.

``_core.pyx`` compiles the same algorithms; keep the two in lockstep.
"""
from heapq import heappop, heappush

__all__ = [
    "add",
    "sub",
    "scale",
    "mul",
    "mul_term",
    "divides",
    "normal_form",
    "spoly",
]


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for m, c in b.items():
        v = out.get(m)
        if v is None:
            out[m] = c
        else:
            v = v + c
            if v:
                out[m] = v
            else:
                del out[m]
    return out


def sub(a, b):
    out = dict(a)
    for m, c in b.items():
        v = out.get(m)
        if v is None:
            out[m] = -c
        else:
            v = v - c
            if v:
                out[m] = v
            else:
                del out[m]
    return out


def scale(a, c):
    if not c:
        return {}
    return {m: v * c for m, v in a.items()}


def mul(a, b):
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple([x + y for x, y in zip(ma, mb)])
            v = out.get(m)
            if v is None:
                out[m] = ca * cb
            else:
                v = v + ca * cb
                if v:
                    out[m] = v
                else:
                    del out[m]
    return out


def mul_term(a, c, shift):
    """Return ``c * x**shift * a``."""
    return {tuple([x + y for x, y in zip(m, shift)]): v * c for m, v in a.items()}


def divides(s, t):
    """Position-aware divisibility of engine terms."""
    if s[0] != t[0]:
        return False
    for i in range(1, len(s)):
        if s[i] > t[i]:
            return False
    return True


def normal_form(f, leads, basis, nkey, track):
    """Fully reduce ``f`` by a list of monic polynomials.

    ``leads[j]`` is the leading term of ``basis[j]`` (coefficient 1) and
    ``nkey`` maps a term to a tuple whose ascending order is the descending
    term order. Returns ``(quotients, remainder)``; ``quotients`` is a list
    of dicts keyed by shift terms when ``track`` is true, else ``None``.
    """
    f = dict(f)
    heap = [(nkey(m), m) for m in f]
    heap.sort()
    rem = {}
    quot = [{} for _ in basis] if track else None
    nb = len(basis)
    while heap:
        _, m = heappop(heap)
        c = f.get(m)
        if c is None:
            continue
        for j in range(nb):
            lm = leads[j]
            if lm[0] != m[0]:
                continue
            ok = True
            for i in range(1, len(m)):
                if lm[i] > m[i]:
                    ok = False
                    break
            if not ok:
                continue
            shift = tuple([x - y for x, y in zip(m, lm)])
            del f[m]
            for bm, bc in basis[j].items():
                if bm == lm:
                    continue
                t = tuple([x + y for x, y in zip(bm, shift)])
                v = f.get(t)
                if v is None:
                    f[t] = -c * bc
                    heappush(heap, (nkey(t), t))
                else:
                    v = v - c * bc
                    if v:
                        f[t] = v
                    else:
                        del f[t]
            if track:
                q = quot[j]
                v = q.get(shift)
                if v is None:
                    q[shift] = c
                else:
                    v = v + c
                    if v:
                        q[shift] = v
                    else:
                        del q[shift]
            break
        else:
            rem[m] = c
            del f[m]
    return quot, rem


def spoly(f, lf, g, lg):
    """S-vector of monic ``f`` and ``g`` whose leading terms share a position."""
    lcm = tuple([lf[0]] + [max(x, y) for x, y in zip(lf[1:], lg[1:])])
    sf = tuple([x - y for x, y in zip(lcm, lf)])
    sg = tuple([x - y for x, y in zip(lcm, lg)])
    out = {}
    for m, c in f.items():
        if m == lf:
            continue
        out[tuple([x + y for x, y in zip(m, sf)])] = c
    for m, c in g.items():
        if m == lg:
            continue
        t = tuple([x + y for x, y in zip(m, sg)])
        v = out.get(t)
        if v is None:
            out[t] = -c
        else:
            v = v - c
            if v:
                out[t] = v
            else:
                del out[t]
    return out
