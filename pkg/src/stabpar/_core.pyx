# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term kernels; mirrors ``_core_py`` function by function."""
from cpython.dict cimport PyDict_GetItem
from cpython.ref cimport Py_INCREF
from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM, PyTuple_GET_SIZE
from heapq import heappop, heappush


cdef inline tuple _tadd(tuple a, tuple b):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(a)
    cdef tuple r = PyTuple_New(n)
    cdef object v
    for i in range(n):
        v = <long>a[i] + <long>b[i]
        Py_INCREF(v)
        PyTuple_SET_ITEM(r, i, v)
    return r


cdef inline tuple _tsub(tuple a, tuple b):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(a)
    cdef tuple r = PyTuple_New(n)
    cdef object v
    for i in range(n):
        v = <long>a[i] - <long>b[i]
        Py_INCREF(v)
        PyTuple_SET_ITEM(r, i, v)
    return r


cdef inline bint _divides(tuple s, tuple t):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(s)
    if <long>s[0] != <long>t[0]:
        return False
    for i in range(1, n):
        if <long>s[i] > <long>t[i]:
            return False
    return True


def add(dict a, dict b):
    if len(a) < len(b):
        a, b = b, a
    cdef dict out = dict(a)
    cdef object m, c, v
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


def sub(dict a, dict b):
    cdef dict out = dict(a)
    cdef object m, c, v
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


def scale(dict a, c):
    if not c:
        return {}
    return {m: v * c for m, v in a.items()}


def mul(dict a, dict b):
    if len(a) > len(b):
        a, b = b, a
    cdef dict out = {}
    cdef tuple ma, mb, m
    cdef object ca, cb, v
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _tadd(ma, mb)
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


def mul_term(dict a, c, tuple shift):
    cdef dict out = {}
    cdef tuple m
    cdef object v
    for m, v in a.items():
        out[_tadd(m, shift)] = v * c
    return out


def divides(tuple s, tuple t):
    return _divides(s, t)


def normal_form(f, list leads, list basis, nkey, bint track):
    cdef dict g = dict(f)
    cdef list heap = [(nkey(m), m) for m in g]
    heap.sort()
    cdef dict rem = {}
    cdef list quot = [{} for _ in basis] if track else None
    cdef Py_ssize_t j, nb = len(basis)
    cdef tuple m, lm, shift, bm, t
    cdef object c, bc, v
    cdef dict b, q
    cdef bint found
    while heap:
        m = heappop(heap)[1]
        c = g.get(m)
        if c is None:
            continue
        found = False
        for j in range(nb):
            lm = <tuple>leads[j]
            if not _divides(lm, m):
                continue
            found = True
            shift = _tsub(m, lm)
            del g[m]
            b = <dict>basis[j]
            for bm, bc in b.items():
                if bm == lm:
                    continue
                t = _tadd(bm, shift)
                v = g.get(t)
                if v is None:
                    g[t] = -c * bc
                    heappush(heap, (nkey(t), t))
                else:
                    v = v - c * bc
                    if v:
                        g[t] = v
                    else:
                        del g[t]
            if track:
                q = <dict>quot[j]
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
        if not found:
            rem[m] = c
            del g[m]
    return quot, rem


def spoly(dict f, tuple lf, dict g, tuple lg):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(lf)
    cdef list lcm_l = [lf[0]]
    for i in range(1, n):
        lcm_l.append(max(<long>lf[i], <long>lg[i]))
    cdef tuple lcm = tuple(lcm_l)
    cdef tuple sf = _tsub(lcm, lf)
    cdef tuple sg = _tsub(lcm, lg)
    cdef dict out = {}
    cdef tuple m, t
    cdef object c, v
    for m, c in f.items():
        if m == lf:
            continue
        out[_tadd(m, sf)] = c
    for m, c in g.items():
        if m == lg:
            continue
        t = _tadd(m, sg)
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
