# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled truncated series kernels over F_q (same contract as _pykernels)."""

from libc.stdlib cimport malloc, free


cdef long* _to_c(seq, Py_ssize_t n) except NULL:
    cdef long* buf = <long*> malloc((n if n > 0 else 1) * sizeof(long))
    cdef Py_ssize_t i
    if buf == NULL:
        raise MemoryError()
    for i in range(n):
        buf[i] = seq[i]
    return buf


cdef list _to_list(long* buf, Py_ssize_t n):
    cdef Py_ssize_t i
    cdef list out = [0] * n
    for i in range(n):
        out[i] = buf[i]
    return out


def mul_trunc(a, b, Py_ssize_t n, long p, long q, addt, mult, invt):
    cdef Py_ssize_t la = len(a), lb = len(b), k, i, lo, hi
    cdef long s
    cdef long* ca = _to_c(a, la)
    cdef long* cb = _to_c(b, lb)
    cdef long* out = <long*> malloc((n if n > 0 else 1) * sizeof(long))
    cdef long* at = NULL
    cdef long* mt = NULL
    try:
        if p == q:
            for k in range(n):
                lo = k - lb + 1
                if lo < 0:
                    lo = 0
                hi = k if k < la - 1 else la - 1
                s = 0
                for i in range(lo, hi + 1):
                    s += ca[i] * cb[k - i]
                    if s > 0x3FFFFFFFFFFF:
                        s %= p
                out[k] = s % p
        else:
            at = _to_c(addt, q * q)
            mt = _to_c(mult, q * q)
            for k in range(n):
                lo = k - lb + 1
                if lo < 0:
                    lo = 0
                hi = k if k < la - 1 else la - 1
                s = 0
                for i in range(lo, hi + 1):
                    s = at[s * q + mt[ca[i] * q + cb[k - i]]]
                out[k] = s
        return _to_list(out, n)
    finally:
        free(ca)
        free(cb)
        free(out)
        if at != NULL:
            free(at)
        if mt != NULL:
            free(mt)


cdef long _powmod(long b, long e, long m):
    cdef long r = 1
    b %= m
    while e > 0:
        if e & 1:
            r = (r * b) % m
        b = (b * b) % m
        e >>= 1
    return r


def inv_trunc(a, Py_ssize_t n, long p, long q, addt, mult, invt):
    cdef Py_ssize_t la = len(a), k, i, hi
    cdef long s, c, negc, x
    cdef long* ca = _to_c(a, la)
    cdef long* out = <long*> malloc((n if n > 0 else 1) * sizeof(long))
    cdef long* at = NULL
    cdef long* mt = NULL
    try:
        if n == 0:
            return []
        if p == q:
            c = _powmod(ca[0], p - 2, p)
            out[0] = c
            for k in range(1, n):
                hi = k if k < la - 1 else la - 1
                s = 0
                for i in range(1, hi + 1):
                    s += ca[i] * out[k - i]
                    if s > 0x3FFFFFFFFFFF:
                        s %= p
                s %= p
                out[k] = ((p - c) * s) % p
        else:
            at = _to_c(addt, q * q)
            mt = _to_c(mult, q * q)
            c = invt[ca[0]]
            negc = 0
            for x in range(q):
                if at[x * q + c] == 0:
                    negc = x
                    break
            out[0] = c
            for k in range(1, n):
                hi = k if k < la - 1 else la - 1
                s = 0
                for i in range(1, hi + 1):
                    s = at[s * q + mt[ca[i] * q + out[k - i]]]
                out[k] = mt[negc * q + s]
        return _to_list(out, n)
    finally:
        free(ca)
        free(out)
        if at != NULL:
            free(at)
        if mt != NULL:
            free(mt)


def axpy(x, y, long c, Py_ssize_t n, long p, long q, addt, mult):
    cdef Py_ssize_t lx = len(x), ly = len(y), k
    cdef long s
    cdef list out = [0] * n
    if p == q:
        for k in range(n):
            s = x[k] if k < lx else 0
            if k < ly:
                s += c * <long> y[k]
            out[k] = s % p
        return out
    for k in range(n):
        s = x[k] if k < lx else 0
        if k < ly:
            s = addt[s * q + mult[c * q + <long> y[k]]]
        out[k] = s
    return out
