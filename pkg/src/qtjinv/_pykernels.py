"""Pure-Python truncated series kernels over F_q.

Coefficient sequences are lists of field-element indices, leading term first.
``p == q`` selects modular arithmetic; otherwise the flattened ``q*q`` addition
and multiplication tables and the inverse table are used.
"""


def mul_trunc(a, b, n, p, q, addt, mult, invt):
    la, lb = len(a), len(b)
    out = [0] * n
    if p == q:
        for k in range(n):
            lo = k - lb + 1
            if lo < 0:
                lo = 0
            hi = k if k < la - 1 else la - 1
            s = 0
            for i in range(lo, hi + 1):
                s += a[i] * b[k - i]
            out[k] = s % p
        return out
    for k in range(n):
        lo = k - lb + 1
        if lo < 0:
            lo = 0
        hi = k if k < la - 1 else la - 1
        s = 0
        for i in range(lo, hi + 1):
            s = addt[s * q + mult[a[i] * q + b[k - i]]]
        out[k] = s
    return out


def inv_trunc(a, n, p, q, addt, mult, invt):
    # r_0 = 1/a_0, r_k = -(1/a_0) * sum_{i=1..k} a_i r_{k-i}
    la = len(a)
    out = [0] * n
    if n == 0:
        return out
    if p == q:
        c = pow(a[0], p - 2, p)
        out[0] = c
        for k in range(1, n):
            hi = k if k < la - 1 else la - 1
            s = 0
            for i in range(1, hi + 1):
                s += a[i] * out[k - i]
            out[k] = (-c * s) % p
        return out
    c = invt[a[0]]
    negc = mult[c * q + _neg_one(p, q, addt)]
    out[0] = c
    for k in range(1, n):
        hi = k if k < la - 1 else la - 1
        s = 0
        for i in range(1, hi + 1):
            s = addt[s * q + mult[a[i] * q + out[k - i]]]
        out[k] = mult[negc * q + s]
    return out


def _neg_one(p, q, addt):
    for x in range(q):
        if addt[x * q + 1] == 0:
            return x
    raise ValueError("malformed addition table")


def axpy(x, y, c, n, p, q, addt, mult):
    """Return the first ``n`` entries of ``x + c*y`` (sequences zero-padded)."""
    out = [0] * n
    lx, ly = len(x), len(y)
    if p == q:
        for k in range(n):
            s = x[k] if k < lx else 0
            if k < ly:
                s += c * y[k]
            out[k] = s % p
        return out
    for k in range(n):
        s = x[k] if k < lx else 0
        if k < ly:
            s = addt[s * q + mult[c * q + y[k]]]
        out[k] = s
    return out
