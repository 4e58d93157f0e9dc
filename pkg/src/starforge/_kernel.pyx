# cython: language_level=3
# cython: boundscheck=False
"""Compiled row reduction and truncated convolution kernels.

Mirror of starforge._kernel_py with typed loop counters; the scalar
arithmetic stays on exact rational Python objects, so results are
bit-identical to the pure version.
"""

IMPL = "cython"


def rref(list rows):
    cdef Py_ssize_t width, i, j, p, nout
    cdef list row, prow, out_rows, out_pivs
    cdef object f, inv
    if not rows:
        return [], []
    width = len(<list>rows[0])
    out_rows = []
    out_pivs = []
    for row_in in rows:
        row = list(row_in)
        nout = len(out_rows)
        for i in range(nout):
            p = <Py_ssize_t>out_pivs[i]
            f = row[p]
            if f != 0:
                prow = <list>out_rows[i]
                for j in range(p, width):
                    row[j] = row[j] - f * prow[j]
        p = -1
        for j in range(width):
            if row[j] != 0:
                p = j
                break
        if p < 0:
            continue
        inv = row[p]
        if inv != 1:
            for j in range(p, width):
                row[j] = row[j] / inv
        for i in range(nout):
            prow = <list>out_rows[i]
            f = prow[p]
            if f != 0:
                for j in range(p, width):
                    prow[j] = prow[j] - f * row[j]
        out_rows.append(row)
        out_pivs.append(p)
    order = sorted(range(len(out_pivs)), key=out_pivs.__getitem__)
    return [out_rows[i] for i in order], [out_pivs[i] for i in order]


def reduce_row(list rows, list pivots, v):
    cdef Py_ssize_t width, i, j, p
    cdef list vv, row
    cdef object f
    vv = list(v)
    width = len(vv)
    for i in range(len(rows)):
        p = <Py_ssize_t>pivots[i]
        f = vv[p]
        if f != 0:
            row = <list>rows[i]
            for j in range(p, width):
                vv[j] = vv[j] - f * row[j]
    return vv


def reduce_row_coeffs(list rows, list pivots, v):
    cdef Py_ssize_t width, i, j, p
    cdef list vv, row, coeffs
    cdef object f
    vv = list(v)
    width = len(vv)
    coeffs = [0] * len(rows)
    for i in range(len(rows)):
        p = <Py_ssize_t>pivots[i]
        f = vv[p]
        if f != 0:
            coeffs[i] = f
            row = <list>rows[i]
            for j in range(p, width):
                vv[j] = vv[j] - f * row[j]
    return vv, coeffs


def mul_trunc(list a, list b, Py_ssize_t n):
    cdef Py_ssize_t i, j, top, la, lb
    cdef list out
    cdef object ai, bj
    out = [0] * n
    la = len(a)
    lb = len(b)
    if la > n:
        la = n
    for i in range(la):
        ai = a[i]
        if ai == 0:
            continue
        top = n - i
        if lb < top:
            top = lb
        for j in range(top):
            bj = b[j]
            if bj != 0:
                out[i + j] = out[i + j] + ai * bj
    return out


def mul_bitrunc(list a, list b, Py_ssize_t d, Py_ssize_t n):
    cdef Py_ssize_t e1, e2, k1, k2, base1, base2, obase
    cdef list out
    cdef object c, bb
    out = [0] * (d * n)
    for e1 in range(d):
        base1 = e1 * n
        for k1 in range(n):
            c = a[base1 + k1]
            if c == 0:
                continue
            for e2 in range(d - e1):
                base2 = e2 * n
                obase = (e1 + e2) * n + k1
                for k2 in range(n - k1):
                    bb = b[base2 + k2]
                    if bb != 0:
                        out[obase + k2] = out[obase + k2] + c * bb
    return out
