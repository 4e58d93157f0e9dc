"""Pure Python row reduction and truncated convolution kernels.

Same signatures as the compiled module starforge._kernel; one of the two is
selected at import time by starforge.linalg.  Scalars are arbitrary exact
rational objects (Fraction or gmpy2.mpq, mixed with int zeros/ones); the
kernels only rely on ring arithmetic and exact comparison with 0.
"""

from __future__ import annotations

IMPL = "python"


def rref(rows):
    """Reduce a list of row vectors to canonical reduced row echelon form.

    Returns (rows, pivots): independent rows sorted by pivot column, each
    pivot normalized to 1 and cleared from every other row.  The input list
    is consumed (rows may be reused internally).
    """
    if not rows:
        return [], []
    width = len(rows[0])
    out = []        # list of (pivot_col, row)
    for row in rows:
        row = list(row)
        for pc, prow in out:
            f = row[pc]
            if f != 0:
                for j in range(pc, width):
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
        for pc, prow in out:
            f = prow[p]
            if f != 0:
                for j in range(p, width):
                    prow[j] = prow[j] - f * row[j]
        out.append((p, row))
    out.sort(key=lambda t: t[0])
    return [r for _, r in out], [p for p, _ in out]


def reduce_row(rows, pivots, v):
    """Residual of v after elimination against an rref basis."""
    v = list(v)
    width = len(v)
    for i in range(len(rows)):
        f = v[pivots[i]]
        if f != 0:
            row = rows[i]
            for j in range(pivots[i], width):
                v[j] = v[j] - f * row[j]
    return v


def reduce_row_coeffs(rows, pivots, v):
    """Residual of v plus the coefficients used on each basis row."""
    v = list(v)
    width = len(v)
    coeffs = [0] * len(rows)
    for i in range(len(rows)):
        f = v[pivots[i]]
        if f != 0:
            coeffs[i] = f
            row = rows[i]
            for j in range(pivots[i], width):
                v[j] = v[j] - f * row[j]
    return v, coeffs


def mul_trunc(a, b, n):
    """Truncated product of coefficient lists: degree < n."""
    out = [0] * n
    for i in range(min(len(a), n)):
        ai = a[i]
        if ai == 0:
            continue
        top = min(len(b), n - i)
        for j in range(top):
            bj = b[j]
            if bj != 0:
                out[i + j] = out[i + j] + ai * bj
    return out


def mul_bitrunc(a, b, d, n):
    """Truncated product of flat d*n grids, index e*n + k for x^e t^k."""
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
