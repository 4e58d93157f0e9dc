"""Exact linear algebra over the rationals.

A LinearSpace is a subspace of QQ^ambient held in canonical reduced row
echelon form: pivots are 1, pivot columns are cleared, rows are ordered by
pivot column.  Two spans are equal as sets exactly when their canonical
representations are equal, which is how every space comparison in the
package is decided.

The row operations are delegated to the compiled kernel when it is
available; set STARFORGE_PURE=1 to force the pure Python fallback (results
are identical, only slower).
"""

from __future__ import annotations

import os

from .errors import UsageError
from .scalars import QQ

if os.environ.get("STARFORGE_PURE"):
    from . import _kernel_py as _K
else:
    try:
        from . import _kernel as _K  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as _K

KERNEL_IMPL = _K.IMPL

rref = _K.rref
reduce_row = _K.reduce_row
reduce_row_coeffs = _K.reduce_row_coeffs
mul_trunc = _K.mul_trunc
mul_bitrunc = _K.mul_bitrunc


def is_zero_vector(v) -> bool:
    return all(c == 0 for c in v)


def _exact(v):
    """Coerce int entries to exact rationals so pivot division stays exact."""
    return [QQ(c) if type(c) is int else c for c in v]


class LinearSpace:
    """Subspace of QQ^ambient in canonical RREF."""

    __slots__ = ("ambient", "rows", "pivots")

    def __init__(self, ambient: int, rows, pivots):
        self.ambient = ambient
        self.rows = rows
        self.pivots = pivots

    @classmethod
    def span(cls, ambient: int, vectors) -> "LinearSpace":
        vectors = [_exact(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise UsageError(
                    "vector of length %d in ambient %d" % (len(v), ambient)
                )
        rows, pivots = rref(vectors)
        return cls(ambient, rows, pivots)

    @classmethod
    def zero(cls, ambient: int) -> "LinearSpace":
        return cls(ambient, [], [])

    @classmethod
    def full(cls, ambient: int) -> "LinearSpace":
        rows = []
        for i in range(ambient):
            r = [0] * ambient
            r[i] = 1
            rows.append(r)
        return cls(ambient, rows, list(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v):
        if len(v) != self.ambient:
            raise UsageError("vector/ambient mismatch")
        return reduce_row(self.rows, self.pivots, v)

    def contains(self, v) -> bool:
        return is_zero_vector(self.reduce(v))

    def coords(self, v):
        """Coefficients of v on the basis rows; None if v is outside."""
        res, coeffs = reduce_row_coeffs(self.rows, self.pivots, v)
        if not is_zero_vector(res):
            return None
        return coeffs

    def add(self, other: "LinearSpace") -> "LinearSpace":
        self._check_ambient(other)
        return LinearSpace.span(self.ambient, self.rows + other.rows)

    def intersect(self, other: "LinearSpace") -> "LinearSpace":
        """Zassenhaus: rref [[A,A],[B,0]]; bottom-right blocks span A cap B."""
        self._check_ambient(other)
        n = self.ambient
        stacked = []
        for r in self.rows:
            stacked.append(list(r) + list(r))
        for r in other.rows:
            stacked.append(list(r) + [0] * n)
        rows, pivots = rref(stacked)
        inter = []
        for row, p in zip(rows, pivots):
            if p >= n:
                inter.append(row[n:])
        return LinearSpace.span(n, inter)

    def contains_space(self, other: "LinearSpace") -> bool:
        self._check_ambient(other)
        return all(self.contains(r) for r in other.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearSpace):
            return NotImplemented
        return (
            self.ambient == other.ambient
            and self.pivots == other.pivots
            and all(
                all(a == b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.rows, other.rows)
            )
        )

    def __repr__(self):
        return "LinearSpace(dim=%d, ambient=%d)" % (self.dim, self.ambient)

    def _check_ambient(self, other: "LinearSpace"):
        if self.ambient != other.ambient:
            raise UsageError("ambient mismatch")


class CoordTracker:
    """Coordinates with respect to a fixed generating list.

    Keeps the RREF of the block matrix [A | I].  For v in the row space of
    A, coords(v) recovers x with v = x A; when the generators are
    dependent the answer is canonical modulo the dependency relations, so
    equal inputs always give equal coordinates.
    """

    __slots__ = ("ambient", "count", "rows", "pivots")

    def __init__(self, ambient: int, generators):
        self.ambient = ambient
        self.count = len(generators)
        aug = []
        for i, r in enumerate(generators):
            a = _exact(r)
            if len(a) != ambient:
                raise UsageError("generator/ambient mismatch")
            tail = [0] * self.count
            tail[i] = 1
            aug.append(a + tail)
        self.rows, self.pivots = rref(aug)

    @property
    def dim(self) -> int:
        return sum(1 for p in self.pivots if p < self.ambient)

    def coords(self, v):
        if len(v) != self.ambient:
            raise UsageError("vector/ambient mismatch")
        w = reduce_row(self.rows, self.pivots, _exact(list(v)) + [0] * self.count)
        if any(c != 0 for c in w[: self.ambient]):
            return None
        return [-c for c in w[self.ambient :]]


def nullspace(equations, unknowns: int) -> LinearSpace:
    """Solutions x of E x = 0 for a list of equation rows of length unknowns."""
    rows, pivots = rref([_exact(e) for e in equations])
    pivot_set = set(pivots)
    basis = []
    for free in range(unknowns):
        if free in pivot_set:
            continue
        v = [0] * unknowns
        v[free] = 1
        for row, p in zip(rows, pivots):
            v[p] = -row[free]
        basis.append(v)
    return LinearSpace.span(unknowns, basis)


def solve_affine(equations, rhs, unknowns: int):
    """Solve E x = rhs.  Returns (particular, kernel) or None if unsolvable.

    The particular solution is canonical: free variables are 0 and the
    result is reduced against the kernel's RREF basis, so equal systems
    always give the same representative.
    """
    aug = []
    for e, b in zip(equations, rhs):
        aug.append(_exact(list(e) + [b]))
    rows, pivots = rref(aug)
    part = [0] * unknowns
    for row, p in zip(rows, pivots):
        if p == unknowns:
            return None
        part[p] = row[unknowns]
    ker = nullspace(equations, unknowns)
    part = ker.reduce(part)
    return part, ker
