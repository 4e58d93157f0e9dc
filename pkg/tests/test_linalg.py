import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starforge import _kernel_py
from starforge.errors import UsageError
from starforge.linalg import (
    KERNEL_IMPL,
    CoordTracker,
    LinearSpace,
    nullspace,
    solve_affine,
)
from starforge.scalars import QQ
from starforge.verify import naive_member, naive_rref

entries = st.integers(min_value=-6, max_value=6).map(QQ)


def matrices(rows, cols):
    return st.lists(
        st.lists(entries, min_size=cols, max_size=cols), min_size=0, max_size=rows
    )


class TestAgainstNaiveOracle:
    """LinearSpace backed by the elimination kernel vs an independent
    Fraction implementation with a different pivoting rule."""

    @given(matrices(5, 4))
    @settings(max_examples=80, deadline=None)
    def test_dim_matches(self, m):
        sp = LinearSpace.span(4, m)
        rows, pivots = naive_rref(m)
        assert sp.dim == len(rows)

    @given(matrices(4, 4), st.lists(entries, min_size=4, max_size=4))
    @settings(max_examples=80, deadline=None)
    def test_membership_matches(self, m, v):
        sp = LinearSpace.span(4, m)
        assert sp.contains(v) == naive_member(m, v)

    @given(matrices(4, 5), matrices(4, 5))
    @settings(max_examples=60, deadline=None)
    def test_intersection_matches(self, a, b):
        inter = LinearSpace.span(5, a).intersect(LinearSpace.span(5, b))
        # oracle: brute-force the intersection as a nullspace problem
        sa = LinearSpace.span(5, a)
        sb = LinearSpace.span(5, b)
        for r in inter.rows:
            assert sa.contains(r) and sb.contains(r)
        expected = sa.dim + sb.dim - sa.add(sb).dim
        assert inter.dim == expected


class TestLinearSpace:
    def test_canonical_rref(self):
        a = LinearSpace.span(3, [[1, 2, 3], [0, 1, 1]])
        b = LinearSpace.span(3, [[1, 1, 2], [2, 3, 5], [1, 2, 3]])
        assert a == b
        assert a.pivots == [0, 1]
        assert a.rows[0][1] == 0  # reduced above the second pivot

    def test_zero_and_full(self):
        assert LinearSpace.zero(4).dim == 0
        assert LinearSpace.full(3).dim == 3
        assert LinearSpace.full(3).contains([5, -1, 7])

    def test_coords(self):
        sp = LinearSpace.span(3, [[1, 0, 1], [0, 1, 1]])
        c = sp.coords([2, 3, 5])
        assert c is not None
        rebuilt = [
            sum(ci * rij for ci, rij in zip(c, col))
            for col in zip(*sp.rows)
        ]
        assert rebuilt == [2, 3, 5]
        assert sp.coords([1, 0, 0]) is None

    def test_ambient_guard(self):
        with pytest.raises(UsageError):
            LinearSpace.span(2, [[1, 2, 3]])
        with pytest.raises(UsageError):
            LinearSpace.zero(2).add(LinearSpace.zero(3))

    def test_contains_space(self):
        big = LinearSpace.span(3, [[1, 0, 0], [0, 1, 0]])
        small = LinearSpace.span(3, [[1, 1, 0]])
        assert big.contains_space(small)
        assert not small.contains_space(big)


class TestSolvers:
    def test_nullspace(self):
        # x + y + z = 0, y - z = 0
        ker = nullspace([[1, 1, 1], [0, 1, -1]], 3)
        assert ker.dim == 1
        v = ker.rows[0]
        assert v[0] + v[1] + v[2] == 0 and v[1] == v[2]

    def test_solve_affine_canonical(self):
        eqs = [[1, 1, 0], [0, 0, 1]]
        part, ker = solve_affine(eqs, [2, 3], 3)
        # same system written differently gives the same representative
        part2, _ = solve_affine([[2, 2, 0], [0, 0, 1], [1, 1, 1]], [4, 3, 5], 3)
        assert part == part2
        assert ker.dim == 1
        assert [part[0] + part[1], part[2]] == [2, 3]

    def test_solve_affine_unsolvable(self):
        assert solve_affine([[1, 1], [1, 1]], [1, 2], 2) is None

    @given(matrices(4, 4), st.lists(entries, min_size=4, max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_solve_affine_verifies(self, m, x):
        rhs = [sum(r[j] * x[j] for j in range(4)) for r in m]
        out = solve_affine(m, rhs, 4)
        assert out is not None
        part, ker = out
        for r, b in zip(m, rhs):
            assert sum(rj * pj for rj, pj in zip(r, part)) == b
        diff = [a - b for a, b in zip(x, part)]
        assert ker.contains(diff)


class TestCoordTracker:
    def test_coords_reconstruct(self):
        gens = [[1, 0, 1], [0, 1, 1], [1, 1, 2]]  # dependent
        tr = CoordTracker(3, gens)
        assert tr.dim == 2
        v = [3, 4, 7]
        c = tr.coords(v)
        rebuilt = [
            sum(ci * gij for ci, gij in zip(c, col)) for col in zip(*gens)
        ]
        assert rebuilt == v
        assert tr.coords([0, 0, 1]) is None

    def test_canonical_on_equal_inputs(self):
        gens = [[1, 1], [1, -1], [2, 0]]
        tr = CoordTracker(2, gens)
        assert tr.coords([2, 0]) == tr.coords([2, 0])


class TestKernelParity:
    """The compiled kernel and the pure fallback must agree exactly."""

    def test_impl_is_reported(self):
        assert KERNEL_IMPL in ("cython", "python")

    def test_rref_identical(self):
        compiled = pytest.importorskip("starforge._kernel")
        rng = random.Random(7)
        for _ in range(25):
            m = [
                [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(6)]
                for _ in range(5)
            ]
            r1, p1 = compiled.rref([list(r) for r in m])
            r2, p2 = _kernel_py.rref([list(r) for r in m])
            assert p1 == p2
            assert [[Fraction(c) for c in row] for row in r1] == [
                [Fraction(c) for c in row] for row in r2
            ]

    def test_mul_trunc_identical(self):
        compiled = pytest.importorskip("starforge._kernel")
        a = [Fraction(1, 3), Fraction(2), Fraction(-1, 7)]
        b = [Fraction(5), Fraction(0), Fraction(3, 2)]
        c1 = compiled.mul_trunc(a, b, 3)
        c2 = _kernel_py.mul_trunc(a, b, 3)
        assert [Fraction(x) for x in c1] == [Fraction(x) for x in c2]
