import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starforge.errors import NotAUnit, UsageError
from starforge.scalars import QQ, scalar_from_string, scalar_to_string
from starforge.series import BiPoly, MultiGerm, TruncSeries

rationals = st.builds(
    lambda n, d: QQ(n) / QQ(d),
    st.integers(min_value=-50, max_value=50),
    st.integers(min_value=1, max_value=9),
)


class TestScalars:
    def test_exactness(self):
        assert QQ(1) / QQ(3) + QQ(1) / QQ(6) == QQ(1) / QQ(2)
        assert QQ(10) ** 20 + QQ(1) - QQ(10) ** 20 == QQ(1)

    @given(rationals)
    def test_string_round_trip(self, a):
        assert scalar_from_string(scalar_to_string(a)) == a

    def test_string_forms(self):
        assert scalar_to_string(QQ(-3) / QQ(4)) == "-3/4"
        assert scalar_to_string(QQ(5)) == "5"
        assert scalar_from_string("7/-14") == QQ(-1) / QQ(2)

    def test_bad_strings(self):
        for s in ["", "1/0", "x", "1.5", "1/2/3"]:
            with pytest.raises(UsageError):
                scalar_from_string(s)


def series(trunc):
    return st.lists(rationals, min_size=0, max_size=trunc).map(
        lambda cs: TruncSeries(trunc, cs)
    )


class TestTruncSeries:
    def test_truncation_is_enforced(self):
        a = TruncSeries(3, [1, 2, 3])
        b = TruncSeries(4, [1, 2, 3, 4])
        with pytest.raises(UsageError):
            a + b
        with pytest.raises(UsageError):
            a * b
        with pytest.raises(UsageError):
            TruncSeries(2, [1, 2, 3])

    def test_product_truncates(self):
        a = TruncSeries(3, [0, 1])  # t
        assert a * a == TruncSeries(3, [0, 0, 1])
        assert a * a * a == TruncSeries(3)

    @given(series(4), series(4), series(4))
    @settings(max_examples=60, deadline=None)
    def test_ring_laws(self, a, b, c):
        assert a * b == b * a
        assert (a + b) * c == a * c + b * c
        assert a * (b * c) == (a * b) * c

    @given(series(5))
    @settings(max_examples=60, deadline=None)
    def test_inverse(self, a):
        if a.is_unit():
            assert a * a.inverse() == TruncSeries.one(5)
        else:
            with pytest.raises(NotAUnit):
                a.inverse()

    def test_valuation_and_shift(self):
        a = TruncSeries(5, [0, 0, 3, 1])
        assert a.valuation() == 2
        assert a.shift_down(2) == TruncSeries(3, [3, 1])
        with pytest.raises(UsageError):
            a.shift_down(3)
        assert TruncSeries.zero(4).valuation() is None

    def test_lift_cut(self):
        a = TruncSeries(2, [1, 2])
        assert a.lift(4).cut(2) == a
        assert a.lift(4, tail=[5, 6]).coeffs == [1, 2, 5, 6]
        with pytest.raises(UsageError):
            a.cut(3)
        with pytest.raises(UsageError):
            a.lift(1)


def bipolys(xdeg, trunc):
    return st.lists(rationals, min_size=0, max_size=xdeg * trunc).map(
        lambda cs: BiPoly(xdeg, trunc, cs)
    )


class TestBiPoly:
    def test_grid_layout(self):
        # x t^2 lives at slot e*trunc + k
        a = BiPoly.monomial(1, 2, 2, 3)
        assert a.coeffs == [0, 0, 0, 0, 0, 1]
        assert a.get(1, 2) == 1
        assert a.tcoeff(2) == [0, 1]

    def test_nilpotents(self):
        x = BiPoly.monomial(1, 0, 3, 2)
        t = BiPoly.monomial(0, 1, 3, 2)
        assert (x * x * x).is_zero()
        assert (t * t).is_zero()
        assert (x * t) == BiPoly.monomial(1, 1, 3, 2)

    @given(bipolys(3, 3), bipolys(3, 3), bipolys(3, 3))
    @settings(max_examples=40, deadline=None)
    def test_ring_laws(self, a, b, c):
        assert a * b == b * a
        assert (a + b) * c == a * c + b * c
        assert a * (b * c) == (a * b) * c

    @given(bipolys(3, 3))
    @settings(max_examples=40, deadline=None)
    def test_inverse(self, a):
        if a.is_unit():
            assert a * a.inverse() == BiPoly.one(3, 3)
        else:
            with pytest.raises(NotAUnit):
                a.inverse()

    def test_restrict_c(self):
        a = BiPoly(2, 2, [1, 2, 3, 4])  # 1 + 2t + 3x + 4xt
        assert a.restrict_c() == [1, 3]

    def test_t_valuation_and_shift(self):
        a = BiPoly.monomial(2, 1, 3, 3) + BiPoly.monomial(0, 2, 3, 3)
        assert a.t_valuation() == 1
        b = a.shift_down_t(1)
        assert b == BiPoly.monomial(2, 0, 3, 2) + BiPoly.monomial(0, 1, 3, 2)
        with pytest.raises(UsageError):
            a.shift_down_t(2)

    def test_lift_cut_round_trip(self):
        a = BiPoly(2, 2, [1, 2, 3, 4])
        assert a.lift(4).cut(2) == a
        assert a.lift(4).trunc == 4

    def test_dx(self):
        # d/dx (x^2 t) = 2 x t
        a = BiPoly.monomial(2, 1, 3, 2)
        assert a.dx() == BiPoly.monomial(1, 1, 3, 2, coeff=2)
        assert a.dx().dx() == BiPoly.monomial(0, 1, 3, 2, coeff=2)
        assert a.dx().dx().dx().is_zero()

    def test_from_tseries(self):
        s = TruncSeries(3, [1, 2, 3])
        b = BiPoly.from_tseries(s, 2)
        assert b.tcoeff(0) == [1, 0]
        assert b.restrict_c() == [1, 0]
        assert b.get(0, 2) == 3


class TestMultiGerm:
    def test_per_branch_truncations(self):
        g = MultiGerm([TruncSeries(2, [1]), TruncSeries(3, [0, 1])])
        h = g * g
        assert h[0] == TruncSeries(2, [1])
        assert h[1] == TruncSeries(3, [0, 0, 1])

    def test_diagonal(self):
        g = MultiGerm.diagonal([1, 2], [2, 3])
        assert g[0] == TruncSeries(2, [1, 2])
        assert g[1] == TruncSeries(3, [1, 2, 0])
        b = MultiGerm.diagonal([1, 2], [2], xdeg=2)
        assert isinstance(b[0], BiPoly)
        assert b[0].restrict_c() == [1, 0]

    def test_arithmetic(self):
        g = MultiGerm.diagonal([0, 1], [3, 3])
        assert (g - g).is_zero()
        assert (g * QQ(2))[0] == TruncSeries(3, [0, 2])
        assert len(g) == 2
