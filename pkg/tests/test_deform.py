import pytest

from starforge import build, compare, deform, stars
from starforge.errors import ContradictionError, DegenerateExtension, UsageError
from starforge.linalg import nullspace
from starforge.scalars import QQ
from starforge.series import BiPoly, MultiGerm, TruncSeries


def planes3():
    return deform.make_planes_deformation([0, 1, 2], xdeg=3)


def diag_pi(d):
    return MultiGerm([BiPoly.monomial(0, 1, d.xdeg, q) for q in d.levels])


class TestPlanesModel:
    def test_matches_lines_configuration(self):
        d = planes3()
        assert deform.validate_deformation(d).ok
        assert deform.deform_spectrum(d).entries == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
        assert deform.deform_lambda(d) == (QQ(1), QQ(-2), QQ(1))

    def test_extraction_recovers_the_lines(self):
        d = planes3()
        rep = deform.extract_star(d)
        assert rep.oblate and rep.spectrum_match
        assert rep.component_ideal_ok == [True, True, True]
        assert rep.filtration_ok
        lines = stars.make_lines_star([0, 1, 2])
        assert rep.star.levels == lines.levels
        assert rep.star.space == lines.space

    @pytest.mark.parametrize(
        "slopes", [[0, 1], [0, 1, 2, 3], [QQ(1, 2), QQ(-1), QQ(3)]]
    )
    def test_extraction_for_other_slopes(self, slopes):
        d = deform.make_planes_deformation(slopes, xdeg=3)
        rep = deform.extract_star(d)
        lines = stars.make_lines_star(slopes)
        assert rep.star.levels == lines.levels
        assert rep.star.space == lines.space

    def test_pair_generator_constants(self):
        d = planes3()
        g = deform.deform_pair_generator(d, 0, 1)
        assert g.constants[0] == 0 and g.constants[1] == 1
        assert g.constants[2] == 2
        assert deform.deform_lambda_ratio_violations(d) == []

    def test_constants_agree_with_extracted_star(self):
        d = planes3()
        star = deform.extract_star(d, checks=False).star
        dt = deform.deform_unit_constants(d)
        st = stars.unit_constants(star)
        for key, consts in dt.constants.items():
            assert consts == st.constants[key]


class TestBasicElements:
    def test_pi_is_basic(self):
        d = planes3()
        out = deform.is_basic(d, diag_pi(d))
        assert isinstance(out, deform.BasicDecomposition)
        assert out.orders == (2, 2, 2)
        assert all(p == TruncSeries(2, [0, 1]) for p in out.polys)

    def test_mixed_member_is_refused_with_location(self):
        d = planes3()
        mixed = next(
            g
            for g in (d.germ(r) for r in d.space.rows)
            if any(
                g[0].get(e, k) != 0
                for e in range(1, d.xdeg)
                for k in range(g[0].trunc)
            )
        )
        out = deform.is_basic(d, mixed)
        assert isinstance(out, deform.BasicRefusal)
        assert out.xdeg >= 1
        assert out.coefficient != 0

    def test_completion_of_pi(self):
        d = planes3()
        assert deform.check_basic_completion(d, diag_pi(d)) == TruncSeries(2, [0, 1])

    def test_completion_is_forced(self):
        # members whose first n-1 branches are t-only: the last branch is
        # then t-only too, and the completing polynomial reads it off
        d = planes3()
        basis = [d.germ(r) for r in d.space.rows]
        eqs = []
        for b in range(2):
            for e in range(1, d.xdeg):
                for k in range(d.levels[b]):
                    eqs.append([g[b].get(e, k) for g in basis])
        combos = nullspace(eqs, len(basis))
        assert combos.dim > 0
        for c in combos.rows:
            v = None
            for ci, g in zip(c, basis):
                term = g * ci
                v = term if v is None else v + term
            last = deform.check_basic_completion(d, v)
            m = d.levels[-1]
            for k in range(m):
                assert v[2].get(0, k) == last.coeffs[k]
                for e in range(1, d.xdeg):
                    assert v[2].get(e, k) == 0

    def test_completion_refuses_mixed_prefix(self):
        d = planes3()
        mixed = next(
            g
            for g in (d.germ(r) for r in d.space.rows)
            if any(
                g[0].get(e, k) != 0
                for e in range(1, d.xdeg)
                for k in range(g[0].trunc)
            )
        )
        with pytest.raises(UsageError):
            deform.check_basic_completion(d, mixed)


class TestReciprocal:
    def test_unit_reciprocal(self):
        d = planes3()
        two = MultiGerm([2 * BiPoly.one(d.xdeg, q) for q in d.levels])
        r = deform.reciprocal_element(d, two)
        assert all(p.restrict_c()[0] == QQ(1, 2) for p in r.parts)

    def test_pi_reciprocal_dies_at_base_levels(self):
        # orders (1, 1, 1) give M = 3, and t^(M-1) is 0 at level 2
        d = planes3()
        assert deform.reciprocal_element(d, diag_pi(d)).is_zero()

    def test_zero_coordinate_rejected(self):
        d = planes3()
        v = deform.deform_pair_generator(d, 0, 1).germ
        with pytest.raises(UsageError):
            deform.reciprocal_element(d, v)


class TestIdealPowers:
    def test_frozen_expansions(self):
        d = planes3()
        exp = deform.ideal_power_expansion(d, diag_pi(d), 0)
        assert [list(P.coeffs) for P in exp] == [[0, 1]]
        u0 = deform.deform_pair_generator(d, 0, 1).germ
        exp2 = deform.ideal_power_expansion(d, u0, 0)
        assert [list(P.coeffs) for P in exp2] == [[0, 0], [1, 0]]

    def test_expansion_reconstructs(self):
        d = planes3()
        u0 = deform.deform_pair_generator(d, 0, 1).germ
        one = MultiGerm([BiPoly.one(d.xdeg, q) for q in d.levels])
        for v in (diag_pi(d), u0, u0 + diag_pi(d), diag_pi(d) * u0):
            exp = deform.ideal_power_expansion(d, v, 0)
            acc = one - one  # the zero product has an empty expansion
            power = one
            for P in exp:
                coeff = MultiGerm.diagonal(P.coeffs, d.levels, xdeg=d.xdeg)
                acc = acc + coeff * power
                power = power * u0
            assert acc == v

    def test_central_ideal_decomposition(self):
        d = planes3()
        for i in range(3):
            for j in range(3):
                if i != j:
                    assert deform.central_ideal_decomposition(d, i, j)


class TestExtension:
    def setup_method(self):
        self.d2 = deform.make_planes_deformation([0, 1], xdeg=3)
        self.beta_t = (BiPoly.one(3, 1), BiPoly(3, 1, [2, 0, 0]))

    def test_certificates(self):
        ext = deform.extend_deformation(self.d2, (1, 1), self.beta_t)
        assert ext.q_n == 2
        assert ext.dim_q == ext.q_n * self.d2.xdeg  # free over the plane
        assert ext.degeneracy[0] == QQ(1, 2)
        assert all(c == 0 for c in ext.degeneracy[1:])
        assert ext.top_power_zero and ext.flat and ext.free_completion

    def test_commutes_with_star_extension(self):
        ext = deform.extend_deformation(self.d2, (1, 1), self.beta_t)
        extracted = deform.extract_star(ext.presentation).star
        base_star = deform.extract_star(self.d2, checks=False).star
        step = build.ExtensionStep(
            (1, 1), (TruncSeries(1, [1]), TruncSeries(1, [2]))
        )
        direct = build.extend_star(base_star, step)
        assert extracted.levels == direct.levels
        assert extracted.space == direct.space

    def test_degenerate_refusal(self):
        beta = (BiPoly.one(3, 1), BiPoly.one(3, 1))
        with pytest.raises(DegenerateExtension):
            deform.extend_deformation(self.d2, (1, 1), beta)
        ext = deform.extend_deformation(
            self.d2, (1, 1), beta, allow_degenerate=True
        )
        assert all(c == 0 for c in ext.degeneracy)
        assert not ext.top_minus_one_nonzero

    def test_mixed_cofactor_is_not_a_star_germ(self):
        # an x-dependent unit passes every quotient certificate, but the
        # central slice of the result is not a star presentation
        beta = (
            BiPoly.one(3, 1),
            BiPoly(3, 1, [2, 0, 0]) + BiPoly.monomial(1, 0, 3, 1),
        )
        ext = deform.extend_deformation(self.d2, (1, 1), beta)
        assert ext.flat and ext.top_power_zero and ext.free_completion
        assert ext.degeneracy[0] == QQ(1, 2)
        with pytest.raises(ContradictionError):
            deform.extract_star(ext.presentation)

    def test_extended_model_keeps_its_laws(self):
        ext = deform.extend_deformation(self.d2, (1, 1), self.beta_t)
        d3 = ext.presentation
        assert deform.validate_deformation(d3).ok
        assert deform.deform_lambda_ratio_violations(d3) == []
        rep = deform.extract_star(d3)
        assert rep.oblate and rep.spectrum_match and rep.filtration_ok
