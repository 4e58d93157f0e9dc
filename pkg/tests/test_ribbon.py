import random

import pytest

from starforge import ribbon
from starforge.errors import ContradictionError, UsageError
from starforge.scalars import QQ
from starforge.series import BiPoly, MultiGerm


def rand_bipoly(rng, xdeg, trunc, max_e=None):
    top = xdeg if max_e is None else max_e + 1
    out = BiPoly.zero(xdeg, trunc)
    for e in range(top):
        for k in range(trunc):
            out = out + BiPoly.monomial(e, k, xdeg, trunc, coeff=rng.randint(-3, 3))
    return out


class TestThetaApply:
    def test_identity_for_zero_mu(self):
        a = ribbon.ThetaAutomorphism(2, BiPoly.zero(3, 2))
        f = BiPoly(3, 3, [1, 2, 0, 0, 1, 0, 5, 0, 0])
        assert ribbon.theta_apply(a, f) == f

    def test_constant_shift(self):
        # x -> x + t on K[x]/(x^3), t^3
        a = ribbon.ThetaAutomorphism(2, BiPoly.one(3, 2))
        fx2 = BiPoly.monomial(2, 0, 3, 3)
        out = ribbon.theta_apply(a, fx2)
        expected = (
            BiPoly.monomial(2, 0, 3, 3)
            + BiPoly.monomial(1, 1, 3, 3, coeff=2)
            + BiPoly.monomial(0, 2, 3, 3)
        )
        assert out == expected

    def test_fixes_t(self):
        a = ribbon.ThetaAutomorphism(2, BiPoly(3, 2, [1, 1, 2, 0, 0, 1]))
        t = BiPoly.monomial(0, 1, 3, 3)
        assert ribbon.theta_apply(a, t) == t

    def test_multiplicative_inside_the_window(self):
        rng = random.Random(1)
        for _ in range(60):
            D = rng.randint(3, 5)
            p = rng.randint(1, 3)
            a = ribbon.ThetaAutomorphism(p, rand_bipoly(rng, D, p))
            df = rng.randint(0, D - 2)
            f = rand_bipoly(rng, D, p + 1, max_e=df)
            g = rand_bipoly(rng, D, p + 1, max_e=D - 2 - df)
            lhs = ribbon.theta_apply(a, f * g)
            rhs = ribbon.theta_apply(a, f) * ribbon.theta_apply(a, g)
            assert lhs == rhs

    def test_multiplicativity_needs_the_window(self):
        # degrees 2 + 1 overflow x^3: theta(x^3) = 0 but the images do
        # not multiply to zero
        a = ribbon.ThetaAutomorphism(2, BiPoly.one(3, 2))
        f = BiPoly.monomial(2, 0, 3, 3)
        g = BiPoly.monomial(1, 0, 3, 3)
        assert ribbon.theta_apply(a, f * g).is_zero()
        assert not (ribbon.theta_apply(a, f) * ribbon.theta_apply(a, g)).is_zero()

    def test_mu_truncation_gate(self):
        with pytest.raises(UsageError):
            ribbon.ThetaAutomorphism(2, BiPoly.one(3, 3))
        a = ribbon.ThetaAutomorphism(2, BiPoly.one(3, 2))
        with pytest.raises(UsageError):
            ribbon.theta_apply(a, BiPoly.one(3, 2))  # f needs trunc p + 1


class TestThetaInverse:
    def test_linear_mu_always_inverts(self):
        rng = random.Random(2)
        for _ in range(40):
            D = rng.randint(3, 5)
            p = rng.randint(1, 3)
            a = ribbon.ThetaAutomorphism(p, rand_bipoly(rng, D, p, max_e=1))
            inv = ribbon.theta_inverse(a)
            f = rand_bipoly(rng, D, p + 1, max_e=1)
            assert ribbon.theta_apply(inv, ribbon.theta_apply(a, f)) == f

    def test_inverse_on_the_window_fixture(self):
        mu = BiPoly(4, 2, [0, 1, 0, 2, 0, 0, 0, 0])  # t + 2x
        a = ribbon.ThetaAutomorphism(2, mu)
        inv = ribbon.theta_inverse(a)
        x = BiPoly.monomial(1, 0, 4, 3)
        assert ribbon.theta_apply(inv, ribbon.theta_apply(a, x)) == x

    def test_high_degree_mu_can_fail_the_certificate(self):
        # frozen search result: this cubic datum pushes the composite
        # outside the x-window, so the identity check must refuse it
        mu = BiPoly(4, 2, [1, 1, -2, 0, 2, 1, 1, 0])
        a = ribbon.ThetaAutomorphism(2, mu)
        with pytest.raises(ContradictionError):
            ribbon.theta_inverse(a)


class TestRibbonRing:
    def test_arithmetic(self):
        r1 = ribbon.RibbonElement([1, 2, 0], [0, 1, 0])
        r2 = ribbon.RibbonElement([0, 1, 0], [3, 0, 0])
        s = r1 + r2
        assert s.g == [1, 3, 0] and s.h == [3, 1, 0]
        prod = r1 * r2
        # (g1 + h1 z)(g2 + h2 z) with z^2 = 0
        assert prod.g == [0, 1, 2]
        assert prod.h == [3, 6, 1]

    def test_z_squares_to_zero(self):
        z = ribbon.RibbonElement([0, 0, 0], [1, 0, 0])
        assert (z * z).is_zero()

    def test_quotient_map(self):
        D, p = 3, 2
        a = BiPoly(D, p + 1, [1, 0, 0, 2, 1, 0, 0, 0, 0])  # 1 + 2x + x t
        alpha = BiPoly.monomial(1, p, D, p + 1, coeff=3)
        beta = BiPoly.monomial(0, p, D, p + 1, coeff=5)
        el = ribbon.ribbon_quotient(p, MultiGerm([a + alpha, a + beta]))
        assert el.g == [1, 2, 0]
        assert el.h == [5, -3, 0]

    def test_quotient_congruence_gate(self):
        D, p = 3, 2
        a = BiPoly.one(D, p + 1)
        b = a + BiPoly.monomial(0, 1, D, p + 1)  # differs at t^1 already
        with pytest.raises(UsageError):
            ribbon.ribbon_quotient(p, MultiGerm([a, b]))

    def test_quotient_is_a_ring_map(self):
        # rq(uv) = rq(u) rq(v) for pairs agreeing below t^p
        D, p = 4, 2
        rng = random.Random(3)
        for _ in range(20):
            base1 = rand_bipoly(rng, D, p + 1)
            base2 = rand_bipoly(rng, D, p + 1)
            tops = [rand_bipoly(rng, D, 1) for _ in range(4)]

            def lift_top(w):
                out = BiPoly.zero(D, p + 1)
                for e in range(D):
                    out = out + BiPoly.monomial(e, p, D, p + 1, coeff=w.get(e, 0))
                return out

            u = MultiGerm([base1 + lift_top(tops[0]), base1 + lift_top(tops[1])])
            v = MultiGerm([base2 + lift_top(tops[2]), base2 + lift_top(tops[3])])
            lhs = ribbon.ribbon_quotient(p, u * v)
            rhs = ribbon.ribbon_quotient(p, u) * ribbon.ribbon_quotient(p, v)
            assert lhs.g == rhs.g and lhs.h == rhs.h

    def test_translation_is_a_ring_map(self):
        # the Leibniz rule on truncated representatives needs the product
        # of the g parts to stay below x^D, like every window law here
        tau = [2, -1, 0]
        r1 = ribbon.RibbonElement([1, 2, 0], [0, 1, 3])
        r2 = ribbon.RibbonElement([0, 1, 0], [3, 0, 1])
        lhs = ribbon.ribbon_translation(tau, r1 * r2)
        rhs = ribbon.ribbon_translation(tau, r1) * ribbon.ribbon_translation(
            tau, r2
        )
        assert lhs.g == rhs.g and lhs.h == rhs.h

    def test_translation_fixture(self):
        out = ribbon.ribbon_translation([2, 0, 0], ribbon.RibbonElement([1, 2, 0], [0, 1, 0]))
        assert out.g == [1, 2, 0]
        assert out.h == [4, 1, 0]


class TestCocycle:
    def test_frozen_example(self):
        D, p = 3, 2
        mu1 = BiPoly(D, p, [1, 0, 0, 1, 0, 0])
        mu2 = mu1 + BiPoly.monomial(1, p - 1, D, p, coeff=4)
        rep = ribbon.induced_cocycle(p, mu1, mu2)
        assert rep.ok
        assert rep.tau == [0, 4, 0]
        assert rep.checked > 0

    def test_tau_recovered_for_random_pairs(self):
        rng = random.Random(4)
        for _ in range(25):
            D = rng.randint(3, 5)
            p = rng.randint(2, 3)
            mu1 = rand_bipoly(rng, D, p)
            top = [rng.randint(-3, 3) for _ in range(D)]
            bump = BiPoly.zero(D, p)
            for e, c in enumerate(top):
                bump = bump + BiPoly.monomial(e, p - 1, D, p, coeff=c)
            rep = ribbon.induced_cocycle(p, mu1, mu1 + bump)
            assert rep.ok
            assert [QQ(c) for c in rep.tau] == [QQ(c) for c in top]

    def test_congruence_gate(self):
        D, p = 3, 2
        mu1 = BiPoly.zero(D, p)
        mu2 = BiPoly.one(D, p)  # differs already at t^0 with p - 1 = 1
        with pytest.raises(UsageError):
            ribbon.induced_cocycle(p, mu1, mu2)

    def test_law_on_explicit_elements(self):
        # rq(theta_1 x theta_2) agrees with translation after rq
        D, p = 4, 2
        mu1 = BiPoly(D, p, [0, 1, 1, 0, 0, 0, 0, 0])
        bump = BiPoly.monomial(0, p - 1, D, p, coeff=3)
        mu2 = mu1 + bump
        rep = ribbon.induced_cocycle(p, mu1, mu2)
        a1 = ribbon.ThetaAutomorphism(p, mu1)
        a2 = ribbon.ThetaAutomorphism(p, mu2)
        f = BiPoly(D, p + 1, [2, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0])  # 2 + x
        pair = MultiGerm([ribbon.theta_apply(a1, f), ribbon.theta_apply(a2, f)])
        lhs = ribbon.ribbon_quotient(p, pair)
        rhs = ribbon.ribbon_translation(
            rep.tau, ribbon.ribbon_quotient(p, MultiGerm([f, f]))
        )
        assert lhs.g == rhs.g and lhs.h == rhs.h
