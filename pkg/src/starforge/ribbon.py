"""Truncated substitution automorphisms and the double-curve quotient.

A pair of surfaces glued along a curve to order p is encoded by pairs of
bivariate elements congruent mod t^p; regluing data is a substitution
x -> x + mu t with mu truncated at t^p.  Passing to the quotient by the
parameter leaves a ribbon: functions g + h z with z^2 = 0, and the
substitution descends to the first-order translation by the top
coefficient of mu.  Everything here is exact coefficient arithmetic in
K[x]/(x^D).

The substitution acts on canonical degree-bounded representatives, so
identities involving it are exact whenever the true x-degrees of all
intermediate products stay below the window: multiplicativity needs the
degrees of the two factors to fit together, and exact inversion needs
mu of x-degree at most one (a degree-stable substitution).  Outside the
window the truncation discards the overflow and the certificates fail.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContradictionError, UsageError
from .scalars import QQ
from .series import BiPoly, _xpoly_mul


def _xderiv(g, d):
    out = [QQ(0)] * d
    for e in range(1, d):
        out[e - 1] = g[e] * e
    return out


@dataclass
class ThetaAutomorphism:
    """x -> x + mu t on (K[x]/(x^D))[t]/(t^(p+1)); mu carries t-orders
    below p, so the substitution fixes t and is invertible."""

    p: int
    mu: BiPoly

    def __post_init__(self):
        if self.p < 1:
            raise UsageError("order must be positive")
        if not isinstance(self.mu, BiPoly) or self.mu.trunc != self.p:
            raise UsageError("datum must be bivariate at t-truncation p")


def theta_apply(a: ThetaAutomorphism, f: BiPoly) -> BiPoly:
    """Taylor form of the substitution: sum (mu t)^m / m! d^m f / dx^m."""
    if not isinstance(f, BiPoly) or f.trunc != a.p + 1 or f.xdeg != a.mu.xdeg:
        raise UsageError("argument truncation does not match the automorphism")
    mu = a.mu.lift(a.p + 1)
    mut = mu * BiPoly.monomial(0, 1, f.xdeg, a.p + 1)
    out = f
    term = f
    fact = QQ(1)
    power = BiPoly.one(f.xdeg, a.p + 1)
    for m in range(1, a.p + 1):
        term = term.dx()
        if term.is_zero():
            break
        power = power * mut
        fact = fact * m
        out = out + power * term * (QQ(1) / fact)
    return out


def theta_inverse(a: ThetaAutomorphism) -> ThetaAutomorphism:
    """The datum nu with theta_nu inverting theta_mu, by t-adic iteration
    of nu = -mu(x + nu t); the composite is asserted to be the identity
    on monomials.  The certificate can only pass when the composition
    stays below the x-window (mu of x-degree at most one always does)."""
    D, p = a.mu.xdeg, a.p
    nu = BiPoly(D, p, [-c for c in a.mu.coeffs])
    for _ in range(p):
        shifted = theta_apply(ThetaAutomorphism(p, nu), a.mu.lift(p + 1))
        nu = BiPoly(D, p, [-c for c in shifted.cut(p).coeffs])
    inv = ThetaAutomorphism(p, nu)
    for e in range(D):
        mono = BiPoly.monomial(e, 0, D, p + 1)
        if theta_apply(inv, theta_apply(a, mono)) != mono:
            raise ContradictionError("inverse substitution failed")
    return inv


@dataclass
class RibbonElement:
    """g + h z with z^2 = 0, coefficients in K[x]/(x^D)."""

    g: list
    h: list

    def __post_init__(self):
        self.g = [QQ(0) + c for c in self.g]
        self.h = [QQ(0) + c for c in self.h]
        if len(self.g) != len(self.h):
            raise UsageError("component degrees differ")

    def __add__(self, other):
        return RibbonElement(
            [x + y for x, y in zip(self.g, other.g)],
            [x + y for x, y in zip(self.h, other.h)],
        )

    def __mul__(self, other):
        d = len(self.g)
        g = _xpoly_mul(self.g, other.g, d)
        h = [
            x + y
            for x, y in zip(
                _xpoly_mul(self.g, other.h, d), _xpoly_mul(self.h, other.g, d)
            )
        ]
        return RibbonElement(g, h)

    def __eq__(self, other):
        return (
            isinstance(other, RibbonElement)
            and self.g == other.g
            and self.h == other.h
        )

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.g) and all(c == 0 for c in self.h)


def ribbon_quotient(p: int, pair) -> RibbonElement:
    """(a + alpha t^p, a + beta t^p)  ->  a(x, 0) + (beta - alpha) z.

    The two coordinates must agree below t^p; the map kills the ideal
    generated by the parameter and lands in the ribbon ring.
    """
    a1, a2 = pair[0], pair[1]
    for f in (a1, a2):
        if not isinstance(f, BiPoly) or f.trunc != p + 1:
            raise UsageError("coordinates must be truncated at p + 1")
    if a1.xdeg != a2.xdeg:
        raise UsageError("coordinate x-truncations differ")
    for k in range(p):
        if a1.tcoeff(k) != a2.tcoeff(k):
            raise UsageError("coordinates disagree below t^p")
    g = a1.restrict_c()
    top1, top2 = a1.tcoeff(p), a2.tcoeff(p)
    return RibbonElement(g, [y - x for x, y in zip(top1, top2)])


def ribbon_translation(tau, el: RibbonElement) -> RibbonElement:
    """First-order action g + h z -> g + (h + tau g') z."""
    d = len(el.g)
    if len(tau) != d:
        raise UsageError("translation degree mismatch")
    shift = _xpoly_mul(list(tau), _xderiv(el.g, d), d)
    return RibbonElement(el.g, [x + y for x, y in zip(el.h, shift)])


@dataclass
class CocycleReport:
    tau: list
    checked: int
    ok: bool


def induced_cocycle(p: int, mu1: BiPoly, mu2: BiPoly) -> CocycleReport:
    """The ribbon automorphism induced by the pair of substitutions.

    When the two data agree below t^(p-1), applying theta on each factor
    descends to the ribbon quotient, and the induced map is the
    translation by tau, the top coefficient of the difference.  Equality
    is verified on a spanning set of the glued ring: diagonal monomials
    below the top order and the one-sided top slices.
    """
    if p < 1:
        raise UsageError("order must be positive")
    for mu in (mu1, mu2):
        if not isinstance(mu, BiPoly) or mu.trunc != p:
            raise UsageError("data must be bivariate at t-truncation p")
    if mu1.xdeg != mu2.xdeg:
        raise UsageError("data x-truncations differ")
    for k in range(p - 1):
        if mu1.tcoeff(k) != mu2.tcoeff(k):
            raise UsageError("data disagree below t^(p-1)")
    D = mu1.xdeg
    tau = [y - x for x, y in zip(mu1.tcoeff(p - 1), mu2.tcoeff(p - 1))]
    th1 = ThetaAutomorphism(p, mu1)
    th2 = ThetaAutomorphism(p, mu2)

    pairs = []
    for e in range(D):
        for k in range(p):
            mono = BiPoly.monomial(e, k, D, p + 1)
            pairs.append((mono, mono))
        top = BiPoly.monomial(e, p, D, p + 1)
        zero = BiPoly.zero(D, p + 1)
        pairs.append((top, zero))
        pairs.append((zero, top))

    checked = 0
    for w1, w2 in pairs:
        lhs = ribbon_quotient(p, (theta_apply(th1, w1), theta_apply(th2, w2)))
        rhs = ribbon_translation(tau, ribbon_quotient(p, (w1, w2)))
        if lhs != rhs:
            raise ContradictionError(
                "induced map is not the expected translation",
                witness={"pair": (w1.coeffs, w2.coeffs)},
            )
        checked += 1
    return CocycleReport(tau, checked, True)
