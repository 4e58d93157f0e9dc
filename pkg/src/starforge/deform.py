"""Bivariate local models of fragmented deformations.

A fragmented deformation spreads a multiple curve out into n smooth
surfaces glued along a common curve C; near a point of C each branch ring
is (K[x]/(x^D))[t]/(t^q_i), with x running along C and t the deformation
parameter.  The image algebra B of the local ring inside the product of
these branch rings is a faithful model, exactly as in the star case, and
every invariant of the star theory has a bivariate analogue computed
here: spectrum, lambda, pair generators with their unit constants (whose
restriction to C turns out to be scalar), basic elements, and the
extension construction by a quotient with a marked parameter action.

The t-only slice of the algebra is itself the model of an oblate n-star;
extraction of that star and the certificates feeding the flatness of the
projection onto it live here as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    ContradictionError,
    DegenerateExtension,
    DegenerateInput,
    InvalidDeformation,
    UsageError,
)
from .linalg import CoordTracker, LinearSpace, nullspace, solve_affine
from .scalars import QQ
from .series import BiPoly, MultiGerm, TruncSeries, _xpoly_inverse, _xpoly_mul
from .stars import (
    SpectrumMatrix,
    StarPresentation,
    UnitConstantTable,
    ValidationReport,
    is_oblate,
    pair_generator,
    spectrum,
    validate_star,
)


class DeformPresentation:
    """Span model of the local ring of a fragmented deformation."""

    def __init__(self, xdeg: int, levels, space: LinearSpace):
        if xdeg < 1:
            raise UsageError("x-truncation must be positive")
        self.xdeg = int(xdeg)
        self.levels = tuple(int(q) for q in levels)
        if any(q < 1 for q in self.levels):
            raise UsageError("levels must be positive")
        self.n = len(self.levels)
        self.offsets = []
        off = 0
        for q in self.levels:
            self.offsets.append(off)
            off += self.xdeg * q
        self.ambient = off
        if space.ambient != self.ambient:
            raise UsageError("space ambient does not match levels")
        self.space = space
        self._spectrum = None
        self._basis_germs = None

    @classmethod
    def from_rows(cls, xdeg, levels, rows) -> "DeformPresentation":
        ambient = xdeg * sum(levels)
        return cls(xdeg, levels, LinearSpace.span(ambient, rows))

    def slot(self, i: int, e: int, k: int) -> int:
        """Flat index of the x^e t^k coefficient on branch i."""
        return self.offsets[i] + e * self.levels[i] + k

    # -- germ <-> vector ---------------------------------------------------

    def embed(self, germ: MultiGerm):
        if len(germ) != self.n:
            raise UsageError("germ has %d parts, model has %d" % (len(germ), self.n))
        vec = []
        for part, q in zip(germ.parts, self.levels):
            if (
                not isinstance(part, BiPoly)
                or part.trunc != q
                or part.xdeg != self.xdeg
            ):
                raise UsageError("germ truncation does not match the model")
            vec.extend(part.coeffs)
        return vec

    def germ(self, vec) -> MultiGerm:
        parts = []
        for off, q in zip(self.offsets, self.levels):
            parts.append(BiPoly(self.xdeg, q, vec[off : off + self.xdeg * q]))
        return MultiGerm(parts)

    def reduce_germ(self, germ: MultiGerm) -> MultiGerm:
        parts = []
        for part, q in zip(germ.parts, self.levels):
            if part.trunc < q:
                raise UsageError("germ truncation below model level")
            parts.append(part.cut(q))
        return MultiGerm(parts)

    def one(self) -> MultiGerm:
        return MultiGerm([BiPoly.one(self.xdeg, q) for q in self.levels])

    def pi(self) -> MultiGerm:
        return MultiGerm([BiPoly.monomial(0, 1, self.xdeg, q) for q in self.levels])

    def x(self) -> MultiGerm:
        return MultiGerm([BiPoly.monomial(1, 0, self.xdeg, q) for q in self.levels])

    def basis_germs(self):
        if self._basis_germs is None:
            self._basis_germs = [self.germ(r) for r in self.space.rows]
        return self._basis_germs

    @property
    def dim(self) -> int:
        return self.space.dim

    def is_member(self, germ: MultiGerm) -> bool:
        return self.space.contains(self.embed(self.reduce_germ(germ)))

    # -- headroom ----------------------------------------------------------

    def lifted(self, extra) -> "DeformPresentation":
        """Faithful re-presentation at levels q_i + extra_i; the image at
        the higher levels is spanned by lifts of the basis together with
        every tail x^e t^k e_i with k >= q_i."""
        if isinstance(extra, int):
            extra = (extra,) * self.n
        extra = tuple(int(e) for e in extra)
        if len(extra) != self.n or any(e < 0 for e in extra):
            raise UsageError("bad headroom")
        if not any(extra):
            return self
        new_levels = tuple(q + e for q, e in zip(self.levels, extra))
        D = self.xdeg
        ambient = D * sum(new_levels)
        new_offsets, off = [], 0
        for q in new_levels:
            new_offsets.append(off)
            off += D * q
        rows = []
        for r in self.space.rows:
            v = [0] * ambient
            for i, q in enumerate(self.levels):
                for e in range(D):
                    src = self.offsets[i] + e * q
                    dst = new_offsets[i] + e * new_levels[i]
                    v[dst : dst + q] = r[src : src + q]
            rows.append(v)
        for i, q in enumerate(self.levels):
            for e in range(D):
                for k in range(q, new_levels[i]):
                    v = [0] * ambient
                    v[new_offsets[i] + e * new_levels[i] + k] = 1
                    rows.append(v)
        return DeformPresentation(D, new_levels, LinearSpace.span(ambient, rows))

    def __repr__(self):
        return "DeformPresentation(n=%d, xdeg=%d, levels=%s, dim=%d)" % (
            self.n,
            self.xdeg,
            self.levels,
            self.dim,
        )


# -- constructors ----------------------------------------------------------


def make_planes_deformation(slopes, xdeg: int = 4) -> DeformPresentation:
    """n planes y = c_i t in (x, y, t)-space, glued along the x-axis.

    The model is spanned by the images of the monomials x^e t^a y^b with
    a + b <= n - 2 and e < xdeg under f -> (f(x, c_i t, t))_i; all contact
    orders equal 1 and every level is n - 1.
    """
    slopes = [QQ(c) if type(c) is int else c for c in slopes]
    n = len(slopes)
    if n < 2:
        raise DegenerateInput("need at least two planes")
    if len({(c.numerator, c.denominator) for c in slopes}) != n:
        raise DegenerateInput("slopes must be pairwise distinct")
    q = n - 1
    ambient = n * xdeg * q
    rows = []
    for e in range(xdeg):
        for a in range(q):
            for b in range(q - a):
                v = [0] * ambient
                for i, c in enumerate(slopes):
                    v[i * xdeg * q + e * q + a + b] = c**b
                rows.append(v)
    return DeformPresentation.from_rows(xdeg, (q,) * n, rows)


# -- spectrum and validation -----------------------------------------------


def deform_spectrum(d: DeformPresentation) -> SpectrumMatrix:
    """Contact matrix of the branches, read off the basis exactly as in
    the star case, but comparing full x-slices at each t-order."""
    if d._spectrum is not None:
        return d._spectrum
    n, D = d.n, d.xdeg
    entries = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            cap = min(d.levels[i], d.levels[j])
            p = cap
            for row in d.space.rows:
                for k in range(p):
                    if any(
                        row[d.slot(i, e, k)] != row[d.slot(j, e, k)]
                        for e in range(D)
                    ):
                        p = k
                        break
                if p == 0:
                    break
            entries[i][j] = entries[j][i] = p
    d._spectrum = SpectrumMatrix(entries)
    return d._spectrum


def validate_deformation(
    d: DeformPresentation, closure: bool = True
) -> ValidationReport:
    rep = ValidationReport()
    rep.add("has-one", d.is_member(d.one()))
    rep.add("has-pi", d.is_member(d.pi()))

    # all branches must restrict to the same function on C
    bad = None
    for r, row in enumerate(d.space.rows):
        for e in range(d.xdeg):
            c0 = row[d.slot(0, e, 0)]
            for i in range(1, d.n):
                if row[d.slot(i, e, 0)] != c0:
                    bad = {"row": r, "component": i, "xdeg": e}
                    break
            if bad:
                break
        if bad:
            break
    rep.add("central-agreement", bad is None, bad)

    if closure:
        bad = None
        germs = d.basis_germs()
        for a in range(len(germs)):
            for b in range(a, len(germs)):
                if not d.is_member(germs[a] * germs[b]):
                    bad = {"rows": (a, b)}
                    break
            if bad:
                break
        rep.add("product-closure", bad is None, bad)

    spec = deform_spectrum(d)
    bad = None
    for i in range(d.n):
        for j in range(d.n):
            if i != j and spec.entries[i][j] < 1:
                bad = {"pair": (i, j)}
                break
        if bad:
            break
    rep.add("positive-contact", bad is None, bad)

    sums = spec.row_sums()
    bad = None
    for i, q in enumerate(d.levels):
        if sums[i] != q:
            bad = {"component": i, "level": q, "row_sum": sums[i]}
            break
    rep.add("level-consistency", bad is None, bad)

    viols = spec.ultrametric_violations()
    rep.add("ultrametric", not viols, {"triples": viols} if viols else None)

    mx = max(d.levels)
    mult = sum(1 for q in d.levels if q == mx)
    rep.add("top-level-multiplicity", mult >= 2, {"count": mult})
    return rep


# -- lambda ----------------------------------------------------------------


def deform_lambda(d: DeformPresentation):
    """The scalar hyperplane vector of the top t-slice.

    The members with every coordinate of t-order q_i - 1 form a free
    K[x]/(x^D)-module of rank n - 1 (K-dimension (n-1) D); the linear form
    cutting it out of the rank-n coefficient module has scalar entries,
    recovered here as the common nullspace over all x-slices.
    """
    rows = []
    for i in range(d.n):
        for e in range(d.xdeg):
            v = [0] * d.ambient
            v[d.slot(i, e, d.levels[i] - 1)] = 1
            rows.append(v)
    J = d.space.intersect(LinearSpace.span(d.ambient, rows))
    want = (d.n - 1) * d.xdeg
    if J.dim != want:
        raise InvalidDeformation(
            "top slice meets the ring in dimension %d, expected %d" % (J.dim, want)
        )
    eqs = []
    for row in J.rows:
        for e in range(d.xdeg):
            eqs.append(
                [row[d.slot(i, e, d.levels[i] - 1)] for i in range(d.n)]
            )
    sols = nullspace(eqs, d.n)
    if sols.dim != 1:
        raise InvalidDeformation("hyperplane normal is not unique")
    lam = sols.rows[0]
    if any(c == 0 for c in lam):
        raise InvalidDeformation("hyperplane normal has a zero coordinate")
    first = lam[0]
    return tuple(c / first for c in lam)


# -- pair generators and unit constants ------------------------------------


@dataclass
class DeformPairGenerator:
    i: int
    j: int
    germ: MultiGerm          # at the base levels
    lifted_germ: MultiGerm   # at one level of headroom
    units: dict              # m -> BiPoly cofactor of t^p_im, m != i
    constants: dict          # m -> scalar restriction to C; i -> 0, j -> 1


def deform_pair_generator(d: DeformPresentation, i: int, j: int) -> DeformPairGenerator:
    """The normalized generator u_ij: zero on branch i, exactly t^p_ij on
    branch j, a unit times t^p_im elsewhere.

    The restriction to C of each cofactor is asserted to be a scalar (an
    x-free constant), which is a theorem of the theory, not an input
    assumption; violation raises InvalidDeformation.
    """
    if i == j:
        raise UsageError("pair generator needs two distinct branches")
    p = deform_spectrum(d).entries
    high = d.lifted(1)
    basis = high.space.rows
    dim = len(basis)
    eqs, rhs = [], []
    for e in range(high.xdeg):
        for k in range(high.levels[i]):
            eqs.append([basis[c][high.slot(i, e, k)] for c in range(dim)])
            rhs.append(QQ(0))
    for e in range(high.xdeg):
        for k in range(high.levels[j]):
            eqs.append([basis[c][high.slot(j, e, k)] for c in range(dim)])
            rhs.append(QQ(1) if (e == 0 and k == p[i][j]) else QQ(0))
    sol = solve_affine(eqs, rhs, dim)
    if sol is None:
        raise InvalidDeformation(
            "no normalized generator for pair (%d, %d)" % (i, j)
        )
    coeffs, _ = sol
    vec = [0] * high.ambient
    for c, w in enumerate(coeffs):
        if w != 0:
            row = basis[c]
            for k in range(high.ambient):
                vec[k] = vec[k] + w * row[k]
    germ = high.germ(vec)
    units, constants = {}, {i: QQ(0)}
    for m in range(d.n):
        if m == i:
            continue
        part = germ[m]
        val = part.t_valuation()
        if val != p[i][m]:
            raise InvalidDeformation(
                "generator for (%d, %d) has t-order %s on branch %d, expected %d"
                % (i, j, val, m, p[i][m])
            )
        unit = part.shift_down_t(p[i][m])
        if not unit.is_unit():
            raise InvalidDeformation("generator cofactor is not a unit")
        lead = unit.tcoeff(0)
        if any(c != 0 for c in lead[1:]):
            raise InvalidDeformation(
                "cofactor restriction to C is not constant on branch %d" % m,
            )
        units[m] = unit
        constants[m] = lead[0]
    return DeformPairGenerator(i, j, d.reduce_germ(germ), germ, units, constants)


def deform_unit_constants(d: DeformPresentation) -> UnitConstantTable:
    """The scalars a_ij^(m); same table shape and laws as the star case."""
    table = {}
    for i in range(d.n):
        for j in range(d.n):
            if i != j:
                table[(i, j)] = deform_pair_generator(d, i, j).constants
    return UnitConstantTable(d.n, table)


def deform_lambda_ratio_violations(d: DeformPresentation):
    lam = deform_lambda(d)
    table = deform_unit_constants(d)
    out = []
    for i in range(d.n):
        for j in range(d.n):
            if i == j:
                continue
            prod = QQ(1)
            for m in range(d.n):
                if m not in (i, j):
                    prod = prod * table.get(m, i, j)
            if lam[i] / lam[j] != -prod:
                out.append((i, j))
    return out


# -- basic elements --------------------------------------------------------


@dataclass
class BasicDecomposition:
    orders: tuple
    polys: tuple             # one TruncSeries P_i per branch, truncated at m_i

    def germ(self, d: DeformPresentation) -> MultiGerm:
        parts = []
        for P, q in zip(self.polys, d.levels):
            parts.append(BiPoly.from_tseries(P.lift(q) if P.trunc < q else P.cut(q), d.xdeg))
        return MultiGerm(parts)


@dataclass
class BasicRefusal:
    branch: int
    xdeg: int
    torder: int
    coefficient: object


def is_basic(d: DeformPresentation, v: MultiGerm, orders=None):
    """Whether v is congruent, branch by branch, to polynomials in the
    respective parameters, modulo t^m_i.

    Returns a BasicDecomposition or a BasicRefusal naming the first mixed
    coefficient in the way.  The default orders are the levels.
    """
    if not d.is_member(v):
        raise UsageError("not a member of the algebra")
    if orders is None:
        orders = d.levels
    orders = tuple(int(m) for m in orders)
    if len(orders) != d.n or any(m < 1 for m in orders):
        raise UsageError("bad order vector")
    red = d.reduce_germ(v)
    polys = []
    for i in range(d.n):
        part = red[i]
        m = min(orders[i], d.levels[i])
        for e in range(1, d.xdeg):
            for k in range(m):
                c = part.get(e, k)
                if c != 0:
                    return BasicRefusal(i, e, k, c)
        polys.append(TruncSeries(orders[i], [part.get(0, k) for k in range(m)]))
    return BasicDecomposition(orders, tuple(polys))


def check_basic_completion(d: DeformPresentation, v: MultiGerm):
    """Branches 1..n-1 basic at their levels force the last one basic too;
    returns the completing polynomial P_n."""
    if not d.is_member(v):
        raise UsageError("not a member of the algebra")
    red = d.reduce_germ(v)
    for i in range(d.n - 1):
        part = red[i]
        for e in range(1, d.xdeg):
            for k in range(d.levels[i]):
                if part.get(e, k) != 0:
                    raise UsageError(
                        "branch %d is not basic at its level" % i
                    )
    last = red[d.n - 1]
    q = d.levels[d.n - 1]
    for e in range(1, d.xdeg):
        for k in range(q):
            c = last.get(e, k)
            if c != 0:
                raise ContradictionError(
                    "completion failed: mixed coefficient survives",
                    witness={"xdeg": e, "torder": k, "coefficient": c},
                )
    return TruncSeries(q, [last.get(0, k) for k in range(q)])


def central_ideal_decomposition(d: DeformPresentation, i: int, j: int) -> bool:
    """Span equality I_C = (u_ij) + (pi) at one level of headroom.

    I_C is the ideal of the central curve: members whose restriction to C
    vanishes, equivalently every coordinate has positive t-order.
    """
    high = d.lifted(1)
    rows = []
    for m in range(d.n):
        for e in range(d.xdeg):
            for k in range(1, high.levels[m]):
                v = [0] * high.ambient
                v[high.slot(m, e, k)] = 1
                rows.append(v)
    central = high.space.intersect(LinearSpace.span(high.ambient, rows))
    u = deform_pair_generator(d, i, j).lifted_germ
    gen_rows = [high.embed(u * g) for g in high.basis_germs()]
    pi = high.pi()
    gen_rows += [high.embed(pi * g) for g in high.basis_germs()]
    return LinearSpace.span(high.ambient, gen_rows) == central


def ideal_power_expansion(d: DeformPresentation, v: MultiGerm, i: int, max_terms=None):
    """Coefficients P_j with v congruent to sum of P_j(pi) u_(i)^j.

    u_(i) is the normalized generator of the ideal of the i-th component;
    P_j is read off the i-th coordinate of the j-th remainder, which must
    be t-only, and the remainder is then divided by u_(i) inside the
    model.  Minimal-degree coefficients come out of the normalization of
    the division solver.  Stops when the remainder is zero.
    """
    if not d.is_member(v):
        raise UsageError("not a member of the algebra")
    anchor = 0 if i else 1
    u = deform_pair_generator(d, i, anchor).germ
    basis = d.space.rows
    dim = len(basis)
    gamma = d.reduce_germ(v)
    coeffs = []
    limit = sum(d.levels) if max_terms is None else max_terms
    for _ in range(limit + 1):
        if gamma.is_zero():
            return coeffs
        part = gamma[i]
        for e in range(1, d.xdeg):
            for k in range(d.levels[i]):
                if part.get(e, k) != 0:
                    raise ContradictionError(
                        "remainder is not basic on the anchor branch",
                        witness={"term": len(coeffs), "xdeg": e, "torder": k},
                    )
        P = TruncSeries(d.levels[i], [part.get(0, k) for k in range(d.levels[i])])
        diag = MultiGerm.diagonal(P.coeffs, d.levels, xdeg=d.xdeg)
        rem = gamma - diag
        # exact division by u_(i) inside the model
        target = d.embed(rem)
        eqs = [
            [d.embed(d.germ(basis[c]) * u)[s] for c in range(dim)]
            for s in range(d.ambient)
        ]
        sol = solve_affine(eqs, target, dim)
        if sol is None:
            raise ContradictionError(
                "remainder is not a multiple of the component generator",
                witness={"term": len(coeffs)},
            )
        coeffs.append(P)
        w, _ = sol
        vec = [0] * d.ambient
        for c, wt in enumerate(w):
            if wt != 0:
                row = basis[c]
                for s in range(d.ambient):
                    vec[s] = vec[s] + wt * row[s]
        gamma = d.germ(vec)
    raise ContradictionError("expansion did not terminate")


def reciprocal_element(d: DeformPresentation, v: MultiGerm) -> MultiGerm:
    """From coordinates alpha_i t^m_i (alpha_i units) to the member with
    coordinates alpha_i^(-1) t^(M - m_i), M the sum of the orders."""
    red = d.reduce_germ(v)
    ms, units = [], []
    for i in range(d.n):
        part = red[i]
        m = part.t_valuation()
        if m is None:
            raise UsageError("zero coordinate has no unit-times-power shape")
        unit = part.shift_down_t(m)
        if not unit.is_unit():
            raise UsageError("coordinate %d is not unit times a t-power" % i)
        ms.append(m)
        units.append(unit.lift(d.levels[i]))
    M = sum(ms)
    parts = []
    for i in range(d.n):
        q = d.levels[i]
        mono = BiPoly.monomial(0, M - ms[i], d.xdeg, q)
        parts.append(units[i].inverse() * mono)
    out = MultiGerm(parts)
    if not d.is_member(out):
        raise ContradictionError("reciprocal element is not a member")
    return out


# -- extension -------------------------------------------------------------


def _check_units_bi(beta, n):
    if len(beta) != n:
        raise UsageError("expected %d cofactors" % n)
    for i, b in enumerate(beta):
        if not isinstance(b, BiPoly) or not b.is_unit():
            raise UsageError("beta_%d is not a bivariate unit" % (i + 1))


def deform_induced_element(d: DeformPresentation, p_new, beta) -> MultiGerm:
    """u = (beta_i t^p_i)_i at the extended levels q_i + p_i."""
    _check_units_bi(beta, d.n)
    parts = []
    for i in range(d.n):
        q, p = d.levels[i], p_new[i]
        b = beta[i]
        if b.trunc < q:
            raise UsageError("beta_%d has fewer than %d t-coefficients" % (i + 1, q))
        cutb = b.cut(q)
        grid = [0] * (d.xdeg * (q + p))
        for e in range(d.xdeg):
            for k in range(q):
                grid[e * (q + p) + p + k] = cutb.get(e, k)
        parts.append(BiPoly(d.xdeg, q + p, grid))
    return MultiGerm(parts)


def deform_nondegeneracy(d: DeformPresentation, beta):
    """Sum of lambda_i / beta_i|C as an x-polynomial coefficient list."""
    _check_units_bi(beta, d.n)
    lam = deform_lambda(d)
    total = [QQ(0)] * d.xdeg
    for i in range(d.n):
        rest = beta[i].tcoeff(0)
        inv = _xpoly_inverse(rest, d.xdeg)
        total = [a + lam[i] * b for a, b in zip(total, inv)]
    return total


@dataclass
class DeformExtension:
    q_n: int
    dim_q: int                    # K-dimension of the quotient
    degeneracy: list              # the x-polynomial sum lambda_i / beta_i|C
    top_power_zero: bool          # pi_n^q_n = 0
    top_minus_one_nonzero: bool   # pi_n^(q_n - 1) != 0
    free_completion: bool         # monomial classes x^a pi_n^k form a basis
    flat: bool                    # over K[pi_n]/(pi_n^q_n)
    presentation: object          # DeformPresentation or None


def extend_deformation(
    d: DeformPresentation, p_new, beta, allow_degenerate: bool = False
) -> DeformExtension:
    """Glue one more branch along u = (beta_i t^p_i)_i.

    The quotient Q of the extended model by the ideal of u carries the
    class of pi as the new parameter; its K-dimension is q_n D with
    q_n = sum p_i, the top power of the parameter vanishes, and in the
    nondegenerate case the previous power does not and Q is flat over
    K[pi_n]/(pi_n^q_n).  When the monomial classes x^a pi_n^k form a
    basis of Q, the free rank-one completion is canonical and the full
    n+1-branch presentation is emitted; otherwise only the certificates
    are returned.
    """
    from .build import LineModule, flatness_over_line

    p_new = tuple(int(p) for p in p_new)
    if len(p_new) != d.n or any(p < 1 for p in p_new):
        raise UsageError("bad contact vector")
    u = deform_induced_element(d, p_new, beta)
    K = d.lifted(p_new)
    if not K.space.contains(K.embed(u)):
        raise DegenerateInput("element does not belong to the algebra")
    sigma = deform_nondegeneracy(d, beta)
    degenerate = all(c == 0 for c in sigma)
    if degenerate and not allow_degenerate:
        raise DegenerateExtension("degeneracy function is 0")

    D = d.xdeg
    q_n = sum(p_new)
    basis = K.basis_germs()
    U = LinearSpace.span(K.ambient, [K.embed(u * g) for g in basis])
    dim_q = K.dim - U.dim
    if dim_q != q_n * D:
        raise ContradictionError(
            "quotient dimension %d, expected %d" % (dim_q, q_n * D)
        )

    # complement of the relation ideal inside the model, then coordinates
    # of classes with respect to complement members
    comp_rows = []
    cur = U
    for r in K.space.rows:
        nxt = cur.add(LinearSpace.span(K.ambient, [r]))
        if nxt.dim > cur.dim:
            comp_rows.append(r)
            cur = nxt
    tracker = CoordTracker(K.ambient, list(U.rows) + comp_rows)

    def class_coords(vec):
        c = tracker.coords(vec)
        if c is None:
            raise ContradictionError("class coordinates failed")
        return c[len(U.rows) :]

    # monomial classes x^a pi^k
    monos = []
    x_one = K.x()
    pi_one = K.pi()
    acc_pi = K.one()
    for k in range(q_n):
        acc_x = acc_pi
        for a in range(D):
            monos.append(class_coords(K.embed(acc_x)))
            acc_x = acc_x * x_one
        acc_pi = acc_pi * pi_one
    mono_space = LinearSpace.span(dim_q, monos)
    free_completion = mono_space.dim == dim_q

    # parameter action and the power certificates
    pi_vec = class_coords(K.embed(pi_one))
    acc = K.one()
    for _ in range(q_n - 1):
        acc = acc * pi_one
    top_minus_one = class_coords(K.embed(acc))
    top = class_coords(K.embed(acc * pi_one))
    top_power_zero = all(c == 0 for c in top)
    top_minus_one_nonzero = any(c != 0 for c in top_minus_one)
    if not top_power_zero:
        raise ContradictionError("pi_n^q_n does not vanish in the quotient")

    # action matrix of pi_n in class coordinates
    comp_classes = [class_coords(r) for r in comp_rows]
    cls_tracker = CoordTracker(dim_q, comp_classes)
    action = []
    for r in comp_rows:
        g = K.germ(r)
        img = class_coords(K.embed(g * pi_one))
        c = cls_tracker.coords(img)
        if c is None:
            raise ContradictionError("parameter action left the quotient")
        action.append(c)
    module = LineModule(q_n, action)
    flat = flatness_over_line(module) if not degenerate else False

    presentation = None
    if free_completion:
        mono_tracker = CoordTracker(dim_q, monos)
        new_levels = tuple(q + p for q, p in zip(d.levels, p_new)) + (q_n,)
        rows = []
        for r in K.space.rows:
            c = mono_tracker.coords(class_coords(r))
            if c is None:
                raise ContradictionError("monomial coordinates failed")
            # mono index k * D + a  ->  new branch grid slot a * q_n + k
            tail = [0] * (D * q_n)
            for k in range(q_n):
                for a in range(D):
                    tail[a * q_n + k] = c[k * D + a]
            rows.append(list(r) + tail)
        presentation = DeformPresentation.from_rows(D, new_levels, rows)
        if presentation.dim != d.dim + D * q_n:
            raise ContradictionError("extension dimension law failed")
        old = deform_spectrum(d).entries
        new = deform_spectrum(presentation).entries
        for i in range(d.n):
            for j in range(d.n):
                if i != j and new[i][j] != old[i][j]:
                    raise ContradictionError("extension changed the spectrum")
            if new[i][d.n] != p_new[i]:
                raise ContradictionError("new contact orders are off")

    return DeformExtension(
        q_n,
        dim_q,
        sigma,
        top_power_zero,
        top_minus_one_nonzero,
        free_completion,
        flat,
        presentation,
    )


# -- star extraction -------------------------------------------------------


@dataclass
class ExtractionReport:
    star: StarPresentation
    validation: ValidationReport
    oblate: bool
    spectrum_match: bool
    component_ideal_ok: list      # per branch: span equality with u_j B
    filtration_ok: bool


def _t_only_space(d: DeformPresentation) -> LinearSpace:
    rows = []
    for i in range(d.n):
        for k in range(d.levels[i]):
            v = [0] * d.ambient
            v[d.slot(i, 0, k)] = 1
            rows.append(v)
    return LinearSpace.span(d.ambient, rows)


def _diagonal_bi(d: DeformPresentation, germ: MultiGerm, levels) -> MultiGerm:
    """t-only star germ -> bivariate germ at the given levels."""
    parts = []
    for part, q in zip(germ.parts, levels):
        parts.append(BiPoly.from_tseries(part.cut(q), d.xdeg))
    return MultiGerm(parts)


def extract_star(d: DeformPresentation, checks: bool = True) -> ExtractionReport:
    """The star of the deformation: members with t-only coordinates.

    A member whose image is t-only is congruent to polynomials in the
    parameters at every level, so the t-only slice of the model is exactly
    the model of the star.  The result is validated as an oblate star with
    the same spectrum; with checks on, the chain of facts behind flatness
    of the projection onto the star is certified at model scale: each
    branch ideal of the deformation is spanned by a single t-only
    generator, and the filtration certificates hold on the star side.
    """
    tonly = d.space.intersect(_t_only_space(d))
    srows = []
    for r in tonly.rows:
        v = []
        for i in range(d.n):
            off = d.slot(i, 0, 0)
            v.extend(r[off : off + d.levels[i]])
        srows.append(v)
    star = StarPresentation.from_rows(d.levels, srows)

    validation = validate_star(star)
    if not validation.ok:
        raise ContradictionError(
            "extracted slice is not a star",
            witness={"failed": [c.name for c in validation.failed()]},
        )
    oblate = is_oblate(star)
    if not oblate:
        raise ContradictionError("extracted star is not oblate")
    spectrum_match = spectrum(star).entries == deform_spectrum(d).entries
    if not spectrum_match:
        raise ContradictionError("star and deformation spectra differ")

    ideal_ok = []
    filtration_ok = True
    if checks:
        high = d.lifted(1)
        for j in range(d.n):
            anchor = 0 if j else 1
            u_j = pair_generator(star, j, anchor).lifted_germ
            u_bi = _diagonal_bi(d, u_j, high.levels)
            span = LinearSpace.span(
                high.ambient, [high.embed(u_bi * g) for g in high.basis_germs()]
            )
            crows = []
            for m in range(d.n):
                if m == j:
                    continue
                for e in range(d.xdeg):
                    for k in range(high.levels[m]):
                        v = [0] * high.ambient
                        v[high.slot(m, e, k)] = 1
                        crows.append(v)
            vanish = high.space.intersect(
                LinearSpace.span(high.ambient, crows)
            )
            ideal_ok.append(span == vanish)

        from .compare import ideal_filtration
        from .stars import _value_zero_space

        hs = star.lifted(1)
        m_space = hs.space.intersect(_value_zero_space(hs))
        gens = [hs.germ(r) for r in m_space.rows]
        filtration_ok = ideal_filtration(star, gens).ok
        u1 = pair_generator(star, 0, 1)
        filtration_ok = filtration_ok and ideal_filtration(star, [u1.lifted_germ]).ok

    return ExtractionReport(
        star, validation, oblate, spectrum_match, ideal_ok, filtration_ok
    )
