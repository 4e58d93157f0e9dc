"""Finite models of n-stars of a smooth curve germ.

A star glues n copies of a disc along a common point P.  Its local ring is
modelled by the image B of the ring inside the product of truncated
component rings K[t]/(t^q_i), where q_i is the sum of the i-th row of the
contact matrix (the spectrum).  The model is faithful: an arbitrary
function tuple belongs to the local ring exactly when its reduction at the
level vector lies in B, so every ideal or quotient computation below is a
statement about the honest local ring, not just about the truncation.

All invariants of the theory are computed here: the spectrum, the
hyperplane invariant lambda carried by the top coefficient slice, the
normalized pair generators with their unit constants, the connector maps
onto single components, sub-component vanishing ideals, and the fibre of
the projection to the disc, whose shape decides oblateness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DegenerateInput, InvalidStar, UsageError
from .linalg import LinearSpace, nullspace, solve_affine
from .scalars import QQ
from .series import MultiGerm, TruncSeries


class StarPresentation:
    """Span model of the local ring of an n-star at its center."""

    def __init__(self, levels, space: LinearSpace):
        self.levels = tuple(int(q) for q in levels)
        if any(q < 1 for q in self.levels):
            raise UsageError("levels must be positive")
        self.n = len(self.levels)
        self.offsets = []
        off = 0
        for q in self.levels:
            self.offsets.append(off)
            off += q
        self.ambient = off
        if space.ambient != self.ambient:
            raise UsageError("space ambient does not match levels")
        self.space = space
        self._spectrum = None
        self._basis_germs = None

    @classmethod
    def from_rows(cls, levels, rows) -> "StarPresentation":
        ambient = sum(levels)
        return cls(levels, LinearSpace.span(ambient, rows))

    # -- germ <-> vector ---------------------------------------------------

    def embed(self, germ: MultiGerm):
        if len(germ) != self.n:
            raise UsageError("germ has %d parts, star has %d" % (len(germ), self.n))
        vec = []
        for part, q in zip(germ.parts, self.levels):
            if not isinstance(part, TruncSeries) or part.trunc != q:
                raise UsageError("germ truncation does not match star levels")
            vec.extend(part.coeffs)
        return vec

    def germ(self, vec) -> MultiGerm:
        parts = []
        for off, q in zip(self.offsets, self.levels):
            parts.append(TruncSeries(q, vec[off : off + q]))
        return MultiGerm(parts)

    def reduce_germ(self, germ: MultiGerm) -> MultiGerm:
        """Cut a germ given at truncations >= levels down to the levels."""
        parts = []
        for part, q in zip(germ.parts, self.levels):
            if part.trunc < q:
                raise UsageError("germ truncation below star level")
            parts.append(part.cut(q))
        return MultiGerm(parts)

    def one(self) -> MultiGerm:
        return MultiGerm([TruncSeries.one(q) for q in self.levels])

    def pi(self) -> MultiGerm:
        return MultiGerm([TruncSeries.t_power(1, q) for q in self.levels])

    def basis_germs(self):
        if self._basis_germs is None:
            self._basis_germs = [self.germ(r) for r in self.space.rows]
        return self._basis_germs

    @property
    def dim(self) -> int:
        return self.space.dim

    def is_member(self, germ: MultiGerm) -> bool:
        return self.space.contains(self.embed(self.reduce_germ(germ)))

    def member_residual(self, germ: MultiGerm):
        """Residual vector of the reduction; zero exactly for members."""
        return self.space.reduce(self.embed(self.reduce_germ(germ)))

    # -- headroom ----------------------------------------------------------

    def lifted(self, extra) -> "StarPresentation":
        """Faithful re-presentation at levels q_i + extra_i.

        The local ring is the preimage of B under reduction, so its image
        at the higher levels is spanned by arbitrary lifts of the basis
        plus the pure tails t^k e_i with q_i <= k < q_i + extra_i.
        extra is a single amount or one per branch.
        """
        if isinstance(extra, int):
            extra = (extra,) * self.n
        extra = tuple(int(e) for e in extra)
        if len(extra) != self.n or any(e < 0 for e in extra):
            raise UsageError("bad headroom")
        if not any(extra):
            return self
        new_levels = tuple(q + e for q, e in zip(self.levels, extra))
        ambient = sum(new_levels)
        rows = []
        for r in self.space.rows:
            v = [0] * ambient
            noff = 0
            for i, q in enumerate(self.levels):
                v[noff : noff + q] = r[self.offsets[i] : self.offsets[i] + q]
                noff += new_levels[i]
            rows.append(v)
        noff = 0
        for i, q in enumerate(self.levels):
            for k in range(q, new_levels[i]):
                v = [0] * ambient
                v[noff + k] = 1
                rows.append(v)
            noff += new_levels[i]
        return StarPresentation(new_levels, LinearSpace.span(ambient, rows))

    def __repr__(self):
        return "StarPresentation(n=%d, levels=%s, dim=%d)" % (
            self.n,
            self.levels,
            self.dim,
        )


# -- constructors ----------------------------------------------------------


def make_congruence_pair_star(p: int) -> StarPresentation:
    """Two branches glued to order p: pairs congruent mod t^p."""
    if p < 1:
        raise DegenerateInput("contact order must be positive")
    rows = []
    for k in range(p):
        v = [0] * (2 * p)
        v[k] = 1
        v[p + k] = 1
        rows.append(v)
    return StarPresentation.from_rows((p, p), rows)


def make_lines_star(slopes) -> StarPresentation:
    """Star of n pairwise transverse lines through the origin of a plane.

    The i-th branch is the line y = c_i t; the model is spanned by the
    images of the monomials t^a y^b with a + b <= n - 2, the monomial
    mapping to the tuple (c_i^b t^(a+b))_i.
    """
    slopes = [QQ(c) if type(c) is int else c for c in slopes]
    n = len(slopes)
    if n < 2:
        raise DegenerateInput("need at least two lines")
    if len({(c.numerator, c.denominator) for c in slopes}) != n:
        raise DegenerateInput("slopes must be pairwise distinct")
    q = n - 1
    rows = []
    for a in range(n - 1):
        for b in range(n - 1 - a):
            v = [0] * (n * q)
            for i, c in enumerate(slopes):
                v[i * q + a + b] = c**b
            rows.append(v)
    return StarPresentation.from_rows((q,) * n, rows)


def make_initial_star(n: int) -> StarPresentation:
    """The glueing imposing only equality of values at the center.

    Oblate exactly for n = 2; for n >= 3 its fibre is not a truncated
    polynomial ring and its embedding dimension is n.
    """
    if n < 2:
        raise DegenerateInput("need at least two branches")
    q = n - 1
    rows = [[0] * (n * q) for _ in range(1 + n * (q - 1))]
    for i in range(n):
        rows[0][i * q] = 1
    r = 1
    for i in range(n):
        for k in range(1, q):
            rows[r][i * q + k] = 1
            r += 1
    return StarPresentation.from_rows((q,) * n, rows)


# -- spectrum --------------------------------------------------------------


@dataclass
class SpectrumMatrix:
    """Pairwise contact orders; entries[i][j] = p_ij, diagonal 0."""

    entries: list

    @property
    def n(self) -> int:
        return len(self.entries)

    def row_sums(self):
        return [sum(row) for row in self.entries]

    def ultrametric_violations(self):
        out = []
        n = self.n
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if len({i, j, k}) < 3:
                        continue
                    if (
                        self.entries[i][j] < self.entries[j][k]
                        and self.entries[i][k] != self.entries[i][j]
                    ):
                        out.append((i, j, k))
        return out

    def __eq__(self, other):
        return isinstance(other, SpectrumMatrix) and self.entries == other.entries


def spectrum(star: StarPresentation) -> SpectrumMatrix:
    """Contact matrix: p_ij is the largest order below which every member
    has equal i-th and j-th coordinates, capped at min(q_i, q_j)."""
    if star._spectrum is not None:
        return star._spectrum
    n = star.n
    entries = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            cap = min(star.levels[i], star.levels[j])
            p = cap
            for row in star.space.rows:
                oi, oj = star.offsets[i], star.offsets[j]
                for k in range(min(p, cap)):
                    if row[oi + k] != row[oj + k]:
                        p = k
                        break
                if p == 0:
                    break
            entries[i][j] = entries[j][i] = p
    star._spectrum = SpectrumMatrix(entries)
    return star._spectrum


# -- validation ------------------------------------------------------------.


@dataclass
class CheckResult:
    name: str
    ok: bool
    witness: dict | None = None


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failed(self):
        return [c for c in self.checks if not c.ok]

    def add(self, name, ok, witness=None):
        self.checks.append(CheckResult(name, bool(ok), witness))


def validate_star(star: StarPresentation, closure: bool = True) -> ValidationReport:
    """Check the structural axioms of a star presentation.

    closure=False skips the quadratic product check; everything else
    (units, value agreement, spectrum laws, level consistency) still runs.
    """
    rep = ValidationReport()
    rep.add("has-one", star.is_member(star.one()))
    rep.add("has-pi", star.is_member(star.pi()))

    bad = None
    for r, row in enumerate(star.space.rows):
        c0 = row[star.offsets[0]]
        for i in range(1, star.n):
            if row[star.offsets[i]] != c0:
                bad = {"row": r, "component": i}
                break
        if bad:
            break
    rep.add("value-agreement", bad is None, bad)

    if closure:
        bad = None
        germs = star.basis_germs()
        for a in range(len(germs)):
            for b in range(a, len(germs)):
                if not star.is_member(germs[a] * germs[b]):
                    bad = {"rows": (a, b)}
                    break
            if bad:
                break
        rep.add("product-closure", bad is None, bad)

    spec = spectrum(star)
    bad = None
    for i in range(star.n):
        for j in range(star.n):
            if i != j and spec.entries[i][j] < 1:
                bad = {"pair": (i, j)}
                break
        if bad:
            break
    rep.add("positive-contact", bad is None, bad)

    sums = spec.row_sums()
    bad = None
    for i, q in enumerate(star.levels):
        if sums[i] != q:
            bad = {"component": i, "level": q, "row_sum": sums[i]}
            break
    rep.add("level-consistency", bad is None, bad)

    viols = spec.ultrametric_violations()
    rep.add("ultrametric", not viols, {"triples": viols} if viols else None)

    if star.n >= 2:
        mx = max(star.levels)
        mult = sum(1 for q in star.levels if q == mx)
        rep.add("top-level-multiplicity", mult >= 2, {"count": mult})
    return rep


# -- lambda invariant ------------------------------------------------------


@dataclass
class LambdaInvariant:
    """Normal vector of the member hyperplane in the top coefficient slice,
    normalized to first coordinate 1."""

    values: tuple

    def ratio(self, i: int, j: int):
        return self.values[i] / self.values[j]


def top_slice_space(star: StarPresentation) -> LinearSpace:
    rows = []
    for i in range(star.n):
        v = [0] * star.ambient
        v[star.offsets[i] + star.levels[i] - 1] = 1
        rows.append(v)
    return LinearSpace.span(star.ambient, rows)


def lambda_invariant(star: StarPresentation) -> LambdaInvariant:
    """The unique hyperplane cutting the members out of the top slice."""
    J = star.space.intersect(top_slice_space(star))
    if J.dim != star.n - 1:
        raise InvalidStar(
            "top slice meets the ring in dimension %d, expected %d"
            % (J.dim, star.n - 1)
        )
    eqs = []
    for row in J.rows:
        eqs.append(
            [row[star.offsets[i] + star.levels[i] - 1] for i in range(star.n)]
        )
    sols = nullspace(eqs, star.n)
    if sols.dim != 1:
        raise InvalidStar("hyperplane normal is not unique")
    lam = sols.rows[0]
    if any(c == 0 for c in lam):
        raise InvalidStar("hyperplane normal has a zero coordinate")
    first = lam[0]
    return LambdaInvariant(tuple(c / first for c in lam))


# -- pair generators and unit constants ------------------------------------


@dataclass
class PairGenerator:
    i: int
    j: int
    germ: MultiGerm          # at the base levels
    lifted_germ: MultiGerm   # at one level of headroom
    units: dict              # m -> TruncSeries, cofactor of t^p_im, m != i
    constants: dict          # m -> scalar value at P, with i -> 0 and j -> 1


def pair_generator(star: StarPresentation, i: int, j: int) -> PairGenerator:
    """The normalized generator v_ij: zero on branch i, exactly t^p_ij on
    branch j, a unit times t^p_im on every other branch m.

    Solved at one level of headroom, where even a contact order equal to
    the level leaves the monomial t^p_ij visible.  The linear system
    usually has many solutions; the canonical one (particular solution
    reduced against the solution kernel) is returned so repeated calls
    agree.
    """
    if i == j:
        raise UsageError("pair generator needs two distinct branches")
    p = spectrum(star).entries
    high = star.lifted(1)
    basis = high.space.rows
    d = len(basis)
    eqs, rhs = [], []
    oi, oj = high.offsets[i], high.offsets[j]
    for k in range(high.levels[i]):
        eqs.append([basis[c][oi + k] for c in range(d)])
        rhs.append(QQ(0))
    for k in range(high.levels[j]):
        eqs.append([basis[c][oj + k] for c in range(d)])
        rhs.append(QQ(1) if k == p[i][j] else QQ(0))
    sol = solve_affine(eqs, rhs, d)
    if sol is None:
        raise InvalidStar("no normalized generator for pair (%d, %d)" % (i, j))
    coeffs, _ = sol
    vec = [0] * high.ambient
    for c, w in enumerate(coeffs):
        if w != 0:
            row = basis[c]
            for k in range(high.ambient):
                vec[k] = vec[k] + w * row[k]
    germ = high.germ(vec)
    units, constants = {}, {i: QQ(0)}
    for m in range(star.n):
        if m == i:
            continue
        part = germ[m]
        val = part.valuation()
        if val != p[i][m]:
            raise InvalidStar(
                "generator for (%d, %d) has order %s on branch %d, expected %d"
                % (i, j, val, m, p[i][m])
            )
        unit = part.shift_down(p[i][m])
        if not unit.is_unit():
            raise InvalidStar("generator cofactor is not a unit")
        units[m] = unit
        constants[m] = unit.c0
    return PairGenerator(i, j, star.reduce_germ(germ), germ, units, constants)


@dataclass
class UnitConstantTable:
    """constants[i][j][m] = value at P of the unit on branch m of v_ij."""

    n: int
    constants: dict

    def get(self, i, j, m):
        return self.constants[(i, j)][m]


def unit_constants(star: StarPresentation) -> UnitConstantTable:
    table = {}
    for i in range(star.n):
        for j in range(star.n):
            if i != j:
                table[(i, j)] = pair_generator(star, i, j).constants
    return UnitConstantTable(star.n, table)


def unit_constant_law_violations(table: UnitConstantTable):
    """Exchange, reciprocity and sign laws of the constant table.

    Exchange: b_ik^(m) b_ij^(q) = b_ik^(q) b_ij^(m) whenever i differs
    from j and k, for arbitrary m and q under the conventions b^(i) = 0,
    b^(j) = 1.  Reciprocity and the chain law are its specializations but
    are checked directly for sharper witnesses.  The sign law couples the
    generators of a triple of branches.
    """
    n = table.n
    bad = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for m in range(n):
                if m == i:
                    continue
                if table.get(i, j, m) * table.get(i, m, j) != 1:
                    bad.append(("reciprocity", i, j, m))
            for k in range(j + 1, n):
                if k == i:
                    continue
                for m in range(n):
                    for q in range(m + 1, n):
                        if table.get(i, k, m) * table.get(i, j, q) != table.get(
                            i, k, q
                        ) * table.get(i, j, m):
                            bad.append(("exchange", i, j, k, m, q))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if len({i, j, k}) < 3:
                    continue
                if table.get(k, i, j) != -table.get(i, k, j) * table.get(j, i, k):
                    bad.append(("sign", i, j, k))
    return bad


def lambda_ratio_law_violations(star: StarPresentation):
    """lambda_i / lambda_j must equal minus the product of the constants
    b_mi^(j) over the remaining branches m."""
    lam = lambda_invariant(star)
    table = unit_constants(star)
    bad = []
    for i in range(star.n):
        for j in range(star.n):
            if i == j:
                continue
            prod = QQ(1)
            for m in range(star.n):
                if m not in (i, j):
                    prod = prod * table.get(m, i, j)
            if lam.ratio(i, j) != -prod:
                bad.append((i, j))
    return bad


# -- membership helpers ----------------------------------------------------


@dataclass
class MembershipReport:
    member: bool
    residual: list | None = None


def membership(star: StarPresentation, germ: MultiGerm) -> MembershipReport:
    res = star.member_residual(germ)
    if all(c == 0 for c in res):
        return MembershipReport(True)
    return MembershipReport(False, res)


# -- sub-component ideals --------------------------------------------------


@dataclass
class SubstarIdealReport:
    subset: tuple
    anchor: int
    generator: MultiGerm          # at one level of headroom
    span_equal: bool
    restriction_order: int | None  # order on the anchor branch, full case
    restriction_unit: bool


def substar_ideal(star: StarPresentation, subset) -> SubstarIdealReport:
    """Certify that the vanishing ideal of the branches in `subset` is
    generated by the product of pair generators v_{j,anchor}, j in subset.

    The product is formed at one level of headroom, where the generator's
    order on the anchor branch is visible even when the subset is the full
    complement; the span equality with the coordinate-vanishing subspace
    is checked at the base levels.
    """
    subset = tuple(sorted(set(subset)))
    if not subset or len(subset) >= star.n:
        raise UsageError("subset must be a proper nonempty set of branches")
    anchor = min(m for m in range(star.n) if m not in subset)
    high = star.lifted(1)
    prod = high.one()
    for j in subset:
        prod = prod * pair_generator(star, j, anchor).lifted_germ
    base_gen = star.reduce_germ(prod)

    ideal_rows = [star.embed(base_gen * g) for g in star.basis_germs()]
    ideal = LinearSpace.span(star.ambient, ideal_rows)

    coord_rows = []
    for m in range(star.n):
        if m in subset:
            continue
        for k in range(star.levels[m]):
            v = [0] * star.ambient
            v[star.offsets[m] + k] = 1
            coord_rows.append(v)
    vanishing = star.space.intersect(
        LinearSpace.span(star.ambient, coord_rows)
    )
    span_equal = ideal == vanishing

    spec = spectrum(star)
    expected = sum(spec.entries[anchor][j] for j in subset)
    anchor_part = prod[anchor]
    order = anchor_part.valuation()
    unit_ok = order == expected and anchor_part.coeffs[order] != 0
    return SubstarIdealReport(subset, anchor, prod, span_equal, order, unit_ok)


# -- connectors ------------------------------------------------------------


@dataclass
class Connector:
    """The map deciding membership through a single branch: it sends the
    image of a member on the other branches to its i-th truncation."""

    i: int
    domain: LinearSpace           # K_i, image of B forgetting branch i
    matrix: list                  # row r = image coefficients of domain row r
    well_defined: bool
    value_check: bool
    pi_check: bool
    kernel_check: bool


def connector(star: StarPresentation, i: int) -> Connector:
    n = star.n
    qi = star.levels[i]
    keep = [m for m in range(n) if m != i]
    amb = sum(star.levels[m] for m in keep)

    def project(vec):
        out = []
        for m in keep:
            out.extend(vec[star.offsets[m] : star.offsets[m] + star.levels[m]])
        return out

    proj_rows = [project(r) for r in star.space.rows]
    domain = LinearSpace.span(amb, proj_rows)
    well_defined = domain.dim == star.space.dim
    if not well_defined:
        return Connector(i, domain, [], False, False, False, False)

    # preimage of each canonical domain row, then its i-th block
    d = star.space.dim
    eqs = [[proj_rows[c][k] for c in range(d)] for k in range(amb)]
    matrix = []
    value_ok = True
    for row in domain.rows:
        sol = solve_affine(eqs, list(row), d)
        if sol is None:
            raise InvalidStar("connector preimage missing")
        coeffs, _ = sol
        img = [0] * qi
        for c, w in enumerate(coeffs):
            if w != 0:
                brow = star.space.rows[c]
                for k in range(qi):
                    img[k] = img[k] + w * brow[star.offsets[i] + k]
        matrix.append(img)
        # the common value at P sits at offset 0 of the first kept block
        if img[0] != row[0]:
            value_ok = False
    pi_vec = project(star.embed(star.pi()))
    pi_coords = domain.coords(pi_vec)
    img = [0] * qi
    for r, w in enumerate(pi_coords):
        if w != 0:
            for k in range(qi):
                img[k] = img[k] + w * matrix[r][k]
    pi_ok = TruncSeries(qi, img) == TruncSeries.t_power(1, qi)

    # kernel = ideal generated by the image of a pair generator v_ij
    j = keep[0]
    vgen = pair_generator(star, i, j).germ
    ideal_rows = [project(star.embed(vgen * g)) for g in star.basis_germs()]
    ideal = LinearSpace.span(amb, ideal_rows)
    eqs = [[matrix[r][k] for r in range(domain.dim)] for k in range(qi)]
    ker_coords = nullspace(eqs, domain.dim)
    ker_rows = []
    for cv in ker_coords.rows:
        v = [0] * amb
        for r, w in enumerate(cv):
            if w != 0:
                for k in range(amb):
                    v[k] = v[k] + w * domain.rows[r][k]
        ker_rows.append(v)
    kernel = LinearSpace.span(amb, ker_rows)
    kernel_ok = kernel == ideal
    return Connector(i, domain, matrix, True, value_ok, pi_ok, kernel_ok)


def connector_apply(star: StarPresentation, conn: Connector, germ: MultiGerm):
    """Image of a member's off-branch data under the connector."""
    vec = star.embed(star.reduce_germ(germ))
    keep = [m for m in range(star.n) if m != conn.i]
    proj = []
    for m in keep:
        proj.extend(vec[star.offsets[m] : star.offsets[m] + star.levels[m]])
    coords = conn.domain.coords(proj)
    if coords is None:
        raise UsageError("tuple is not in the connector domain")
    qi = star.levels[conn.i]
    img = [0] * qi
    for r, w in enumerate(coords):
        if w != 0:
            for k in range(qi):
                img[k] = img[k] + w * conn.matrix[r][k]
    return TruncSeries(qi, img)


# -- fibre and embedding dimension -----------------------------------------


@dataclass
class FiberReport:
    dim: int
    cotangent_dim: int            # dim m_F / m_F^2 of the fibre algebra
    nilpotency: int | None        # nilpotency order of a principal generator
    oblate: bool


def fiber_algebra(star: StarPresentation) -> FiberReport:
    """Quotient of the local ring by the pulled-back disc coordinate.

    Computed at one level of headroom, where the quotient is faithful
    because the pure tails are multiples of pi.  Oblate means the fibre is
    K[X]/(X^n): dimension n, principal maximal ideal, generator of
    nilpotency order exactly n.
    """
    high = star.lifted(1)
    pi = high.pi()
    sub_rows = [high.embed(pi * g) for g in high.basis_germs()]
    sub = LinearSpace.span(high.ambient, sub_rows)
    fdim = high.dim - sub.dim

    m_space = high.space.intersect(_value_zero_space(high))
    m_plus = m_space.add(sub)

    m_germs = [high.germ(r) for r in m_space.rows]
    sq_rows = []
    for a in range(len(m_germs)):
        for b in range(a, len(m_germs)):
            sq_rows.append(high.embed(m_germs[a] * m_germs[b]))
    msq_plus = LinearSpace.span(high.ambient, sq_rows).add(sub)
    cot = m_plus.dim - msq_plus.dim

    nil = None
    oblate = False
    if fdim == star.n:
        if star.n == 1:
            oblate = True
        elif cot == 1:
            gen = None
            for r in m_space.rows:
                if not msq_plus.contains(r):
                    gen = high.germ(r)
                    break
            if gen is not None:
                power = gen
                nil = 1
                while nil <= star.n and not sub.contains(high.embed(power)):
                    power = power * gen
                    nil += 1
                # nil is now the first k with gen^k in the ideal
                oblate = nil == star.n
    return FiberReport(fdim, cot, nil, oblate)


def _value_zero_space(star: StarPresentation) -> LinearSpace:
    """Tuples whose common value at P vanishes (constant slots may still
    differ between branches; only the shared value is pinned to zero for
    members, which all satisfy value agreement)."""
    off0 = set(star.offsets)
    rows = []
    for k in range(star.ambient):
        if k in off0:
            continue
        v = [0] * star.ambient
        v[k] = 1
        rows.append(v)
    for i in range(1, star.n):
        v = [0] * star.ambient
        v[star.offsets[0]] = 1
        v[star.offsets[i]] = -1
        rows.append(v)
    return LinearSpace.span(star.ambient, rows)


def embedding_dimension(star: StarPresentation) -> int:
    """Dimension of m/m^2 of the local ring, computed with headroom one."""
    high = star.lifted(1)
    m_space = high.space.intersect(_value_zero_space(high))
    m_germs = [high.germ(r) for r in m_space.rows]
    sq_rows = []
    for a in range(len(m_germs)):
        for b in range(a, len(m_germs)):
            sq_rows.append(high.embed(m_germs[a] * m_germs[b]))
    msq = LinearSpace.span(high.ambient, sq_rows)
    return m_space.dim - msq.dim


def is_oblate(star: StarPresentation) -> bool:
    return fiber_algebra(star).oblate
