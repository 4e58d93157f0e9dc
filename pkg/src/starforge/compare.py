"""Inclusion of star algebras, the non-flatness witness, ideal filtrations.

Identity-on-components morphisms between stars over the same base exist
exactly when one algebra contains the other; inclusion is decided on basis
elements by cutting to the coarser level vector and testing membership.
A strict inclusion forces a strict spectrum gap, and out of any gap the
explicit tensor witness of the smaller algebra's branch ideal certifies
that composed morphisms through the bigger star are never flat.

Ideal filtrations peel one branch at a time: the smallest-index branch
where the ideal is visible contributes a generator of smallest order, the
quotient by the rest is cyclic with annihilator the branch's vanishing
ideal, and the recursion continues on the intersection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    ContradictionError,
    NotAProperIdeal,
    NotApplicable,
    UsageError,
)
from .linalg import LinearSpace
from .series import MultiGerm, TruncSeries
from .stars import (
    SpectrumMatrix,
    StarPresentation,
    pair_generator,
    spectrum,
)


# -- inclusion -------------------------------------------------------------


@dataclass
class ComparisonReport:
    verdict: str                  # identical | strictly-included | incomparable
    spectrum_a: SpectrumMatrix
    spectrum_b: SpectrumMatrix
    sub_index: int | None = None  # 0 or 1: which argument is strictly smaller
    witness: tuple | None = None  # (i, j) with p_ij < p'_ij when strict


def _cut_vector(pres: StarPresentation, row, target_levels):
    out = []
    for i in range(pres.n):
        off = pres.offsets[i]
        out.extend(row[off : off + target_levels[i]])
    return out


def algebra_includes(sup: StarPresentation, sub: StarPresentation) -> bool:
    """Whether every member of sub's algebra belongs to sup's.

    Requires sub's levels to dominate sup's; every function is then known
    at sup's truncation from sub's basis data, and cutting the kernel of
    the finer reduction lands at zero, so checking the basis is enough.
    """
    if sub.n != sup.n:
        raise UsageError("stars have different numbers of branches")
    if any(qs < qp for qs, qp in zip(sub.levels, sup.levels)):
        return False
    for row in sub.space.rows:
        if not sup.space.contains(_cut_vector(sub, row, sup.levels)):
            return False
    return True


def compare_stars(a: StarPresentation, b: StarPresentation) -> ComparisonReport:
    if a.n != b.n:
        raise UsageError("stars have different numbers of branches")
    spec_a, spec_b = spectrum(a), spectrum(b)
    a_in_b = algebra_includes(b, a)
    b_in_a = algebra_includes(a, b)
    if a_in_b and b_in_a:
        return ComparisonReport("identical", spec_a, spec_b)
    if not (a_in_b or b_in_a):
        return ComparisonReport("incomparable", spec_a, spec_b)
    sub_index = 0 if a_in_b else 1
    sub_spec, sup_spec = (spec_a, spec_b) if sub_index == 0 else (spec_b, spec_a)
    witness = None
    for i in range(a.n):
        for j in range(a.n):
            if i == j:
                continue
            if sup_spec.entries[i][j] > sub_spec.entries[i][j]:
                raise ContradictionError(
                    "inclusion with reversed contact order at (%d, %d)" % (i, j)
                )
            if witness is None and sup_spec.entries[i][j] < sub_spec.entries[i][j]:
                witness = (i, j)
    if witness is None:
        raise ContradictionError(
            "strict inclusion with equal spectra",
            witness={"spectra": sup_spec.entries},
        )
    return ComparisonReport(
        "strictly-included", spec_a, spec_b, sub_index, witness
    )


# -- non-flatness witness --------------------------------------------------


@dataclass
class NonflatnessWitness:
    index: int              # branch with the level gap (q < q')
    u: MultiGerm            # branch-ideal generator in the smaller algebra
    v: MultiGerm            # (t^q, 0, ..., 0)-shaped member of the bigger
    uv_zero: bool
    phi_value: TruncSeries  # t^q mod t^q', the image of u (x) v
    phi_nonzero: bool
    phi_well_defined: bool


def nonflatness_witness(
    sub: StarPresentation, sup: StarPresentation
) -> NonflatnessWitness:
    """The tensor obstruction of a strict inclusion sub < sup.

    At a branch with a level gap, u generates the branch's vanishing ideal
    in sub, v is the gap-order monomial supported on that branch (a member
    of sup since it reduces to zero), the product uv vanishes identically,
    and the bilinear form (a u, w) -> a_i w_i mod t^(q'_i) sends u (x) v to
    t^(q_i) != 0.  The form is well defined because nothing supported on
    the single branch lives in sub below order q'_i.
    """
    rep = compare_stars(sub, sup)
    if rep.verdict != "strictly-included" or rep.sub_index != 0:
        raise NotApplicable("no strict inclusion of the first star in the second")
    gap = None
    for i in range(sub.n):
        if sup.levels[i] < sub.levels[i]:
            gap = i
            break
    if gap is None:
        raise NotApplicable("no level gap on any branch")
    q, qp = sup.levels[gap], sub.levels[gap]

    anchor = 0 if gap != 0 else 1
    u = pair_generator(sub, gap, anchor).lifted_germ
    if u[gap].valuation() is not None:
        raise ContradictionError("branch-ideal generator does not vanish there")

    v_parts = []
    for i in range(sup.n):
        if i == gap:
            v_parts.append(TruncSeries.t_power(q, q + 1))
        else:
            v_parts.append(TruncSeries.zero(sup.levels[i] + 1))
    v = MultiGerm(v_parts)
    if not sup.lifted(1).is_member(v):
        raise ContradictionError("gap monomial is not a member of the big algebra")

    # u is zero on the gap branch and v on all others, so uv is zero as a
    # tuple of polynomials, not only after truncation
    uv_zero = all(
        v_parts[i].is_zero() for i in range(sub.n) if i != gap
    ) and u[gap].is_zero()

    phi = TruncSeries.t_power(q, qp)
    # well-definedness: sub holds nothing supported on the gap branch alone
    # below order q', i.e. the projection forgetting that branch is faithful
    coord_rows = []
    for m in range(sub.n):
        if m == gap:
            for k in range(sub.levels[m]):
                vec = [0] * sub.ambient
                vec[sub.offsets[m] + k] = 1
                coord_rows.append(vec)
    lonely = sub.space.intersect(LinearSpace.span(sub.ambient, coord_rows))
    well_defined = lonely.dim == 0

    return NonflatnessWitness(
        gap, u, v, uv_zero, phi, not phi.is_zero(), well_defined
    )


# -- ideal filtration ------------------------------------------------------


@dataclass
class FiltrationStep:
    j: int                  # peeled branch
    m: int                  # order of the generator on that branch
    u: MultiGerm            # generator, leading coefficient 1 on branch j
    cyclic_ok: bool         # I_k = I_{k+1} + u O
    annihilator_ok: bool    # I_{S_j} u <= I_{k+1}
    contained_ok: bool      # I_{k+1} <= I_{S_j}


@dataclass
class FiltrationReport:
    steps: list = field(default_factory=list)
    respan_ok: bool = False
    headroom: int = 0
    order: str = "ascending"

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def ok(self) -> bool:
        return self.respan_ok and all(
            s.cyclic_ok and s.annihilator_ok and s.contained_ok for s in self.steps
        )


def _lift_germ(germ: MultiGerm, levels) -> MultiGerm:
    """Zero-pad the polynomial representatives up to the given levels."""
    parts = []
    for part, L in zip(germ.parts, levels):
        if part.trunc > L:
            raise UsageError("generator carries more data than the working level")
        parts.append(part.lift(L))
    return MultiGerm(parts)


def ideal_filtration(
    star: StarPresentation, gens, headroom: int | None = None
) -> FiltrationReport:
    """Peel the ideal generated by the given polynomial germs.

    Work happens in the quotient at levels q_i + headroom; the default
    headroom, the sum of the levels, covers every order reachable from the
    generators on the shipped fixtures and leaves all certificates exact
    in that quotient ring.  Components are peeled in ascending index order
    and the order is recorded for reproducibility.
    """
    if not gens:
        raise UsageError("no generators")
    if headroom is None:
        headroom = sum(star.levels)
    high = star.lifted(headroom)
    lifted = [_lift_germ(g, high.levels) for g in gens]
    for g in lifted:
        if not high.is_member(g):
            raise UsageError("generator is not a member of the ring")
    basis = high.basis_germs()
    rows = []
    for g in lifted:
        for b in basis:
            rows.append(high.embed(g * b))
    initial = LinearSpace.span(high.ambient, rows)
    current = initial
    for r in current.rows:
        if r[high.offsets[0]] != 0:
            raise NotAProperIdeal("generators span a unit")

    # vanishing-ideal models per branch, and their coordinate spaces
    coord_spaces, vanish = [], []
    for j in range(star.n):
        crows = []
        for m in range(star.n):
            if m == j:
                continue
            for k in range(high.levels[m]):
                v = [0] * high.ambient
                v[high.offsets[m] + k] = 1
                crows.append(v)
        cs = LinearSpace.span(high.ambient, crows)
        coord_spaces.append(cs)
        vanish.append(high.space.intersect(cs))

    report = FiltrationReport(headroom=headroom)
    ideal_parts = []
    for j in range(star.n):
        if current.dim == 0:
            break
        off = high.offsets[j]
        best = None
        for r in current.rows:
            for k in range(high.levels[j]):
                if r[off + k] != 0:
                    if best is None or k < best[0]:
                        best = (k, r)
                    break
        if best is None:
            continue
        m, u_vec = best
        lead = u_vec[off + m]
        u_vec = [c / lead for c in u_vec]
        u = high.germ(u_vec)
        u_ideal = LinearSpace.span(
            high.ambient, [high.embed(u * b) for b in basis]
        )
        ideal_parts.append(u_ideal)
        nxt = current.intersect(coord_spaces[j])
        cyclic_ok = nxt.add(u_ideal) == current
        ann_rows = [high.embed(high.germ(v) * u) for v in vanish[j].rows]
        annihilator_ok = all(nxt.contains(r) for r in ann_rows)
        contained_ok = coord_spaces[j].contains_space(nxt)
        report.steps.append(
            FiltrationStep(j, m, u, cyclic_ok, annihilator_ok, contained_ok)
        )
        current = nxt
    if current.dim != 0:
        raise ContradictionError("peeling left a nonzero remainder")
    respan = LinearSpace.zero(high.ambient)
    for part in ideal_parts:
        respan = respan.add(part)
    report.respan_ok = respan == initial
    return report
