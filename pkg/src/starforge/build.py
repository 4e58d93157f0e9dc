"""Inductive construction of oblate n-stars from (n-1)-stars.

One extension step adjoins a branch with prescribed contact orders p_in.
The data of the step is an element u = (beta_i t^p_in)_i of the old ring
whose cofactors beta_i are units; when the image of u generates the
cotangent slice I_P/(I_P^2 + (pi)) and the scalar sum(lambda_i/beta_i(P))
is nonzero, the quotient of the level-extended model by (u) is a free rank
one module over the Artinian line, its monomial basis in t_n = [pi] gives
the glueing data of the new branch, and the graph of the quotient map is
the model of the extended star.

The degeneracy scalar drives the accept/reject decision; the quotient
certificates (dimension, nilpotency orders, monomial basis, kernel-image
flatness) are recomputed on every accepted step and any failure raises a
contradiction, since they are theorems for accepted data.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    ContradictionError,
    DegenerateExtension,
    DegenerateInput,
    GenerationFailed,
    NotAUnit,
    UsageError,
)
from .linalg import CoordTracker, LinearSpace, nullspace, solve_affine
from .scalars import QQ
from .series import MultiGerm, TruncSeries
from .stars import (
    StarPresentation,
    _value_zero_space,
    lambda_invariant,
    make_congruence_pair_star,
    spectrum,
)


@dataclass
class ExtensionStep:
    """New-branch data: contact orders p_in and unit cofactors beta_i.

    beta_i must carry at least q_i coefficients (q_i the old level of
    branch i); extra precision is cut off.  The induced ring element is
    u = (beta_i t^p_in)_i at the extended levels q_i + p_in.
    """

    p_new: tuple
    beta: tuple

    def __post_init__(self):
        self.p_new = tuple(int(p) for p in self.p_new)
        self.beta = tuple(self.beta)
        if len(self.p_new) != len(self.beta):
            raise UsageError("p_new and beta lengths differ")
        if any(p < 1 for p in self.p_new):
            raise UsageError("contact orders must be positive")

    @property
    def q_new_branch(self) -> int:
        return sum(self.p_new)


def check_units(step: ExtensionStep):
    for i, b in enumerate(step.beta):
        if not isinstance(b, TruncSeries) or not b.is_unit():
            raise NotAUnit("beta_%d is not a unit" % (i + 1))


def induced_element(star: StarPresentation, step: ExtensionStep) -> MultiGerm:
    """u = (beta_i t^p_in)_i at the extended levels."""
    if len(step.p_new) != star.n:
        raise UsageError("step arity does not match the star")
    check_units(step)
    parts = []
    for i in range(star.n):
        q_old = star.levels[i]
        b = step.beta[i]
        if b.trunc < q_old:
            raise UsageError("beta_%d has fewer than %d coefficients" % (i + 1, q_old))
        p = step.p_new[i]
        parts.append(TruncSeries(q_old + p, [0] * p + list(b.cut(q_old).coeffs)))
    return MultiGerm(parts)


def nondegeneracy(star: StarPresentation, step: ExtensionStep):
    """The scalar sum(lambda_i / beta_i(P)); zero is the degenerate locus."""
    if len(step.p_new) != star.n:
        raise UsageError("step arity does not match the star")
    check_units(step)
    lam = lambda_invariant(star)
    total = QQ(0)
    for i in range(star.n):
        total = total + lam.values[i] / step.beta[i].c0
    return total


class GenerationContext:
    """Cotangent-slice data I/(I^2 + (pi)) of a star, at headroom one.

    Reduction kills nothing extra here: a function vanishing beyond the
    raised levels is pi times another ring element, hence already lies in
    the ideal (pi).  The slice is one-dimensional for every oblate star.
    """

    def __init__(self, star: StarPresentation):
        self.star = star
        self.high = star.lifted(1)
        high = self.high
        self.m_space = high.space.intersect(_value_zero_space(high))
        m_germs = [high.germ(r) for r in self.m_space.rows]
        rows = [high.embed(high.pi() * g) for g in high.basis_germs()]
        for a in range(len(m_germs)):
            for b in range(a, len(m_germs)):
                rows.append(high.embed(m_germs[a] * m_germs[b]))
        self.dropped = LinearSpace.span(high.ambient, rows)
        self._m_cap_dropped = self.m_space.intersect(self.dropped)
        self.slice_dim = self.m_space.dim - self._m_cap_dropped.dim
        self._bounds = None

    def generates(self, u: MultiGerm) -> bool:
        """Whether the class of u spans the slice."""
        if self.slice_dim != 1:
            raise ContradictionError(
                "cotangent slice has dimension %d, expected 1" % self.slice_dim
            )
        vec = self.high.embed(self.high.reduce_germ(u))
        if not self.m_space.contains(vec):
            return False
        return not self.dropped.contains(vec)

    def detect_bounds(self):
        """Per branch, the highest t-order the slice detector consults.

        The slice is cut out of the maximal ideal by one linear form; a
        step element beta_i t^p_i can have a nonzero class only if some
        branch keeps p_i at or below that branch's bound, so profiles
        violating every bound are rejected without touching the solver.
        A bound of 0 means the detector never looks at the branch.
        """
        if self._bounds is not None:
            return self._bounds
        if self.slice_dim != 1:
            raise ContradictionError(
                "cotangent slice has dimension %d, expected 1" % self.slice_dim
            )
        high = self.high
        w = None
        for r in self.m_space.rows:
            if not self.dropped.contains(r):
                w = r
                break
        eqs = [list(r) for r in self._m_cap_dropped.rows] + [list(w)]
        rhs = [QQ(0)] * self._m_cap_dropped.dim + [QQ(1)]
        covector = solve_affine(eqs, rhs, high.ambient)[0]
        bounds = []
        for i in range(high.n):
            top = 0
            for k in range(1, high.levels[i]):
                if covector[high.offsets[i] + k] != 0:
                    top = k
            bounds.append(top)
        self._bounds = tuple(bounds)
        return self._bounds


def _generation_context(star: StarPresentation) -> GenerationContext:
    # presentations are immutable, so the slice data can ride along
    ctx = getattr(star, "_genctx", None)
    if ctx is None:
        ctx = GenerationContext(star)
        star._genctx = ctx
    return ctx


def step_is_member(star: StarPresentation, step: ExtensionStep) -> bool:
    return star.is_member(induced_element(star, step))


@dataclass
class LineModule:
    """Module over K[t]/(t^q): square matrix of the t-action on a basis,
    in row-vector convention (coords map to coords times the matrix)."""

    q: int
    action: list

    @property
    def dim(self) -> int:
        return len(self.action)


def _mat_mul(A, B):
    n, m = len(A), len(B[0]) if B else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for k, a in enumerate(Ai):
            if a != 0:
                Bk = B[k]
                row = out[i]
                for j in range(m):
                    row[j] = row[j] + a * Bk[j]
    return out


def _mat_pow(A, e):
    n = len(A)
    out = [[QQ(1) if i == j else QQ(0) for j in range(n)] for i in range(n)]
    for _ in range(e):
        out = _mat_mul(out, A)
    return out


def flatness_over_line(module: LineModule) -> bool:
    """Kernel-image criterion: ker(t^k) = im(t^(q-k)) for 1 <= k < q.

    Equivalent to freeness over the Artinian line and hence to flatness.
    """
    d, q = module.dim, module.q
    if d == 0:
        return True
    powers = [None] * (q + 1)
    powers[1] = module.action
    for e in range(2, q + 1):
        powers[e] = _mat_mul(powers[e - 1], module.action)
    if any(c != 0 for row in powers[q] for c in row):
        raise UsageError("action is not nilpotent of order q")
    for k in range(1, q):
        M = powers[k]
        eqs = [[M[r][s] for r in range(d)] for s in range(d)]
        ker = nullspace(eqs, d)
        image = LinearSpace.span(d, powers[q - k])
        if ker != image:
            return False
    return True


@dataclass
class QuotientReport:
    q_n: int
    dim_q: int
    degeneracy_sum: object
    top_power_zero: bool          # t_n^q_n = 0
    top_minus_one_nonzero: bool   # t_n^(q_n - 1) != 0
    monomial_ok: bool             # {1, t_n, ..., t_n^(q_n-1)} is a basis
    monomial_coords: list         # their coordinates on the chosen complement
    flat: bool
    module: LineModule


class _QuotientData:
    """Working state shared by quotient() and extend_star()."""

    def __init__(self, star, step):
        self.star = star
        self.step = step
        self.u = induced_element(star, step)
        if not star.is_member(self.u):
            raise DegenerateInput("induced element is not in the ring")
        self.K = star.lifted(step.p_new)
        K = self.K
        u_vec = K.embed(self.u)
        self.u_germ = K.germ(u_vec)
        ideal_rows = [K.embed(self.u_germ * g) for g in K.basis_germs()]
        self.U = LinearSpace.span(K.ambient, ideal_rows)
        self.dim_q = K.dim - self.U.dim
        # complement of (u) inside the extended model
        comp = []
        acc = self.U
        for r in K.space.rows:
            if not acc.contains(r):
                comp.append(r)
                acc = acc.add(LinearSpace.span(K.ambient, [r]))
        self.comp = comp
        self.tracker = CoordTracker(K.ambient, list(self.U.rows) + comp)

    def class_coords(self, vec):
        full = self.tracker.coords(vec)
        if full is None:
            raise ContradictionError("vector outside the extended model")
        return full[self.U.dim :]

    def pi_power_coords(self):
        K, q_n = self.K, self.step.q_new_branch
        out = []
        germ = K.one()
        pi = K.pi()
        for _ in range(q_n + 1):
            out.append(self.class_coords(K.embed(germ)))
            germ = germ * pi
        return out

    def action_matrix(self):
        K = self.K
        pi = K.pi()
        rows = []
        for c in self.comp:
            rows.append(self.class_coords(K.embed(pi * K.germ(c))))
        return rows


def quotient(
    star: StarPresentation, step: ExtensionStep, allow_degenerate: bool = False
) -> QuotientReport:
    """Certified presentation of Q = K/(u) with t_n = [pi].

    Degenerate steps (scalar exactly zero) raise unless allow_degenerate
    is set; the certificates are still meaningful then and describe the
    collapsed quotient.
    """
    sigma = nondegeneracy(star, step)
    if sigma == 0 and not allow_degenerate:
        raise DegenerateExtension("degeneracy scalar is 0")
    data = _QuotientData(star, step)
    q_n = step.q_new_branch
    if data.dim_q != q_n:
        raise ContradictionError(
            "dim Q = %d but the new level is %d" % (data.dim_q, q_n)
        )
    powers = data.pi_power_coords()
    top_zero = all(c == 0 for c in powers[q_n])
    top_minus_nonzero = any(c != 0 for c in powers[q_n - 1])
    mono = powers[:q_n]
    monomial_ok = LinearSpace.span(q_n, mono).dim == q_n
    module = LineModule(q_n, data.action_matrix())
    flat = flatness_over_line(module) if top_zero else False
    return QuotientReport(
        q_n,
        data.dim_q,
        sigma,
        top_zero,
        top_minus_nonzero,
        monomial_ok,
        mono,
        flat,
        module,
    )


def top_power_vanishes_test(star: StarPresentation, step: ExtensionStep) -> bool:
    """Division test for t_n^(q_n - 1) = 0, independent of the quotient.

    t_n^(q_n-1) dies exactly when pi^(q_n-1) is a multiple of u, i.e. when
    the tuple (beta_i^{-1} t^(q_n-1-p_in) mod t^q_i)_i lies in the model.
    """
    check_units(step)
    q_n = step.q_new_branch
    parts = []
    for i in range(star.n):
        q_old = star.levels[i]
        e = q_n - 1 - step.p_new[i]
        if e >= q_old:
            parts.append(TruncSeries.zero(q_old))
            continue
        inv = step.beta[i].cut(q_old).inverse()
        parts.append(TruncSeries.t_power(e, q_old) * inv)
    return star.is_member(MultiGerm(parts))


@dataclass
class ExtensionOutcome:
    star: StarPresentation
    report: QuotientReport
    generating: bool


def extend_star_detailed(
    star: StarPresentation, step: ExtensionStep
) -> ExtensionOutcome:
    if star.n < 2:
        raise UsageError("extension needs at least a 2-star base")
    gen = _generation_context(star)
    u = induced_element(star, step)
    if not star.is_member(u):
        raise DegenerateInput("induced element is not in the ring")
    if not gen.generates(u):
        raise GenerationFailed("induced element does not generate the slice")
    report = quotient(star, step)
    if not (
        report.top_power_zero
        and report.top_minus_one_nonzero
        and report.monomial_ok
        and report.flat
    ):
        raise ContradictionError("quotient certificates failed: %r" % (report,))

    data = _QuotientData(star, step)
    mono_tracker = CoordTracker(report.q_n, report.monomial_coords)
    q_n = report.q_n
    new_rows = []
    for r in data.K.space.rows:
        mu = mono_tracker.coords(data.class_coords(r))
        if mu is None:
            raise ContradictionError("class outside the monomial span")
        new_rows.append(list(r) + list(mu))
    new_levels = tuple(data.K.levels) + (q_n,)
    new_star = StarPresentation.from_rows(new_levels, new_rows)

    if new_star.dim != star.dim + q_n:
        raise ContradictionError("extension dimension law failed")
    old_spec = spectrum(star).entries
    new_spec = spectrum(new_star).entries
    n = star.n
    for i in range(n):
        for j in range(n):
            if new_spec[i][j] != old_spec[i][j]:
                raise ContradictionError("extension disturbed the old spectrum")
        if new_spec[i][n] != step.p_new[i]:
            raise ContradictionError(
                "new contact order %d on branch %d, expected %d"
                % (new_spec[i][n], i, step.p_new[i])
            )
    return ExtensionOutcome(new_star, report, True)


def extend_star(star: StarPresentation, step: ExtensionStep) -> StarPresentation:
    return extend_star_detailed(star, step).star


# -- samplers --------------------------------------------------------------


def _valuation_subspace(pres: StarPresentation, min_vals) -> LinearSpace:
    """Members with valuation >= min_vals[i] on every branch, solved in
    basis coordinates: one equation per forbidden low-order slot."""
    basis = pres.space.rows
    eqs = []
    for i in range(pres.n):
        for k in range(min_vals[i]):
            s = pres.offsets[i] + k
            eqs.append([row[s] for row in basis])
    coeffs = nullspace(eqs, len(basis))
    rows = []
    for combo in coeffs.rows:
        v = [0] * pres.ambient
        for c, row in zip(combo, basis):
            if c:
                for s in range(pres.ambient):
                    v[s] = v[s] + c * row[s]
        rows.append(v)
    return LinearSpace.span(pres.ambient, rows)


def _draw_member(space: LinearSpace, rng: random.Random, lo=-3, hi=3):
    while True:
        coeffs = [rng.randint(lo, hi) for _ in range(space.dim)]
        if any(coeffs):
            break
    vec = [0] * space.ambient
    for c, row in zip(coeffs, space.rows):
        if c:
            for k in range(space.ambient):
                vec[k] = vec[k] + c * row[k]
    return vec


def _step_from_member(star, p_new, K, vec):
    """Read unit cofactors off a sampled element; None if a valuation is
    off target or a cofactor fails to be a unit."""
    germ = K.germ(vec)
    beta = []
    for i in range(star.n):
        part = germ[i]
        if part.valuation() != p_new[i]:
            return None
        unit = part.shift_down(p_new[i])
        if not unit.is_unit():
            return None
        beta.append(unit)
    return ExtensionStep(tuple(p_new), tuple(beta))


def sample_step(
    star: StarPresentation,
    rng: random.Random,
    p_max: int,
    tries: int = 200,
    stats: dict | None = None,
) -> ExtensionStep:
    """A gate-passing nondegenerate step, drawn from the member model.

    Elements with the required minimum valuations form a subspace of the
    extended model; integer combinations of its basis are drawn and
    rejected until the exact-valuation, unit, generation and
    nondegeneracy gates all pass.
    """
    gen = _generation_context(star)
    bounds = gen.detect_bounds()
    spec = spectrum(star).entries
    n = star.n
    if stats is None:
        stats = {}
    stats.setdefault("draws", 0)
    stats.setdefault("degenerate", 0)
    stats.setdefault("nongenerating", 0)

    def admissible(p):
        # the class of the step element must be visible to the detector
        if not any(0 < bounds[i] and p[i] <= bounds[i] for i in range(n)):
            return False
        # unequal valuations below a contact order are impossible: the
        # congruence mod t^p_ij copies the lower leading term across
        for i in range(n):
            for j in range(i + 1, n):
                if p[i] != p[j] and min(p[i], p[j]) < spec[i][j]:
                    return False
        return True

    cache = {}
    for _ in range(tries):
        stats["draws"] += 1
        p_new = None
        for _ in range(64):
            cand = tuple(rng.randint(1, p_max) for _ in range(n))
            if admissible(cand):
                p_new = cand
                break
        if p_new is None:
            continue
        if p_new not in cache:
            K = star.lifted(p_new)
            sub = _valuation_subspace(K, p_new)
            lead = [
                any(row[K.offsets[i] + p_new[i]] != 0 for row in sub.rows)
                for i in range(n)
            ]
            cache[p_new] = (K, sub, all(lead) and sub.dim > 0)
        K, sub, alive = cache[p_new]
        if not alive:
            continue
        step = None
        for _ in range(8):
            step = _step_from_member(star, p_new, K, _draw_member(sub, rng))
            if step is not None:
                break
        if step is None:
            continue
        if not gen.generates(induced_element(star, step)):
            stats["nongenerating"] += 1
            continue
        if nondegeneracy(star, step) == 0:
            stats["degenerate"] += 1
            continue
        return step
    raise GenerationFailed(
        "no admissible step in %d draws (%d degenerate, %d non-generating)"
        % (stats["draws"], stats["degenerate"], stats["nongenerating"])
    )


def sample_degenerate_step(
    star: StarPresentation, rng: random.Random, tries: int = 50
) -> ExtensionStep:
    """A step lying exactly on the degeneracy hyperplane, for a star with
    equal levels Q divisible by n-1.

    All contact orders are p' = Q/(n-1), so the new level q_n = n p'
    satisfies q_n - p' = Q on every branch; in that aligned position the
    vanishing of t_n^(q_n-1) is equivalent to the scalar being zero.  The
    element is c pi^p' plus a member of higher valuation, so every
    cofactor has the same value c at P, and the scalar is a multiple of
    sum(lambda_i), which vanishes for equal levels because pi^(Q-1) is a
    member of the top slice.
    """
    Q = star.levels[0]
    if any(q != Q for q in star.levels):
        raise UsageError("aligned degenerate steps need equal levels")
    if Q % (star.n - 1) != 0:
        raise UsageError("levels not divisible by n-1")
    p = Q // (star.n - 1)
    lam = lambda_invariant(star)
    if sum(lam.values) != 0:
        raise ContradictionError("equal-level star with nonzero lambda sum")
    p_new = (p,) * star.n
    K = star.lifted(p_new)
    sub = _valuation_subspace(K, tuple(v + 1 for v in p_new))
    base = K.embed(_pi_power(K, p))
    for _ in range(tries):
        c = rng.randint(1, 3)
        tail = (
            _draw_member(sub, rng, -2, 2)
            if sub.dim and rng.random() < 0.8
            else [0] * K.ambient
        )
        vec = [c * a + b for a, b in zip(base, tail)]
        step = _step_from_member(star, p_new, K, vec)
        if step is None:
            continue
        if nondegeneracy(star, step) != 0:
            raise ContradictionError("crafted step missed the hyperplane")
        return step
    raise GenerationFailed("could not craft a degenerate step")


def _pi_power(pres: StarPresentation, e: int) -> MultiGerm:
    out = pres.one()
    pi = pres.pi()
    for _ in range(e):
        out = out * pi
    return out


@dataclass
class TowerResult:
    star: StarPresentation
    stages: list        # all intermediate stars, pair first
    steps: list         # the accepted ExtensionSteps


def random_tower_detailed(seed: int, n_max: int, p_max: int) -> TowerResult:
    if n_max < 2 or p_max < 1:
        raise UsageError("need n_max >= 2 and p_max >= 1")
    # a draw can paint itself into a corner (no step with contacts <= p_max
    # passes the gates on the star it built); restart from a derived seed
    last = None
    for attempt in range(20):
        rng = random.Random(seed + 0x9E3779B1 * attempt)
        star = make_congruence_pair_star(rng.randint(1, p_max))
        stages, steps = [star], []
        try:
            while star.n < n_max:
                step = sample_step(star, rng, p_max)
                star = extend_star(star, step)
                stages.append(star)
                steps.append(step)
        except GenerationFailed as exc:
            last = exc
            continue
        return TowerResult(star, stages, steps)
    raise GenerationFailed("tower stuck for seed %d: %s" % (seed, last))


def random_tower(seed: int, n_max: int, p_max: int) -> StarPresentation:
    """Deterministic-under-seed oblate star built by repeated extension."""
    return random_tower_detailed(seed, n_max, p_max).star


def deepen_step(step: ExtensionStep, shift: int, need) -> ExtensionStep:
    """The same unit data at contacts raised by shift everywhere.

    Raising every contact by one multiplies the induced element by pi, so
    the new element lives in the ring glued one level deeper and its class
    still spans the cotangent slice there.  beta is zero-padded up to the
    truncations in need; for a single extension of a congruence pair the
    padding stays beyond the working levels.
    """
    if shift < 0:
        raise UsageError("shift must be nonnegative")
    return ExtensionStep(
        tuple(p + shift for p in step.p_new),
        tuple(b.lift(max(b.trunc, t)) for b, t in zip(step.beta, need)),
    )


def nested_tower_chain(seed: int, p_max: int, count: int = 2):
    """Stars O_0 > O_1 > ... with strict inclusions, by deepening one step.

    A congruence pair of contact p0 is extended by a sampled step u; the
    k-th star deepens both the base (contact p0 + k) and the step (pi^k u,
    the same cofactors at contacts raised by k).  pi^k u is a member of
    the deeper pair because the branch difference of u gains a factor t^k,
    it still generates because the leading difference coefficient
    survives, and the nondegeneracy scalar is unchanged since every pair
    star has lambda = (1, -1).  Each algebra contains the next: the
    relation ideal of the deeper quotient is pi times the coarser one.

    Sampling an element of the smaller ring that generates the bigger
    ring's cotangent slice is impossible (members of the deeper pair are
    pi times a member of the coarser), so nesting cannot share a literal
    step; deepening is the construction that keeps every gate satisfied.
    """
    if p_max < 1 or count < 1:
        raise UsageError("need p_max >= 1 and count >= 1")
    rng = random.Random(seed)
    p0 = rng.randint(1, p_max)
    step0 = sample_step(make_congruence_pair_star(p0), rng, p_max)
    chain = []
    for k in range(count):
        base = make_congruence_pair_star(p0 + k)
        need = tuple(
            base.levels[i] + step0.p_new[i] + k for i in range(2)
        )
        st = deepen_step(step0, k, need)
        if not step_is_member(base, st):
            raise ContradictionError("deepened step left the deeper pair ring")
        chain.append(extend_star(base, st))
    return chain


def nested_tower_pair(seed: int, p_max: int):
    """(sub, sup): two oblate 3-stars with sub's algebra strictly inside
    sup's, differing by one deepened step."""
    sup, sub = nested_tower_chain(seed, p_max, 2)
    return sub, sup
