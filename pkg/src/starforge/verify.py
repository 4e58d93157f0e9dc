"""Seeded randomized verification suites.

Each suite draws deterministic instances from a seed, checks one family
of identities, and reports per-trial results.  Tower-based suites shrink
a failing instance before reporting it: drop extension steps first, then
reduce contact orders, re-testing after every candidate reduction, so
the reproducer document is minimal in steps and then in contacts.

The module also hosts the two brute-force oracles used by the kernel
suites: a freeness test by invariant factors and a naive row reducer
kept deliberately independent of the linalg kernel.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import build, compare, ribbon, stars
from .deform import extract_star, make_planes_deformation
from .errors import StarforgeError, UsageError
from .io import BuilderScript, script_document
from .scalars import QQ, scalar_from_string
from .series import BiPoly

MAX_SHRUNK = 3          # failures minimized per suite; the rest are echoed


@dataclass
class TrialFailure:
    trial: int
    message: str
    reproducer: dict | None = None


@dataclass
class SuiteResult:
    suite: str
    seed: int
    trials: int
    passed: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


# ---------------------------------------------------------------- towers

def _script_of(tower: build.TowerResult) -> BuilderScript:
    base_p = tower.stages[0].levels[0]
    return BuilderScript("pair", base_p, list(tower.steps))


def _replay(script: BuilderScript):
    star = script.base_star()
    for step in script.steps:
        star = build.extend_star(star, step)
    return star


def _still_fails(script: BuilderScript, prop) -> bool:
    try:
        return prop(_replay(script)) is not None
    except StarforgeError:
        return False


def _shrink_script(script: BuilderScript, prop) -> BuilderScript:
    changed = True
    while changed:
        changed = False
        for k in range(len(script.steps)):
            cand = BuilderScript(
                script.base_kind,
                script.base_arg,
                script.steps[:k] + script.steps[k + 1 :],
            )
            if _still_fails(cand, prop):
                script = cand
                changed = True
                break
    changed = True
    while changed:
        changed = False
        if script.base_kind == "pair" and script.base_arg > 1:
            cand = BuilderScript(script.base_kind, script.base_arg - 1, script.steps)
            if _still_fails(cand, prop):
                script = cand
                changed = True
                continue
        for k, step in enumerate(script.steps):
            for i, p in enumerate(step.p_new):
                if p <= 1:
                    continue
                contacts = list(step.p_new)
                contacts[i] = p - 1
                cand_step = build.ExtensionStep(tuple(contacts), step.beta)
                cand = BuilderScript(
                    script.base_kind,
                    script.base_arg,
                    script.steps[:k] + [cand_step] + script.steps[k + 1 :],
                )
                if _still_fails(cand, prop):
                    script = cand
                    changed = True
                    break
            if changed:
                break
    return script


def _tower_suite(name, seed, trials, prop, n_max=5, p_max=4) -> SuiteResult:
    failures = []
    passed = 0
    for k in range(trials):
        tower = build.random_tower_detailed(seed + k, n_max, p_max)
        msg = prop(tower.star)
        if msg is None:
            passed += 1
            continue
        reproducer = None
        if len(failures) < MAX_SHRUNK:
            script = _shrink_script(_script_of(tower), prop)
            reproducer = script_document(script, metadata={"seed": seed + k})
        failures.append(TrialFailure(k, msg, reproducer))
    return SuiteResult(name, seed, trials, passed, failures)


# ------------------------------------------------------------- properties

def _prop_ultrametric(star) -> str | None:
    report = stars.validate_star(star)
    if not report.ok:
        return "failed checks: %s" % ", ".join(report.failed())
    return None


def _prop_lambda(star) -> str | None:
    try:
        lam = stars.lambda_invariant(star)
    except StarforgeError as exc:
        return "lambda: %s" % exc
    if any(v == 0 for v in lam.values):
        return "lambda has a zero coordinate"
    bad = stars.lambda_ratio_law_violations(star)
    if bad:
        return "ratio law fails at %r" % (bad[:3],)
    return None


def _prop_unit_laws(star) -> str | None:
    bad = stars.unit_constant_law_violations(stars.unit_constants(star))
    if bad:
        return "unit-constant law fails at %r" % (bad[:3],)
    return None


def _prop_fiber(star) -> str | None:
    fiber = stars.fiber_algebra(star)
    emb = stars.embedding_dimension(star)
    if fiber.oblate != (emb <= 2):
        return "fiber verdict %r vs embedding dimension %d" % (fiber.oblate, emb)
    return None


def _prop_ideals(star) -> str | None:
    n = star.n
    for mask in range(1, (1 << n) - 1):
        subset = [i for i in range(n) if mask & (1 << i)]
        rep = stars.substar_ideal(star, subset)
        if not (rep.span_equal and rep.restriction_unit):
            return "subset %r ideal mismatch" % (subset,)
    return None


def _suite_ultrametric(seed, trials):
    return _tower_suite("ultrametric", seed, trials, _prop_ultrametric)


def _suite_lambda(seed, trials):
    return _tower_suite("lambda-laws", seed, trials, _prop_lambda)


def _suite_unit_laws(seed, trials):
    return _tower_suite("unit-laws", seed, trials, _prop_unit_laws)


def _suite_fiber(seed, trials):
    return _tower_suite("fiber", seed, trials, _prop_fiber)


def _suite_ideals(seed, trials):
    return _tower_suite("ideals", seed, trials, _prop_ideals, n_max=4)


def _suite_extension(seed, trials) -> SuiteResult:
    failures = []
    passed = 0
    for k in range(trials):
        rng = random.Random(seed + k)
        star = build.random_tower(seed + k, rng.randint(2, 4), 3)
        msg = None
        try:
            step = build.sample_step(star, rng, 3)
            outcome = build.extend_star_detailed(star, step)
            if not outcome.report.flat:
                msg = "flatness certificate failed"
            elif not stars.is_oblate(outcome.star):
                msg = "extension lost oblateness"
        except StarforgeError as exc:
            msg = str(exc)
        if msg is None:
            passed += 1
        else:
            failures.append(TrialFailure(k, msg))
    return SuiteResult("extension", seed, trials, passed, failures)


def _suite_filtration(seed, trials) -> SuiteResult:
    failures = []
    passed = 0
    for k in range(trials):
        rng = random.Random(seed + k)
        star = build.random_tower(seed + k, rng.randint(2, 4), 3)
        gen = stars.pair_generator(star, 0, rng.randrange(1, star.n)).germ
        msg = None
        try:
            rep = compare.ideal_filtration(star, [gen])
            if not rep.ok:
                return_step = [s for s in rep.steps if not s.cyclic_ok]
                msg = "filtration certificate failed (%d bad steps)" % len(return_step)
            elif rep.length > star.n:
                msg = "filtration longer than n"
        except StarforgeError as exc:
            msg = str(exc)
        if msg is None:
            passed += 1
        else:
            failures.append(TrialFailure(k, msg))
    return SuiteResult("filtration", seed, trials, passed, failures)


def _suite_nested(seed, trials) -> SuiteResult:
    failures = []
    passed = 0
    for k in range(trials):
        msg = None
        try:
            sub, sup = build.nested_tower_pair(seed + k, 3)
            rep = compare.compare_stars(sub, sup)
            if rep.verdict != "strictly-included":
                msg = "verdict %r" % rep.verdict
            else:
                wit = compare.nonflatness_witness(sub, sup)
                if not (wit.uv_zero and wit.phi_nonzero and wit.phi_well_defined):
                    msg = "witness incomplete"
        except StarforgeError as exc:
            msg = str(exc)
        if msg is None:
            passed += 1
        else:
            failures.append(TrialFailure(k, msg))
    return SuiteResult("nested", seed, trials, passed, failures)


# ------------------------------------------------------------ bivariate

def _random_bipoly(rng, xdeg, trunc, max_e=None) -> BiPoly:
    """Random element; max_e caps the true x-degree so substitution
    identities stay below the x-window."""
    top = xdeg - 1 if max_e is None else max_e
    coeffs = [QQ(0)] * (xdeg * trunc)
    for e in range(top + 1):
        for k in range(trunc):
            coeffs[e * trunc + k] = QQ(rng.randint(-3, 3))
    return BiPoly(xdeg, trunc, coeffs)


def _suite_theta(seed, trials) -> SuiteResult:
    failures = []
    passed = 0
    D = 4
    for k in range(trials):
        rng = random.Random(seed + k)
        p = rng.randint(1, 4)
        mu = _random_bipoly(rng, D, p)
        df = rng.randint(0, D - 1)
        f = _random_bipoly(rng, D, p + 1, max_e=df)
        g = _random_bipoly(rng, D, p + 1, max_e=D - 1 - df)
        th = ribbon.ThetaAutomorphism(p, mu)
        ok = ribbon.theta_apply(th, f * g) == ribbon.theta_apply(th, f) * ribbon.theta_apply(th, g)
        if ok:
            # exact inversion needs a degree-stable substitution
            lin = ribbon.ThetaAutomorphism(p, _random_bipoly(rng, D, p, max_e=1))
            try:
                ribbon.theta_inverse(lin)
            except StarforgeError as exc:
                ok = False
                failures.append(TrialFailure(k, "inverse: %s" % exc))
        else:
            failures.append(
                TrialFailure(
                    k,
                    "multiplicativity failed",
                    {"p": p, "mu": [str(c) for c in mu.coeffs]},
                )
            )
        if ok:
            passed += 1
    return SuiteResult("theta-mult", seed, trials, passed, failures)


def _suite_cocycle(seed, trials) -> SuiteResult:
    failures = []
    passed = 0
    D = 4
    for k in range(trials):
        rng = random.Random(seed + k)
        p = rng.randint(1, 4)
        mu1 = _random_bipoly(rng, D, p)
        top = [QQ(rng.randint(-3, 3)) for _ in range(D)]
        coeffs = list(mu1.coeffs)
        for e in range(D):
            coeffs[e * p + (p - 1)] = coeffs[e * p + (p - 1)] + top[e]
        mu2 = BiPoly(D, p, coeffs)
        try:
            rep = ribbon.induced_cocycle(p, mu1, mu2)
            if rep.tau != [QQ(0) + c for c in top]:
                failures.append(TrialFailure(k, "tau not recovered"))
                continue
        except StarforgeError as exc:
            failures.append(TrialFailure(k, str(exc)))
            continue
        passed += 1
    return SuiteResult("cocycle", seed, trials, passed, failures)


def _suite_extract(seed, trials) -> SuiteResult:
    failures = []
    passed = 0
    for k in range(trials):
        rng = random.Random(seed + k)
        n = rng.randint(2, 4)
        slopes = rng.sample(range(-6, 7), n)
        msg = None
        try:
            d = make_planes_deformation([QQ(c) for c in slopes], xdeg=3)
            got = extract_star(d).star
            want = stars.make_lines_star([QQ(c) for c in slopes])
            if got.levels != want.levels or got.space.rows != want.space.rows:
                msg = "extracted star differs for slopes %r" % (slopes,)
        except StarforgeError as exc:
            msg = "%s (slopes %r)" % (exc, slopes)
        if msg is None:
            passed += 1
        else:
            failures.append(TrialFailure(k, msg))
    return SuiteResult("extract", seed, trials, passed, failures)


# --------------------------------------------------------------- oracles

def naive_rref(rows):
    """Textbook Gaussian elimination over Fraction, last-nonzero pivoting.

    Kept independent of the linalg kernel on purpose: different scalar
    type, different pivot choice, no canonicalization tricks.
    """
    mat = [[Fraction(str(c)) for c in row] for row in rows]
    out = []
    pivots = []
    width = len(mat[0]) if mat else 0
    for col in range(width):
        hit = None
        for r in range(len(mat) - 1, -1, -1):
            if mat[r][col] != 0:
                hit = r
                break
        if hit is None:
            continue
        row = mat.pop(hit)
        row = [c / row[col] for c in row]
        mat = [
            [c - r[col] * p for c, p in zip(r, row)] if r[col] != 0 else r for r in mat
        ]
        out = [
            [c - r[col] * p for c, p in zip(r, row)] if r[col] != 0 else r for r in out
        ]
        out.append(row)
        pivots.append(col)
    order = sorted(range(len(out)), key=lambda i: pivots[i])
    return [out[i] for i in order], sorted(pivots)


def naive_member(rows, vec) -> bool:
    base, _ = naive_rref(rows)
    again, _ = naive_rref(base + [list(vec)])
    return len(again) == len(base)


def freeness_oracle(module: build.LineModule) -> bool:
    """Invariant-factor test: the module is free over K[t]/(t^q) iff the
    nilpotent action has all Jordan blocks of size exactly q."""
    m = len(module.action)
    if m == 0:
        return True
    power = [[QQ(1) if i == j else QQ(0) for j in range(m)] for i in range(m)]
    ranks = [m]
    for _ in range(module.q):
        power = build._mat_mul(power, module.action)
        base, _ = naive_rref([row for row in power if any(c != 0 for c in row)])
        ranks.append(len(base))
    if ranks[module.q] != 0:
        return False            # t^q does not annihilate: not a module at all
    blocks = ranks[0] - ranks[1]
    if blocks == 0:
        return m == 0
    if m % module.q != 0 or blocks != m // module.q:
        return False
    # all blocks have size q iff rank drops by the block count every step
    return all(ranks[k] - ranks[k + 1] == blocks for k in range(module.q))


def _random_invertible(rng, m):
    while True:
        S = [[QQ(rng.randint(-2, 2)) for _ in range(m)] for _ in range(m)]
        base, _ = naive_rref(S)
        if len(base) == m:
            return S


def _mat_inv(S):
    m = len(S)
    aug = [list(row) + [QQ(1) if i == j else QQ(0) for j in range(m)] for i, row in enumerate(S)]
    red, piv = naive_rref(aug)
    if piv[:m] != list(range(m)):
        raise UsageError("matrix is singular")
    return [[scalar_from_string(str(c)) for c in row[m:]] for row in red]


def random_line_module(seed: int, max_dim: int = 12) -> build.LineModule:
    """Nilpotent action conjugated from a random block shape; roughly half
    the draws are free by construction."""
    rng = random.Random(seed)
    q = rng.randint(2, 4)
    if rng.random() < 0.5:
        blocks = [q] * rng.randint(1, max_dim // q)
    else:
        blocks = [rng.randint(1, q) for _ in range(rng.randint(1, 4))]
        while sum(blocks) > max_dim:
            blocks.pop()
        if not blocks:
            blocks = [1]
    m = sum(blocks)
    J = [[QQ(0)] * m for _ in range(m)]
    at = 0
    for size in blocks:
        for r in range(size - 1):
            J[at + r][at + r + 1] = QQ(1)
        at += size
    S = _random_invertible(rng, m)
    action = build._mat_mul(build._mat_mul(_mat_inv(S), J), S)
    return build.LineModule(q, action)


def _suite_kernel(seed, trials) -> SuiteResult:
    failures = []
    passed = 0
    for k in range(trials):
        module = random_line_module(seed + k)
        fast = build.flatness_over_line(module)
        slow = freeness_oracle(module)
        if fast == slow:
            passed += 1
        else:
            failures.append(
                TrialFailure(k, "flatness %r vs oracle %r (dim %d, q %d)"
                             % (fast, slow, len(module.action), module.q))
            )
    return SuiteResult("kernel", seed, trials, passed, failures)


def _suite_linalg(seed, trials) -> SuiteResult:
    from .linalg import LinearSpace

    failures = []
    passed = 0
    for k in range(trials):
        rng = random.Random(seed + k)
        ambient = rng.randint(1, 8)
        rows = [
            [QQ(rng.randint(-4, 4)) for _ in range(ambient)]
            for _ in range(rng.randint(1, 6))
        ]
        probe = [QQ(rng.randint(-4, 4)) for _ in range(ambient)]
        space = LinearSpace.span(ambient, rows)
        base, _ = naive_rref(rows)
        msg = None
        if space.dim != len(base):
            msg = "dim %d vs oracle %d" % (space.dim, len(base))
        elif space.contains(probe) != naive_member(rows, probe):
            msg = "membership disagrees on %r" % (probe,)
        else:
            other = [
                [QQ(rng.randint(-4, 4)) for _ in range(ambient)]
                for _ in range(rng.randint(1, 6))
            ]
            meet = space.intersect(LinearSpace.span(ambient, other))
            for row in meet.rows:
                if not (naive_member(rows, row) and naive_member(other, row)):
                    msg = "intersection row escapes a factor"
                    break
        if msg is None:
            passed += 1
        else:
            failures.append(TrialFailure(k, msg))
    return SuiteResult("linalg", seed, trials, passed, failures)


SUITES = {
    "ultrametric": _suite_ultrametric,
    "lambda-laws": _suite_lambda,
    "unit-laws": _suite_unit_laws,
    "extension": _suite_extension,
    "fiber": _suite_fiber,
    "ideals": _suite_ideals,
    "filtration": _suite_filtration,
    "nested": _suite_nested,
    "theta-mult": _suite_theta,
    "cocycle": _suite_cocycle,
    "extract": _suite_extract,
    "kernel": _suite_kernel,
    "linalg": _suite_linalg,
}


def run_suite(name: str, seed: int = 0, trials: int = 100) -> SuiteResult:
    if name not in SUITES:
        raise UsageError(
            "unknown suite %r (choose from %s)" % (name, ", ".join(sorted(SUITES)))
        )
    if trials < 1:
        raise UsageError("trials must be positive")
    return SUITES[name](seed, trials)
