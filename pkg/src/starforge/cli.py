"""Command line driver.

Four subcommands: analyze a presentation document, replay a builder
script, compare two stars, and run a seeded verification suite.  Exit
codes: 0 all checks pass, 1 a mathematical check failed (the report
carries the witness), 2 malformed input or arguments.

Reports are deterministic for a fixed input and seed except for the
timing field.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__, build, compare, deform, stars
from .deform import DeformPresentation
from .errors import DegenerateExtension, StarforgeError, UsageError
from .io import (
    BuilderScript,
    document_for,
    dumps,
    load_path,
    save_path,
)
from .scalars import scalar_to_string
from .series import BiPoly, MultiGerm, TruncSeries
from .stars import StarPresentation
from .verify import SUITES, run_suite


def _jsonable(value):
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, TruncSeries):
        return {"trunc": value.trunc, "coeffs": [scalar_to_string(c) for c in value.coeffs]}
    if isinstance(value, BiPoly):
        return {
            "xdeg": value.xdeg,
            "trunc": value.trunc,
            "coeffs": [scalar_to_string(c) for c in value.coeffs],
        }
    if isinstance(value, MultiGerm):
        return [_jsonable(p) for p in value.parts]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    try:
        return scalar_to_string(value)
    except (AttributeError, TypeError):
        return repr(value)


class ReportBuilder:
    def __init__(self, command, inputs, seed=None):
        self.report = {
            "command": command,
            "inputs": list(inputs),
            "seed": seed,
            "checks": [],
            "data": {},
        }
        self.t0 = time.monotonic()

    def check(self, name, ok, witness=None):
        entry = {"name": name, "status": "pass" if ok else "fail"}
        if witness is not None:
            entry["witness"] = _jsonable(witness)
        self.report["checks"].append(entry)
        return ok

    def skip(self, name, reason):
        self.report["checks"].append(
            {"name": name, "status": "skip", "reason": str(reason)}
        )

    def data(self, key, value):
        self.report["data"][key] = _jsonable(value)

    def finish(self):
        failed = [c["name"] for c in self.report["checks"] if c["status"] == "fail"]
        self.report["verdict"] = "fail" if failed else "pass"
        self.report["timing_ms"] = round(1000 * (time.monotonic() - self.t0), 3)
        return self.report


def _print_report(report, fmt, out=sys.stdout):
    if fmt == "json":
        out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
        return
    out.write("%s: %s\n" % (report["command"], ", ".join(report["inputs"]) or "-"))
    for c in report["checks"]:
        line = "  %-28s %s" % (c["name"], c["status"].upper())
        if c["status"] == "fail" and "witness" in c:
            line += "  %s" % json.dumps(c["witness"], sort_keys=True)
        if c["status"] == "skip":
            line += "  (%s)" % c["reason"]
        out.write(line + "\n")
    for k in sorted(report["data"]):
        out.write("  %s = %s\n" % (k, json.dumps(report["data"][k], sort_keys=True)))
    out.write("verdict: %s\n" % report["verdict"].upper())


def _analyze_star(star: StarPresentation, rb: ReportBuilder):
    validation = stars.validate_star(star)
    for res in validation.checks:
        rb.check("star/" + res.name, res.ok, res.witness)
    rb.data("n", star.n)
    rb.data("levels", list(star.levels))
    rb.data("dim", star.dim)
    if not validation.ok:
        return
    rb.data("spectrum", stars.spectrum(star).entries)
    fiber = stars.fiber_algebra(star)
    emb = stars.embedding_dimension(star)
    rb.data("fiber_dim", fiber.dim)
    rb.data("fiber_nilpotency", fiber.nilpotency)
    rb.data("embedding_dim", emb)
    rb.data("oblate", fiber.oblate)
    rb.check("fiber-vs-embedding", fiber.oblate == (emb <= 2))
    try:
        lam = stars.lambda_invariant(star)
        rb.data("lambda", [scalar_to_string(v) for v in lam.values])
        rb.check("lambda-nonzero", all(v != 0 for v in lam.values))
        rb.check("lambda-ratio-law", not stars.lambda_ratio_law_violations(star))
    except StarforgeError as exc:
        rb.skip("lambda", exc)
    try:
        table = stars.unit_constants(star)
        bad = stars.unit_constant_law_violations(table)
        rb.check("unit-constant-laws", not bad, bad[:3] if bad else None)
    except StarforgeError as exc:
        rb.skip("unit-constant-laws", exc)
    if star.n <= 5:
        bad_subsets = []
        for mask in range(1, (1 << star.n) - 1):
            subset = [i for i in range(star.n) if mask & (1 << i)]
            rep = stars.substar_ideal(star, subset)
            if not (rep.span_equal and rep.restriction_unit):
                bad_subsets.append(subset)
        rb.check("substar-ideals", not bad_subsets, bad_subsets or None)


def _analyze_deformation(d: DeformPresentation, rb: ReportBuilder):
    validation = deform.validate_deformation(d)
    for res in validation.checks:
        rb.check("deformation/" + res.name, res.ok, res.witness)
    rb.data("n", d.n)
    rb.data("levels", list(d.levels))
    rb.data("xdeg", d.xdeg)
    rb.data("dim", d.dim)
    if not validation.ok:
        return
    rb.data("spectrum", deform.deform_spectrum(d).entries)
    try:
        lam = deform.deform_lambda(d)
        rb.data("lambda", [scalar_to_string(v) for v in lam])
        rb.check("lambda-nonzero", all(v != 0 for v in lam))
    except StarforgeError as exc:
        rb.skip("lambda", exc)
    try:
        table = deform.deform_unit_constants(d)
        bad = stars.unit_constant_law_violations(table)
        rb.check("unit-constant-laws", not bad, bad[:3] if bad else None)
        rb.check("lambda-ratio-law", not deform.deform_lambda_ratio_violations(d))
    except StarforgeError as exc:
        rb.skip("unit-constant-laws", exc)
    extraction = deform.extract_star(d)
    rb.check("central-star-valid", extraction.validation.ok)
    rb.check("central-star-oblate", extraction.oblate)
    rb.check("spectrum-match", extraction.spectrum_match)
    rb.check("component-ideals", all(extraction.component_ideal_ok))
    rb.check("filtrations", extraction.filtration_ok)


def cmd_analyze(args) -> int:
    worst = 0
    for path in args.files:
        obj = load_path(path)
        rb = ReportBuilder("analyze", [path], args.seed)
        if isinstance(obj, BuilderScript):
            raise UsageError("%s: builder scripts go through the build command" % path)
        try:
            if isinstance(obj, StarPresentation):
                _analyze_star(obj, rb)
            else:
                _analyze_deformation(obj, rb)
        except StarforgeError as exc:
            rb.check("analysis", False, getattr(exc, "witness", None) or str(exc))
        report = rb.finish()
        _print_report(report, args.format)
        if report["verdict"] != "pass":
            worst = max(worst, 1)
    return worst


def cmd_build(args) -> int:
    for path in args.files:
        obj = load_path(path)
        if not isinstance(obj, BuilderScript):
            raise UsageError("%s: expected a builder-script document" % path)
        star = obj.base_star()
        provenance = [{"base": obj.base_kind, "arg": _jsonable(obj.base_arg)}]
        for k, step in enumerate(obj.steps):
            value = build.nondegeneracy(star, step)
            if value == 0:
                raise DegenerateExtension(
                    "step %d refused: degeneracy sum %s" % (k, scalar_to_string(value))
                )
            star = build.extend_star(star, step)
            provenance.append(
                {
                    "step": k,
                    "contacts": list(step.p_new),
                    "degeneracy_sum": scalar_to_string(value),
                }
            )
        doc = document_for(star, metadata={"provenance": provenance, "seed": args.seed})
        if args.output:
            save_path(args.output, doc)
        else:
            sys.stdout.write(dumps(doc))
    return 0


def cmd_compare(args) -> int:
    if len(args.files) != 2:
        raise UsageError("compare needs exactly two documents")
    a, b = (load_path(p) for p in args.files)
    if not (isinstance(a, StarPresentation) and isinstance(b, StarPresentation)):
        raise UsageError("compare works on star documents")
    rb = ReportBuilder("compare", args.files, args.seed)
    report = compare.compare_stars(a, b)
    rb.data("verdict", report.verdict)
    rb.data("spectrum_a", report.spectrum_a.entries)
    rb.data("spectrum_b", report.spectrum_b.entries)
    rb.check("comparable", report.verdict != "incomparable")
    if report.verdict == "strictly-included":
        sub, sup = (a, b) if report.sub_index == 0 else (b, a)
        rb.data("sub_index", report.sub_index)
        rb.data("deeper_pair", list(report.witness))
        wit = compare.nonflatness_witness(sub, sup)
        rb.data("tensor_witness", {
            "branch": wit.index,
            "u": wit.u,
            "v": wit.v,
            "phi": wit.phi_value,
        })
        rb.check("uv-zero", wit.uv_zero)
        rb.check("phi-nonzero", wit.phi_nonzero)
        rb.check("phi-well-defined", wit.phi_well_defined)
    out = rb.finish()
    _print_report(out, args.format)
    return 0 if out["verdict"] == "pass" else 1


def cmd_verify(args) -> int:
    worst = 0
    for name in args.suites:
        result = run_suite(name, seed=args.seed, trials=args.trials)
        rb = ReportBuilder("verify", [name], args.seed)
        rb.data("trials", result.trials)
        rb.data("passed", result.passed)
        rb.check("suite/" + name, result.ok)
        for f in result.failures[:10]:
            rb.check("trial-%d" % f.trial, False, f.message)
            if f.reproducer is not None:
                rb.data("reproducer-%d" % f.trial, f.reproducer)
        report = rb.finish()
        _print_report(report, args.format)
        if not result.ok:
            worst = 1
    return worst


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starforge",
        description="exact local models of star glueings and their deformations",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0, metavar="N")
        p.add_argument("--trials", type=int, default=100, metavar="N")
        p.add_argument(
            "--format", choices=("json", "text"), default="text"
        )

    p = sub.add_parser("analyze", help="run the invariant battery on documents")
    common(p)
    p.add_argument("files", nargs="+", metavar="FILE")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("build", help="replay a builder script into a star document")
    common(p)
    p.add_argument("--output", metavar="PATH")
    p.add_argument("files", nargs="+", metavar="FILE")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("compare", help="compare two star documents")
    common(p)
    p.add_argument("files", nargs=2, metavar="FILE")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="run seeded randomized suites")
    common(p)
    p.add_argument(
        "suites",
        nargs="+",
        metavar="SUITE",
        help="one of: %s" % ", ".join(sorted(SUITES)),
    )
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except StarforgeError as exc:
        witness = getattr(exc, "witness", None)
        print("failure: %s" % exc, file=sys.stderr)
        if witness is not None:
            print("witness: %s" % json.dumps(_jsonable(witness), sort_keys=True),
                  file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
