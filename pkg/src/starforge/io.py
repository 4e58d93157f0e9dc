"""JSON documents for presentations, builder scripts, and reports.

All scalars travel as "num" or "num/den" strings so the artifacts stay
exact and diffable; floats are rejected on input.  Emission is canonical
(sorted keys, fixed indentation), so emit-parse-emit is the identity on
every document this module produces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .build import ExtensionStep
from .deform import DeformPresentation
from .errors import UsageError
from .scalars import scalar_from_string, scalar_to_string
from .series import TruncSeries
from .stars import (
    StarPresentation,
    make_congruence_pair_star,
    make_initial_star,
    make_lines_star,
)

DOC_VERSION = 1


def _scalar_in(value, where: str):
    if isinstance(value, bool) or isinstance(value, float):
        raise UsageError("%s: scalars must be rational strings" % where)
    if isinstance(value, int):
        return scalar_from_string(str(value))
    if isinstance(value, str):
        try:
            return scalar_from_string(value)
        except UsageError as exc:
            raise UsageError("%s: %s" % (where, exc)) from None
    raise UsageError("%s: scalars must be rational strings" % where)


def _row_in(row, where: str):
    if not isinstance(row, list):
        raise UsageError("%s: expected an array" % where)
    return [_scalar_in(v, "%s[%d]" % (where, k)) for k, v in enumerate(row)]


def _levels_in(obj, where: str):
    levels = obj.get("levels")
    if (
        not isinstance(levels, list)
        or not levels
        or any(not isinstance(q, int) or isinstance(q, bool) or q < 1 for q in levels)
    ):
        raise UsageError("%s: levels must be positive integers" % where)
    return tuple(levels)


@dataclass
class BuilderScript:
    """A base fixture plus extension steps, replayable into a star."""

    base_kind: str                 # pair | lines | initial
    base_arg: object
    steps: list = field(default_factory=list)

    def base_star(self) -> StarPresentation:
        if self.base_kind == "pair":
            return make_congruence_pair_star(self.base_arg)
        if self.base_kind == "lines":
            return make_lines_star(self.base_arg)
        if self.base_kind == "initial":
            return make_initial_star(self.base_arg)
        raise UsageError("unknown base kind %r" % self.base_kind)


def star_document(star: StarPresentation, metadata=None) -> dict:
    doc = {
        "kind": "star",
        "version": DOC_VERSION,
        "levels": list(star.levels),
        "basis": [[scalar_to_string(v) for v in row] for row in star.space.rows],
    }
    if metadata:
        doc["metadata"] = metadata
    return doc


def deformation_document(d: DeformPresentation, metadata=None) -> dict:
    doc = {
        "kind": "deformation",
        "version": DOC_VERSION,
        "xdeg": d.xdeg,
        "levels": list(d.levels),
        "basis": [[scalar_to_string(v) for v in row] for row in d.space.rows],
    }
    if metadata:
        doc["metadata"] = metadata
    return doc


def script_document(script: BuilderScript, metadata=None) -> dict:
    if script.base_kind == "lines":
        base = {"lines": [scalar_to_string(c) for c in script.base_arg]}
    elif script.base_kind in ("pair", "initial"):
        base = {script.base_kind: script.base_arg}
    else:
        raise UsageError("unknown base kind %r" % script.base_kind)
    doc = {
        "kind": "builder-script",
        "version": DOC_VERSION,
        "base": base,
        "steps": [
            {
                "contacts": list(step.p_new),
                "units": [[scalar_to_string(c) for c in b.coeffs] for b in step.beta],
            }
            for step in script.steps
        ],
    }
    if metadata:
        doc["metadata"] = metadata
    return doc


def document_for(obj, metadata=None) -> dict:
    if isinstance(obj, StarPresentation):
        return star_document(obj, metadata)
    if isinstance(obj, DeformPresentation):
        return deformation_document(obj, metadata)
    if isinstance(obj, BuilderScript):
        return script_document(obj, metadata)
    raise UsageError("cannot serialize %r" % type(obj).__name__)


def _parse_star(obj: dict):
    levels = _levels_in(obj, "star")
    ambient = sum(levels)
    rows = obj.get("basis")
    if not isinstance(rows, list):
        raise UsageError("star: basis must be an array of rows")
    parsed = []
    for k, row in enumerate(rows):
        vec = _row_in(row, "basis[%d]" % k)
        if len(vec) != ambient:
            raise UsageError(
                "basis[%d]: row length %d, ambient %d" % (k, len(vec), ambient)
            )
        parsed.append(vec)
    return StarPresentation.from_rows(levels, parsed)


def _parse_deformation(obj: dict):
    levels = _levels_in(obj, "deformation")
    xdeg = obj.get("xdeg")
    if not isinstance(xdeg, int) or isinstance(xdeg, bool) or xdeg < 1:
        raise UsageError("deformation: xdeg must be a positive integer")
    ambient = xdeg * sum(levels)
    rows = obj.get("basis")
    if not isinstance(rows, list):
        raise UsageError("deformation: basis must be an array of rows")
    parsed = []
    for k, row in enumerate(rows):
        vec = _row_in(row, "basis[%d]" % k)
        if len(vec) != ambient:
            raise UsageError(
                "basis[%d]: row length %d, ambient %d" % (k, len(vec), ambient)
            )
        parsed.append(vec)
    return DeformPresentation.from_rows(xdeg, levels, parsed)


def _parse_script(obj: dict):
    base = obj.get("base")
    if not isinstance(base, dict) or len(base) != 1:
        raise UsageError("builder-script: base must name exactly one fixture")
    kind, arg = next(iter(base.items()))
    if kind == "pair":
        if not isinstance(arg, int) or isinstance(arg, bool) or arg < 1:
            raise UsageError("base.pair: expected a positive integer")
    elif kind == "initial":
        if not isinstance(arg, int) or isinstance(arg, bool) or arg < 2:
            raise UsageError("base.initial: expected an integer >= 2")
    elif kind == "lines":
        arg = _row_in(arg, "base.lines")
    else:
        raise UsageError("builder-script: unknown base kind %r" % kind)
    raw_steps = obj.get("steps", [])
    if not isinstance(raw_steps, list):
        raise UsageError("builder-script: steps must be an array")
    steps = []
    for k, raw in enumerate(raw_steps):
        where = "steps[%d]" % k
        if not isinstance(raw, dict):
            raise UsageError("%s: expected an object" % where)
        contacts = raw.get("contacts")
        if (
            not isinstance(contacts, list)
            or not contacts
            or any(not isinstance(p, int) or isinstance(p, bool) or p < 1 for p in contacts)
        ):
            raise UsageError("%s.contacts: expected positive integers" % where)
        units = raw.get("units")
        if not isinstance(units, list) or len(units) != len(contacts):
            raise UsageError("%s.units: expected one unit per contact" % where)
        beta = []
        for i, coeffs in enumerate(units):
            vec = _row_in(coeffs, "%s.units[%d]" % (where, i))
            if not vec:
                raise UsageError("%s.units[%d]: empty series" % (where, i))
            beta.append(TruncSeries(len(vec), vec))
        steps.append(ExtensionStep(tuple(contacts), tuple(beta)))
    return BuilderScript(kind, arg, steps)


_PARSERS = {
    "star": _parse_star,
    "deformation": _parse_deformation,
    "builder-script": _parse_script,
}


def parse_document(obj):
    if not isinstance(obj, dict):
        raise UsageError("document must be a JSON object")
    kind = obj.get("kind")
    if kind not in _PARSERS:
        raise UsageError("unknown document kind %r" % kind)
    version = obj.get("version", DOC_VERSION)
    if version != DOC_VERSION:
        raise UsageError("unsupported document version %r" % version)
    return _PARSERS[kind](obj)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError("not valid JSON: %s" % exc) from None
    return parse_document(obj)


def load_path(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    return loads(text)


def save_path(path: str, doc):
    if not isinstance(doc, dict):
        doc = document_for(doc)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))
