"""JSON scenario files and the result documents computed from them."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema

from .collection import CaseCollection
from .errors import ExpertRevError, ScenarioError
from .operators import OPERATOR_NAMES, Report, ReportSequence, make_operator
from .propositional import (
    Expert,
    Formula,
    Not,
    Signature,
    compact_formula,
    parse_expertise_formula,
    parse_formula,
)

_NAMES = {"type": "array", "items": {"type": "string", "minLength": 1}, "minItems": 1, "uniqueItems": True}

SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["variables", "cases", "sources"],
    "additionalProperties": False,
    "properties": {
        "description": {"type": "string"},
        "variables": _NAMES,
        "cases": _NAMES,
        "sources": _NAMES,
        "reports": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["source", "case", "formula"],
                "additionalProperties": False,
                "properties": {
                    "source": {"type": "string"},
                    "case": {"type": "string"},
                    "formula": {"type": "string"},
                },
            },
        },
        "operator": {
            "type": "object",
            "required": ["name"],
            "additionalProperties": False,
            "properties": {
                "name": {"enum": list(OPERATOR_NAMES)},
                "engine": {"enum": ["auto", "brute", "decomposed"]},
            },
        },
        "prior": {"type": "object", "additionalProperties": {"type": "array", "items": {"type": "string"}}},
        "queries": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["case", "formula"],
                "additionalProperties": False,
                "properties": {
                    "case": {"type": "string"},
                    "formula": {"type": "string"},
                    "target": {"enum": ["belief", "knowledge"]},
                    "expected": {"type": "boolean"},
                },
            },
        },
        "postulates": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "names": {"type": "array", "items": {"type": "string"}},
                "operators": {"type": "array", "items": {"enum": list(OPERATOR_NAMES)}},
                "max_length": {"type": "integer", "minimum": 0},
                "pool": {"type": "array", "items": {"type": "string"}},
                "mode": {"enum": ["exhaustive", "sampled"]},
                "seed": {"type": "integer"},
                "count": {"type": "integer", "minimum": 1},
            },
        },
    },
}


@dataclass(frozen=True)
class Query:
    case: str
    text: str
    formula: Formula
    target: str = "belief"
    expected: bool | None = None


@dataclass
class Scenario:
    sig: Signature
    sequence: ReportSequence
    operator: str = "weak-mb"
    engine: str = "auto"
    prior: CaseCollection | None = None
    queries: list[Query] = field(default_factory=list)
    postulates: dict | None = None
    description: str = ""

    def make_operator(self):
        return make_operator(self.operator, self.sig, self.prior, self.engine)


def _field(path) -> str:
    return "/".join(str(p) for p in path) or "<root>"


def parse_scenario(doc: Any) -> Scenario:
    """Validate a decoded JSON document and resolve every name in it."""
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as e:
        raise ScenarioError(_field(e.absolute_path), e.message) from None
    try:
        sig = Signature(doc["variables"], doc["cases"], doc["sources"])
    except ExpertRevError as e:
        raise ScenarioError("signature", str(e)) from None

    def resolve(where: str, fn, *args):
        try:
            return fn(*args)
        except ExpertRevError as e:
            raise ScenarioError(where, str(e)) from None

    reports = [
        resolve(f"reports/{k}", Report.make, sig, r["source"], r["case"], r["formula"])
        for k, r in enumerate(doc.get("reports", []))
    ]
    prior = None
    if doc.get("prior"):
        entries = {}
        for case, formulas in doc["prior"].items():
            resolve(f"prior/{case}", sig.case_index, case)
            entries[case] = [
                resolve(f"prior/{case}/{k}", parse_expertise_formula, f, sig) for k, f in enumerate(formulas)
            ]
        prior = CaseCollection(sig, entries)
    queries = []
    for k, q in enumerate(doc.get("queries", [])):
        resolve(f"queries/{k}/case", sig.case_index, q["case"])
        f = resolve(f"queries/{k}/formula", parse_expertise_formula, q["formula"], sig)
        queries.append(Query(q["case"], q["formula"], f, q.get("target", "belief"), q.get("expected")))
    post = doc.get("postulates")
    if post and "pool" in post:
        for k, f in enumerate(post["pool"]):
            resolve(f"postulates/pool/{k}", parse_formula, f, sig)
    op = doc.get("operator", {})
    return Scenario(sig, ReportSequence(sig, reports), op.get("name", "weak-mb"), op.get("engine", "auto"),
                    prior, queries, post, doc.get("description", ""))


def load_scenario(path: str | Path) -> Scenario:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ScenarioError(f"line {e.lineno}", e.msg) from None
    except OSError as e:
        raise ScenarioError(str(path), e.strerror or str(e)) from None
    return parse_scenario(doc)


def trust_masks(sc: Scenario) -> list[int]:
    """Masks whose expertise verdicts are reported.

    Every proper non-empty mask for signatures with at most two variables;
    otherwise the single variables plus whatever was reported.
    """
    sig = sc.sig
    if sig.n_valuations <= 4:
        return list(range(1, sig.full_mask))
    masks = {sig.variable_mask(v) for v in sig.variables}
    masks.update(r.mask for r in sc.sequence if r.mask != sig.full_mask)
    return sorted(masks)


def trust_verdicts(sc: Scenario, out) -> dict[str, dict[str, str]]:
    sig = sc.sig
    case = sig.cases[0]  # expertise does not depend on the case
    consistent = out.plausible_count > 0
    verdicts: dict[str, dict[str, str]] = {}
    for s in sig.ordinary_sources:
        row = {}
        for m in trust_masks(sc):
            f = compact_formula(m, sig)
            if not consistent:
                row[str(f)] = "inconsistent"
            elif out.holds(case, Expert(s, f)):
                row[str(f)] = "expert"
            elif out.holds(case, Not(Expert(s, f))):
                row[str(f)] = "non-expert"
            else:
                row[str(f)] = "undecided"
        verdicts[s] = row
    return verdicts


def evaluate_scenario(sc: Scenario, timing: bool = False) -> tuple[dict, bool]:
    """Result document and whether every query with an ``expected`` value matched."""
    start = time.perf_counter()
    op = sc.make_operator()
    out = op.evaluate(sc.sequence)
    results, ok = [], True
    for q in sc.queries:
        value = out.holds(q.case, q.formula, "plausible" if q.target == "belief" else "possible")
        entry = {"case": q.case, "formula": q.text, "target": q.target, "holds": bool(value)}
        if q.expected is not None:
            entry["expected"] = q.expected
            entry["match"] = bool(value) == q.expected
            ok &= entry["match"]
        results.append(entry)
    sig = sc.sig
    doc = {
        "operator": sc.operator,
        "sequence": sc.sequence.to_list(),
        "queries": results,
        "prop_models": {c: out.prop_models(c).labels(sig) for c in sig.cases},
        "knowledge_models": {c: out.prop_models(c, "possible").labels(sig) for c in sig.cases},
        "trust": trust_verdicts(sc, out),
        "stats": {"possible_count": int(out.possible_count), "plausible_count": int(out.plausible_count),
                  "engine": "decomposed" if op.uses_decomposition() else "dense"},
    }
    if timing:
        doc["stats"]["wall_ms"] = round((time.perf_counter() - start) * 1000, 3)
    return doc, ok


def dump(doc: Any) -> str:
    """Byte-stable JSON rendering."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
