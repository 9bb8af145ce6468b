"""Replay the worked examples stored in ``data/golden.json``."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .collection import CaseCollection, is_consequence
from .errors import UnknownNameError
from .expertise import Partition, World, satisfies
from .operators import ReportSequence, make_operator
from .postulates import check_h_boundedness, check_success_variants, impossibility_construction
from .propositional import Signature, models, parse_expertise_formula, parse_formula


@lru_cache(maxsize=None)
def golden() -> dict:
    text = resources.files("expertrev").joinpath("data/golden.json").read_text(encoding="utf-8")
    return json.loads(text)


REPRO_IDS = tuple(golden())


@dataclass(frozen=True)
class CheckOutcome:
    example: str
    label: str
    expected: object
    actual: object
    provenance: str

    @property
    def passed(self) -> bool:
        return self.expected == self.actual

    def to_dict(self) -> dict:
        return {"check": self.label, "expected": self.expected, "actual": self.actual,
                "provenance": self.provenance, "passed": self.passed}


def _signature(entry: dict) -> Signature:
    s = entry["signature"]
    return Signature(s["variables"], s["cases"], s["sources"])


def _world(sig: Signature, spec: dict) -> World:
    vals = {}
    for case, text in spec["valuations"].items():
        m = models(parse_formula(text, sig), sig)
        if len(m) != 1:
            raise ValueError(f"valuation for {case} must pick out one valuation: {text!r}")
        vals[case] = next(iter(m))
    parts = {}
    for source, cells in spec.get("partitions", {}).items():
        cell_masks = [list(models(parse_formula(t, sig), sig)) for t in cells]
        parts[source] = Partition.from_cells(cell_masks, sig.n_valuations)
    return World.make(sig, vals, parts)


def _check(name: str, entry: dict, sig: Signature, seq: ReportSequence | None, chk: dict) -> list[CheckOutcome]:
    kind, prov = chk["kind"], chk["provenance"]
    ops = chk.get("operators", [])
    out: list[CheckOutcome] = []

    def add(label, expected, actual):
        out.append(CheckOutcome(name, label, expected, actual, prov))

    if kind == "satisfies":
        w = _world(sig, entry["world"])
        f = parse_expertise_formula(chk["formula"], sig)
        add(f"W, {chk['case']} |= {chk['formula']}", chk["expected"], satisfies(w, chk["case"], f))
    elif kind == "consequence":
        g = CaseCollection(sig, {c: [parse_expertise_formula(t, sig) for t in fs]
                                 for c, fs in entry["collection"].items()})
        f = parse_expertise_formula(chk["formula"], sig)
        add(f"{chk['formula']} in Cn_{chk['case']}(G)", chk["expected"], is_consequence(g, chk["case"], f))
    elif kind == "query":
        f = parse_expertise_formula(chk["formula"], sig)
        which = "plausible" if chk["target"] == "belief" else "possible"
        letter = "B" if which == "plausible" else "K"
        for op in ops:
            value = make_operator(op, sig)(seq).holds(chk["case"], f, which)
            add(f"{op}: {chk['formula']} in {letter}_{chk['case']}", chk["expected"], bool(value))
    elif kind == "prop_beliefs":
        want = models(parse_formula(chk["formula"], sig), sig)
        for op in ops:
            got = make_operator(op, sig)(seq).prop_models(chk["case"])
            add(f"{op}: propositional beliefs at {chk['case']} are Cn({chk['formula']})",
                want.labels(sig), got.labels(sig))
    elif kind == "world_count":
        for op in ops:
            o = make_operator(op, sig)(seq)
            count = o.possible_count if chk["set"] == "possible" else o.plausible_count
            add(f"{op}: {chk['set']} world count", chk["expected"], int(count))
    elif kind == "h_boundedness":
        for op in ops:
            rep = check_h_boundedness(make_operator(op, sig), seq, chk["H"], chk["case"])
            add(f"{op}: bound at {chk['case']} with H={chk['H']}", chk["expected"], rep.status)
    elif kind == "strong_cond_success":
        sigma, report = impossibility_construction(sig)
        for op in ops:
            _, strong = check_success_variants(make_operator(op, sig), sigma, report)
            add(f"{op}: Strong-cond-success after {sigma} then {report}", chk["expected"], strong.status)
    else:
        raise ValueError(f"unknown golden check kind {kind!r}")
    return out


def run_repro(example: str) -> list[CheckOutcome]:
    """Evaluate every golden check of one example id."""
    table = golden()
    if example not in table:
        raise UnknownNameError("repro id", example)
    entry = table[example]
    sig = _signature(entry)
    seq = None
    if "reports" in entry:
        seq = ReportSequence.of(sig, [tuple(r) for r in entry["reports"]])
    outcomes = []
    for chk in entry["checks"]:
        outcomes.extend(_check(example, entry, sig, seq, chk))
    return outcomes


def run_all() -> list[CheckOutcome]:
    return [o for ex in REPRO_IDS for o in run_repro(ex)]


__all__ = ["REPRO_IDS", "CheckOutcome", "golden", "run_all", "run_repro"]
