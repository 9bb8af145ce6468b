"""Executable postulate checks over finite spaces of report sequences.

Collection (in)equalities are decided on elementary closures of world sets:
``B^σ`` is identified with ``cl(Y_σ)`` and ``K^σ`` with ``cl(X_σ)``.  A check
that finds no violation reports ``holds-on-space``, which only covers the
sequences generated by the space.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .collection import WorldSet, elementary_closure, mod_of, prop_belief_models
from .errors import BoundednessViolated, NotApplicable, UnknownNameError
from .expertise import Universe, get_universe
from .operators import (
    Operator,
    RankFunction,
    Report,
    ReportSequence,
    make_operator,
    soundness_collection,
    star_consistent,
)
from .propositional import (
    RELIABLE,
    And,
    Expert,
    ModelSet,
    Not,
    Signature,
    Sound,
    canonical_cnf,
    canonical_formula,
    compact_formula,
)

HOLDS = "holds-on-space"
COUNTEREXAMPLE = "counterexample"

BASIC_POSTULATES = (
    "Closure",
    "Containment",
    "Consistency",
    "Soundness",
    "K-bound",
    "Prior-Extension",
    "Rearrangement",
    "Equivalence",
)
CONDITIONING_CONDITIONS = ("Duplicate-removal", "Conditional-consistency", "Inclusion-vacuity", "Acyc(2)")


# --------------------------------------------------------------------------
# Sequence spaces


@dataclass(frozen=True)
class SequenceSpace:
    """All report sequences up to ``max_length``, or a seeded sample of them.

    Reports range over ``pool × sources × cases``; the default pool is every
    satisfiable model mask.
    """

    sig: Signature
    max_length: int
    pool: tuple[int, ...] | None = None
    mode: str = "exhaustive"
    seed: int = 0
    count: int = 1000

    def __post_init__(self):
        if self.mode not in ("exhaustive", "sampled"):
            raise ValueError(f"unknown space mode {self.mode!r}")
        if self.max_length < 0:
            raise ValueError("max_length must be non-negative")
        for m in self.masks:
            if not 0 < m <= self.sig.full_mask:
                raise ValueError(f"pool mask {m} is not a satisfiable model set")

    @property
    def masks(self) -> tuple[int, ...]:
        return self.pool if self.pool is not None else tuple(range(1, self.sig.full_mask + 1))

    def reports(self) -> list[Report]:
        return [
            Report.make(self.sig, s, c, compact_formula(m, self.sig))
            for s in self.sig.sources
            for c in self.sig.cases
            for m in self.masks
        ]

    def __iter__(self) -> Iterator[ReportSequence]:
        pool = self.reports()
        if self.mode == "exhaustive":
            for n in range(self.max_length + 1):
                for combo in itertools.product(pool, repeat=n):
                    yield ReportSequence(self.sig, combo)
        else:
            rng = random.Random(self.seed)
            for _ in range(self.count):
                n = rng.randint(0, self.max_length)
                yield ReportSequence(self.sig, [rng.choice(pool) for _ in range(n)])

    def __len__(self) -> int:
        if self.mode == "sampled":
            return self.count
        k = len(self.masks) * len(self.sig.sources) * len(self.sig.cases)
        return sum(k**n for n in range(self.max_length + 1))

    def to_dict(self) -> dict:
        out = {"signature": self.sig.to_dict(), "max_length": self.max_length, "mode": self.mode,
               "pool": list(self.masks)}
        if self.mode == "sampled":
            out.update(seed=self.seed, count=self.count)
        return out


# --------------------------------------------------------------------------
# Reports


@dataclass
class PostulateReport:
    postulate: str
    operator: str
    status: str
    instances: int = 0
    witness: dict | None = None
    note: str = ""
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def to_dict(self) -> dict:
        out = {
            "postulate": self.postulate,
            "operator": self.operator,
            "status": self.status,
            "instances": self.instances,
            "witness": self.witness,
        }
        if self.note:
            out["note"] = self.note
        if self.details:
            out["details"] = self.details
        return out


def _encode(obj):
    if isinstance(obj, ReportSequence):
        return {"sequence": obj.to_list()}
    if isinstance(obj, tuple):
        return [_encode(o) for o in obj]
    return obj


def _decode(sig: Signature, obj):
    if isinstance(obj, dict) and "sequence" in obj:
        return ReportSequence(sig, [Report.make(sig, s, c, f) for s, c, f in obj["sequence"]])
    if isinstance(obj, list):
        return tuple(_decode(sig, o) for o in obj)
    return obj


# --------------------------------------------------------------------------
# Evaluation helpers


class _Evaluator:
    """Operator outputs and their elementary closures, memoised per sequence."""

    def __init__(self, op: Operator):
        self.op = op
        self._closed: dict = {}

    def out(self, seq: ReportSequence):
        return self.op.evaluate(seq)

    def closed(self, seq: ReportSequence) -> tuple[WorldSet, WorldSet]:
        hit = self._closed.get(seq.key)
        if hit is None:
            hit = self._close(self.out(seq))
            self._closed[seq.key] = hit
        return hit

    @staticmethod
    def _close(out) -> tuple[WorldSet, WorldSet]:
        if not hasattr(out, "possible") or not isinstance(out.possible, WorldSet):
            raise NotApplicable("this check needs dense world sets; use the brute engine")
        return elementary_closure(out.possible), elementary_closure(out.plausible)

    def K(self, seq) -> WorldSet:
        return self.closed(seq)[0]

    def B(self, seq) -> WorldSet:
        return self.closed(seq)[1]


def _describe(ws: WorldSet) -> dict:
    sig = ws.sig
    return {
        "worlds": len(ws),
        "prop_models": {c: prop_belief_models(ws, c).labels(sig) for c in sig.cases},
    }


def _sides(name_l: str, lhs: WorldSet, name_r: str, rhs: WorldSet) -> dict:
    """Witness data for a failed inclusion ``lhs <= rhs`` or equality."""
    out = {name_l: _describe(lhs), name_r: _describe(rhs)}
    extra = lhs - rhs
    if not extra:
        extra = rhs - lhs
    if extra:
        out["differing_world"] = extra.universe.world(int(extra.indices()[0])).render()
    return out


def _compare_outputs(ev: _Evaluator, a: ReportSequence, b: ReportSequence) -> dict | None:
    """Violation data if ``a`` and ``b`` yield different belief or knowledge."""
    Ka, Ba = ev.closed(a)
    Kb, Bb = ev.closed(b)
    if Ba != Bb:
        return {"collection": "belief", **_sides("left", Ba, "right", Bb)}
    if Ka != Kb:
        return {"collection": "knowledge", **_sides("left", Ka, "right", Kb)}
    return None


def _splits(seq: ReportSequence):
    for k in range(len(seq) + 1):
        yield seq[:k], seq[k:]


# --------------------------------------------------------------------------
# Per-postulate encodings
#
# Each postulate has an instance generator over the space and a checker that
# returns ``None`` or violation data.  Instances are tuples of sequences (or
# plain ints), so a witness can be re-checked from its JSON form.


def _seq_instances(ev, space, params):
    for seq in space:
        yield (seq,)


def _closure(ev, params, seq):
    X, Y = ev.out(seq).possible, ev.out(seq).plausible
    for label, ws in (("belief", Y), ("knowledge", X)):
        cl = elementary_closure(ws)
        if not ws <= cl or elementary_closure(cl) != cl:
            return {"collection": label, **_sides("worlds", ws, "closure", cl)}
    return None


def _containment(ev, params, seq):
    K, B = ev.closed(seq)
    if not B <= K:
        return _sides("belief_models", B, "knowledge_models", K)
    return None


def _consistency(ev, params, seq):
    if not star_consistent(seq):
        return None
    K, B = ev.closed(seq)
    if not B or not K:
        return {"belief_consistent": bool(B), "knowledge_consistent": bool(K)}
    return None


def _soundness(ev, params, seq):
    out = ev.out(seq)
    for r in seq:
        f = Sound(r.source, r.formula)
        if not out.holds(r.case, f, "possible"):
            return {"case": r.case, "formula": str(f), "known": False}
    return None


def _k_bound(ev, params, seq):
    empty = ReportSequence(seq.sig)
    bound = mod_of(soundness_collection(seq), ev.op.universe) & ev.K(empty)
    K = ev.K(seq)
    if not bound <= K:
        return _sides("bound_models", bound, "knowledge_models", K)
    return None


def _prior_extension(ev, params, seq):
    K0, K = ev.K(ReportSequence(seq.sig)), ev.K(seq)
    if not K <= K0:
        return _sides("knowledge_models", K, "prior_knowledge_models", K0)
    return None


def _rearrangement(ev, params, seq):
    seen = {seq.key}
    for perm in itertools.permutations(seq):
        other = ReportSequence(seq.sig, perm)
        if other.key in seen:
            continue
        seen.add(other.key)
        bad = _compare_outputs(ev, seq, other)
        if bad:
            return {"permutation": other.to_list(), **bad}
    return None


def _equivalence(ev, params, seq):
    if not seq:
        return None
    sig, last = seq.sig, seq[-1]
    forms = [canonical_formula(last.models, sig), canonical_cnf(last.models, sig)]
    seqs = [seq[:-1] + Report.make(sig, last.source, last.case, f) for f in forms]
    # bypass the operator's cache, which is keyed on model masks
    outs = [_Evaluator._close(ev.op.compute(s)) for s in seqs]
    for label, k in (("belief", 1), ("knowledge", 0)):
        if outs[0][k] != outs[1][k]:
            return {"collection": label, "forms": [str(f) for f in forms],
                    **_sides("left", outs[0][k], "right", outs[1][k])}
    return None


def _k_conjunction(ev, params, seq):
    K = ev.K(seq)
    for left, right in _splits(seq):
        both = ev.K(left) & ev.K(right)
        if K != both:
            return {"split": len(left), **_sides("knowledge_models", K, "conjoined_models", both)}
    return None


def _duplicate_instances(ev, space, params):
    for seq in space:
        if seq:
            yield (seq, seq + seq[-1])


def _duplicate_removal(ev, params, rho1, rho2):
    return _compare_outputs(ev, rho1, rho2)


def _conditional_consistency(ev, params, seq):
    K, B = ev.closed(seq)
    if K and not B:
        return {"knowledge_consistent": True, "belief_consistent": False}
    return None


def _split_instances(ev, space, params):
    for seq in space:
        for left, right in _splits(seq):
            yield (left, right)


def _inclusion_vacuity(ev, params, sigma, rho):
    joined = ev.B(sigma) & ev.K(rho)
    B = ev.B(sigma + rho)
    if not joined <= B:
        return {"part": "inclusion", **_sides("combined_models", joined, "belief_models", B)}
    if joined and joined != B:
        return {"part": "vacuity", **_sides("combined_models", joined, "belief_models", B)}
    return None


def _acyc_n(params) -> int:
    return int(params.get("n", 2))


def _acyc_instances(ev, space, params):
    n = _acyc_n(params)
    reps: dict = {}
    for seq in space:
        K, B = ev.closed(seq)
        reps.setdefault((K.key, B.key), seq)
    seqs = list(reps.values())
    Ks = np.array([ev.K(s).array for s in seqs])
    Bs = np.array([ev.B(s).array for s in seqs])
    # M[a, b]: K^a together with B^b is consistent
    M = (Ks.astype(np.int64) @ Bs.T.astype(np.int64)) > 0
    steps = [np.eye(len(seqs), dtype=bool)]
    for _ in range(n):
        steps.append((steps[-1].astype(np.int64) @ M.astype(np.int64)) > 0)
    bad = steps[n] & M.T & ~M
    if not bad.any():
        ev.acyc_checked = len(seqs) ** 2
        return
    a, b = map(int, np.argwhere(bad)[0])
    # walk back from b to recover one path a -> ... -> b of n steps
    path = [b]
    for k in range(n - 1, -1, -1):
        prev = int(np.flatnonzero(steps[k][a] & M[:, path[-1]])[0])
        path.append(prev)
    path.reverse()
    yield tuple(seqs[i] for i in path)


def _acyc(ev, params, *cycle):
    n = len(cycle) - 1

    def consistent(i, j):
        return bool(ev.K(cycle[i]) & ev.B(cycle[j]))

    if all(consistent(j, j + 1) for j in range(n)) and consistent(n, 0) and not consistent(0, n):
        return {"length": n, "consistent_pairs": "K^j with B^(j+1), and K^n with B^0",
                "inconsistent_pair": "K^0 with B^n"}
    return None


def _refinement_instances(ev, space, params):
    op = ev.op
    if not getattr(op, "is_conditioning", False):
        raise NotApplicable(f"Refinement only applies to conditioning operators, not {op.name}")
    u = op.universe
    lo, hi = _rank_bounds(op.rank, u)
    rel = _assignment_refines(u)
    bad = rel & (hi[:, None] > lo[None, :])
    ev.refinement_checked = int(rel.sum())
    for a, b in np.argwhere(bad)[:1]:
        yield (int(a), int(b))


def _rank_bounds(rank: RankFunction, u: Universe):
    r = rank.array(u).reshape(u.n_assignments, u.n_tuples)
    return r.min(axis=1), r.max(axis=1)


def _assignment_refines(u: Universe) -> np.ndarray:
    """``R[a, b]``: every source's partition in assignment ``a`` refines that in ``b``."""
    nb = len(u.table)
    rel = np.ones((1, 1), dtype=bool)
    for _ in u.sig.ordinary_sources:
        rel = (rel[:, None, :, None] & u.table.refines_matrix[None, :, None, :]).reshape(
            rel.shape[0] * nb, rel.shape[1] * nb
        )
    return rel


def _refinement(ev, params, a, b):
    u = ev.op.universe
    if not _assignment_refines(u)[a, b]:
        return None
    lo, hi = _rank_bounds(ev.op.rank, u)
    if hi[a] > lo[b]:
        wa = int(a * u.n_tuples + np.argmax(ev.op.rank.array(u)[a * u.n_tuples:(a + 1) * u.n_tuples]))
        wb = int(b * u.n_tuples + np.argmin(ev.op.rank.array(u)[b * u.n_tuples:(b + 1) * u.n_tuples]))
        return {"finer_world": u.world(wa).render(), "coarser_world": u.world(wb).render(),
                "ranks": [int(hi[a]), int(lo[b])]}
    return None


def _last_report_instances(ev, space, params):
    for seq in space:
        if seq:
            yield (seq,)


def _success_check(strong: bool):
    def check(ev, params, seq):
        sigma, r = seq[:-1], seq[-1]
        return _success_violation(ev.op, sigma, r, strong)

    return check


def _success_violation(op, sigma: ReportSequence, r: Report, strong: bool) -> dict | None:
    before = op.evaluate(sigma)
    if strong:
        antecedent = not before.holds(r.case, Not(And(Expert(r.source, r.formula), r.formula)))
    else:
        antecedent = before.holds(r.case, Expert(r.source, r.formula)) and not before.holds(
            r.case, Not(r.formula)
        )
    if not antecedent:
        return None
    after = op.evaluate(sigma + r)
    if after.holds(r.case, r.formula):
        return None
    sig = sigma.sig
    return {"report": r.to_list(), "case": r.case, "formula": str(r.formula),
            "belief_models_after": after.prop_models(r.case).labels(sig)}


def _gamma(seq: ReportSequence, case: str, exclude: Sequence[str] = ()) -> ModelSet:
    """Models of the ``case`` reports, dropping reports repeated in any case of ``exclude``."""
    sig = seq.sig
    m = ModelSet.full(sig.n_valuations)
    for r in seq:
        if r.case != case:
            continue
        if any((r.source, r.mask) in seq.restrict(d) for d in exclude):
            continue
        m &= r.models
    return m


def _boundedness(ev, params, seq):
    if not star_consistent(seq):
        return None
    out = ev.out(seq)
    for c in seq.sig.cases:
        bad = _bounded_violation(out, seq, c, ())
        if bad:
            return bad
    return None


def _bounded_violation(out, seq, case, H) -> dict | None:
    sig = seq.sig
    beliefs = out.prop_models(case)
    bound = _gamma(seq, case, H)
    for d in H:
        bound &= out.prop_models(d)
    if bound <= beliefs:
        return None
    return {"case": case, "H": list(H), "belief_models": beliefs.labels(sig), "bound_models": bound.labels(sig)}


def _subsets(cases: Sequence[str], rng_seed: int = 0, samples: int = 16):
    if len(cases) <= 4:
        for k in range(len(cases) + 1):
            yield from itertools.combinations(cases, k)
    else:
        rng = random.Random(rng_seed)
        for _ in range(samples):
            yield tuple(c for c in cases if rng.random() < 0.5)


def _h_instances(ev, space, params):
    for seq in space:
        if star_consistent(seq):
            for H in _subsets(seq.sig.cases, params.get("seed", 0)):
                for c in seq.sig.cases:
                    yield (seq, list(H), c)


def _h_boundedness(ev, params, seq, H, c):
    return _bounded_violation(ev.out(seq), seq, c, tuple(H))


def _agm_instances(ev, space, params):
    for seq in space:
        for c in seq.sig.cases:
            yield (seq, c)


def _agm(ev, params, seq, c):
    try:
        rep = check_agm_star(ev.op, seq, c)
    except NotApplicable:
        return None
    return None if rep.holds else rep.witness


@dataclass(frozen=True)
class _Postulate:
    instances: Callable
    check: Callable


_REGISTRY: dict[str, _Postulate] = {
    "Closure": _Postulate(_seq_instances, _closure),
    "Containment": _Postulate(_seq_instances, _containment),
    "Consistency": _Postulate(_seq_instances, _consistency),
    "Soundness": _Postulate(_seq_instances, _soundness),
    "K-bound": _Postulate(_seq_instances, _k_bound),
    "Prior-Extension": _Postulate(_seq_instances, _prior_extension),
    "Rearrangement": _Postulate(_seq_instances, _rearrangement),
    "Equivalence": _Postulate(_seq_instances, _equivalence),
    "K-conjunction": _Postulate(_seq_instances, _k_conjunction),
    "Duplicate-removal": _Postulate(_duplicate_instances, _duplicate_removal),
    "Conditional-consistency": _Postulate(_seq_instances, _conditional_consistency),
    "Inclusion-vacuity": _Postulate(_split_instances, _inclusion_vacuity),
    "Acyc": _Postulate(_acyc_instances, _acyc),
    "Refinement": _Postulate(_refinement_instances, _refinement),
    "Cond-success": _Postulate(_last_report_instances, _success_check(False)),
    "Strong-cond-success": _Postulate(_last_report_instances, _success_check(True)),
    "Boundedness": _Postulate(_seq_instances, _boundedness),
    "H-Boundedness": _Postulate(_h_instances, _h_boundedness),
    "AGM-*": _Postulate(_agm_instances, _agm),
}

POSTULATE_IDS = tuple(_REGISTRY)

_NOTES = {
    "H-Boundedness": "no counterexample on this space does not establish H-Boundedness in general",
}


def _parse_id(postulate: str) -> tuple[str, dict]:
    m = re.fullmatch(r"Acyc(?:\((\d+)\))?", postulate)
    if m:
        return "Acyc", {"n": int(m.group(1) or 2)}
    if postulate not in _REGISTRY:
        raise UnknownNameError("postulate", postulate)
    return postulate, {}


def _operator(op, sig: Signature, engine: str = "brute") -> Operator:
    return make_operator(op, sig, engine=engine) if isinstance(op, str) else op


def check_postulate(op: Operator | str, postulate: str, space: SequenceSpace, **params) -> PostulateReport:
    """Check one postulate on every instance generated from ``space``.

    Stops at the first counterexample in enumeration order.
    """
    op = _operator(op, space.sig)
    base, parsed = _parse_id(postulate)
    params = {**parsed, **params}
    entry = _REGISTRY[base]
    ev = _Evaluator(op)
    count = 0
    for inst in entry.instances(ev, space, params):
        count += 1
        bad = entry.check(ev, params, *inst)
        if bad is not None:
            witness = {"instance": _encode(inst), **bad}
            return PostulateReport(postulate, op.name, COUNTEREXAMPLE, count, witness, _NOTES.get(base, ""),
                                   {"params": params} if params else {})
    count = getattr(ev, "acyc_checked", None) or getattr(ev, "refinement_checked", None) or count
    return PostulateReport(postulate, op.name, HOLDS, count, None, _NOTES.get(base, ""),
                           {"params": params} if params else {})


def replay(report: PostulateReport, op: Operator | str, sig: Signature) -> bool:
    """Re-check a counterexample witness; ``True`` when it is still a violation."""
    if report.status != COUNTEREXAMPLE or not report.witness:
        return False
    op = _operator(op, sig)
    base, params = _parse_id(report.postulate)
    inst = _decode(sig, report.witness["instance"])
    return _REGISTRY[base].check(_Evaluator(op), params, *inst) is not None


# --------------------------------------------------------------------------
# AGM-* by preorder reconstruction


def check_agm_star(op: Operator | str, sigma: ReportSequence, case: str) -> PostulateReport:
    """Decide whether reliable reports at ``case`` act as one AGM revision of the beliefs.

    The witness preorder is read off two-element reports and then verified
    against every admissible report.
    """
    sig = sigma.sig
    op = _operator(op, sig)
    out = op.evaluate(sigma)
    D = out.prop_models(case, "possible")
    if not D:
        raise NotApplicable("knowledge is inconsistent: no admissible reports")
    M = out.prop_models(case)
    name = "AGM-*"

    def fail(reason, **data):
        data.update(reason=reason, instance=_encode((sigma,)), case=case)
        return PostulateReport(name, op.name, COUNTEREXAMPLE, 0, data)

    def revised(mask: int) -> ModelSet:
        r = Report.make(sig, RELIABLE, case, compact_formula(mask, sig))
        return op.evaluate(sigma + r).prop_models(case)

    admissible = [m for m in range(1, sig.full_mask + 1) if m & D.mask]
    results = {}
    for m in admissible:
        R = revised(m)
        if not R or not R <= D or R.mask & ~m:
            return fail("revision result is empty or leaves the report or the knowledge",
                        report=ModelSet(m, sig.n_valuations).labels(sig), result=R.labels(sig))
        results[m] = R
    dom = list(D)
    # leq[v][w]: v is at least as plausible as w
    leq = {v: {w: v in results[(1 << v) | (1 << w)] for w in dom} for v in dom}
    for u, v, w in itertools.product(dom, repeat=3):
        if leq[u][v] and leq[v][w] and not leq[u][w]:
            labels = [sig.valuation_label(x) for x in (u, v, w)]
            return fail("two-element choices are not transitive", valuations=labels)
    minimal = ModelSet.of((v for v in dom if all(leq[v][w] for w in dom)), sig.n_valuations)
    if minimal != M:
        return fail("preorder is not faithful to the beliefs", minimal=minimal.labels(sig),
                    belief_models=M.labels(sig))
    for m, R in results.items():
        inside = [v for v in dom if (m >> v) & 1]
        best = ModelSet.of((v for v in inside if all(leq[v][w] for w in inside)), sig.n_valuations)
        if best != R:
            return fail("revision differs from the preorder minimum", report=ModelSet(m, sig.n_valuations).labels(sig),
                        result=R.labels(sig), preorder_minimum=best.labels(sig))
    levels = _levels(dom, leq)
    outside = [v for v in range(sig.n_valuations) if v not in D]
    if outside:
        levels.append(outside)
    preorder = [[sig.valuation_label(v) for v in lvl] for lvl in levels]
    return PostulateReport(name, op.name, HOLDS, len(admissible), None,
                           details={"preorder": preorder, "case": case, "sequence": sigma.to_list()})


def _levels(dom, leq) -> list[list[int]]:
    rest, out = list(dom), []
    while rest:
        lvl = [v for v in rest if all(leq[v][w] for w in rest)]
        out.append(lvl)
        rest = [v for v in rest if v not in lvl]
    return out


# --------------------------------------------------------------------------
# Cond-success variants and the conditioning impossibility construction


def check_success_variants(op: Operator | str, sigma: ReportSequence, report: Report
                           ) -> tuple[PostulateReport, PostulateReport]:
    """Cond-success and Strong-cond-success for one extension ``sigma · report``."""
    op = _operator(op, sigma.sig)
    out = []
    for name, strong in (("Cond-success", False), ("Strong-cond-success", True)):
        bad = _success_violation(op, sigma, report, strong)
        if bad is None:
            out.append(PostulateReport(name, op.name, HOLDS, 1))
        else:
            bad["instance"] = _encode((sigma + report,))
            out.append(PostulateReport(name, op.name, COUNTEREXAMPLE, 1, bad))
    return out[0], out[1]


def impossibility_construction(sig: Signature) -> tuple[ReportSequence, Report]:
    """Sequence and follow-up report on which a fixed plausibility order fails Strong-cond-success.

    Two sources each report a different single valuation in case ``c``, the
    reliable source reports their disjunction, and then the first source
    repeats its report in case ``d``.
    """
    if len(sig.ordinary_sources) < 2 or len(sig.cases) < 2 or sig.n_valuations < 2:
        raise NotApplicable("needs two ordinary sources, two cases and two valuations")
    i1, i2 = sig.ordinary_sources[:2]
    c, d = sig.cases[:2]
    v1, v2 = sig.n_valuations - 1, 0
    phi1, phi2 = compact_formula(1 << v1, sig), compact_formula(1 << v2, sig)
    sigma = ReportSequence(sig, [
        Report.make(sig, RELIABLE, c, phi1 | phi2),
        Report.make(sig, i1, c, phi1),
        Report.make(sig, i2, c, phi2),
    ])
    return sigma, Report.make(sig, i1, d, phi1)


def check_anonymity(rank: RankFunction, sig: Signature) -> PostulateReport:
    """Renaming ordinary sources never changes the rank of a world."""
    u = get_universe(sig)
    r = rank.array(u)
    ordinary = [sig.source_index(s) for s in sig.ordinary_sources]
    nb = len(u.table)
    tuples = np.arange(u.size) % u.n_tuples
    count = 0
    for perm in itertools.permutations(ordinary):
        count += 1
        a = np.zeros(u.size, dtype=np.int64)
        for s in perm:
            a = a * nb + u.parts[:, s]
        bad = np.flatnonzero(r[a * u.n_tuples + tuples] != r)
        if bad.size:
            k = int(bad[0])
            j = int(a[k] * u.n_tuples + tuples[k])
            names = [sig.sources[s] for s in perm]
            witness = {"permutation": names, "world": u.world(k).render(), "renamed": u.world(j).render(),
                       "ranks": [int(r[k]), int(r[j])]}
            return PostulateReport("Anonymity", rank.name, COUNTEREXAMPLE, count, witness)
    return PostulateReport("Anonymity", rank.name, HOLDS, count)


# --------------------------------------------------------------------------
# Selection schemes


@dataclass(frozen=True)
class SelectionScheme:
    """Weakening ``f(i, c, φ) = mods(φ) ∪ M_c`` of each report, with ``M_c`` the belief models."""

    sig: Signature
    sequence: ReportSequence
    belief_models: tuple[ModelSet, ...]

    def __call__(self, source: str, case: str, mask: int) -> ModelSet:
        return ModelSet(mask, self.sig.n_valuations) | self.belief_models[self.sig.case_index(case)]

    def table(self) -> dict[tuple[str, str, int], ModelSet]:
        return {r.key: self(r.source, r.case, r.mask) for r in self.sequence}

    def reconstruct(self, case: str) -> ModelSet:
        m = ModelSet.full(self.sig.n_valuations)
        for source, mask in self.sequence.restrict(case):
            m &= self(source, case, mask)
        return m

    def to_dict(self) -> dict:
        sig = self.sig
        return {
            "belief_models": {c: m.labels(sig) for c, m in zip(sig.cases, self.belief_models)},
            "selection": [
                {"source": s, "case": c, "report": ModelSet(m, sig.n_valuations).labels(sig),
                 "selected": f.labels(sig)}
                for (s, c, m), f in sorted(self.table().items())
            ],
        }


def check_boundedness(op: Operator | str, sigma: ReportSequence) -> PostulateReport:
    op = _operator(op, sigma.sig)
    if not star_consistent(sigma):
        raise NotApplicable("sequence is not *-consistent")
    out = op.evaluate(sigma)
    for c in sigma.sig.cases:
        bad = _bounded_violation(out, sigma, c, ())
        if bad:
            bad["instance"] = _encode((sigma,))
            return PostulateReport("Boundedness", op.name, COUNTEREXAMPLE, 1, bad)
    return PostulateReport("Boundedness", op.name, HOLDS, 1)


def extract_selection_scheme(op: Operator | str, sigma: ReportSequence) -> SelectionScheme:
    """Selection scheme that regenerates the propositional beliefs of ``sigma``."""
    op = _operator(op, sigma.sig)
    rep = check_boundedness(op, sigma)
    if not rep.holds:
        raise BoundednessViolated(rep)
    out = op.evaluate(sigma)
    scheme = SelectionScheme(sigma.sig, sigma, tuple(out.prop_models(c) for c in sigma.sig.cases))
    for c, m in zip(sigma.sig.cases, scheme.belief_models):
        if scheme.reconstruct(c) != m:
            raise AssertionError(f"selection scheme does not reconstruct the beliefs at {c}")
    return scheme


def check_h_boundedness(op: Operator | str, sigma: ReportSequence, H: Sequence[str], case: str) -> PostulateReport:
    """One instance of H-Boundedness, at the level of propositional model sets."""
    op = _operator(op, sigma.sig, engine="auto")
    if not star_consistent(sigma):
        raise NotApplicable("sequence is not *-consistent")
    for d in H:
        sigma.sig.case_index(d)
    bad = _bounded_violation(op.evaluate(sigma), sigma, case, tuple(H))
    note = _NOTES["H-Boundedness"]
    if bad:
        bad["instance"] = _encode((sigma, list(H), case))
        return PostulateReport("H-Boundedness", op.name, COUNTEREXAMPLE, 1, bad, note)
    return PostulateReport("H-Boundedness", op.name, HOLDS, 1, None, note)
