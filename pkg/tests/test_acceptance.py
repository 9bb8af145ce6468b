"""Acceptance suite: one test per criterion, each recorded for the terminal summary."""

import itertools
import time

import numpy as np

from conftest import ACCEPTANCE
from expertrev.collection import WorldSet, elementary_closure, is_elementary
from expertrev.decomposed import decomposed_eval
from expertrev.errors import NotApplicable
from expertrev.expertise import get_universe
from expertrev.operators import OPERATOR_NAMES, ReportSequence, make_operator, star_consistent
from expertrev.postulates import (
    BASIC_POSTULATES,
    CONDITIONING_CONDITIONS,
    SequenceSpace,
    check_agm_star,
    check_boundedness,
    check_postulate,
    check_success_variants,
    extract_selection_scheme,
    impossibility_construction,
    replay,
)
from expertrev.propositional import (
    RELIABLE,
    And,
    Expert,
    Iff,
    Implies,
    Not,
    Signature,
    Sound,
    Var,
    canonical_cnf,
    canonical_formula,
    compact_formula,
)
from expertrev.repro import run_all

VALIDITY_SIG = Signature(["x", "y"], ["c1", "c2"], ["*", "a", "b"])
POSTULATE_SIG = Signature(["p"], ["c", "d"], ["*", "i"])
AGM_SIG = Signature(["p", "q"], ["c"], ["*", "i"])
ORACLE_SIG = Signature(["p", "q"], ["c", "d"], ["*", "i", "j"])
NEGATIVE_SIG = Signature(["p"], ["c", "d"], ["*", "i", "j"])
CONDITIONING = ("var-based-cond", "part-based-cond")


def record(k, ok, detail):
    ACCEPTANCE[k] = (bool(ok), detail)
    assert ok, detail


def postulate_space():
    return SequenceSpace(POSTULATE_SIG, 3)


def test_criterion_1_validity_families():
    sig, u = VALIDITY_SIG, get_universe(VALIDITY_SIG)
    start = time.perf_counter()
    failures, checked = [], 0

    def valid(label, f):
        nonlocal checked
        checked += 1
        for c in sig.cases:
            if not u.truth(c, f).all():
                failures.append(f"{label}: {f} at {c}")

    n = sig.full_mask + 1
    forms = {m: (canonical_formula(m, sig), canonical_cnf(m, sig), compact_formula(m, sig)) for m in range(n)}
    for i in sig.sources:
        for m in range(n):
            dnf, cnf, short = forms[m]
            neg = compact_formula(sig.full_mask & ~m, sig)
            for a, b in itertools.combinations((dnf, cnf, short), 2):
                valid("replacement", Iff(Sound(i, a), Sound(i, b)))
                valid("replacement", Iff(Expert(i, a), Expert(i, b)))
            valid("negation symmetry", Iff(Expert(i, short), Expert(i, Not(short))))
            valid("negation symmetry", Iff(Expert(i, short), Expert(i, neg)))
            for phi in (dnf, short):
                vs = sorted(phi.variables())
                if vs:
                    hyp = Expert(i, Var(vs[0]))
                    for v in vs[1:]:
                        hyp = And(hyp, Expert(i, Var(v)))
                    valid("variable expertise", Implies(hyp, Expert(i, phi)))
            valid("expert soundness", Implies(And(Expert(i, short), Sound(i, short)), short))
            valid("expert soundness", Implies(And(Sound(i, short), Not(short)), Not(Expert(i, short))))
            valid("sound pair", Implies(And(Sound(i, short), Sound(i, Not(short))), Not(Expert(i, short))))
            if i == RELIABLE:
                valid("reliable source", Iff(Sound(i, short), short))
                valid("reliable source", Expert(i, short))
            for k in range(n):
                psi = forms[k][2]
                valid("conjunction", Implies(And(Expert(i, short), Expert(i, psi)), Expert(i, And(short, psi))))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 10
    detail = f"{checked} validities x {len(sig.cases)} cases over {u.size} worlds in {elapsed:.2f}s"
    record(1, ok, detail + (f"; first failure {failures[0]}" if failures else ""))


def test_criterion_2_example_reproduction():
    start = time.perf_counter()
    outcomes = run_all()
    elapsed = time.perf_counter() - start
    bad = [f"{o.example}: {o.label}" for o in outcomes if not o.passed]
    ok = not bad and elapsed < 5
    record(2, ok, f"{len(outcomes) - len(bad)}/{len(outcomes)} golden checks in {elapsed:.2f}s"
           + (f"; failing {bad[:3]}" if bad else ""))


def test_criterion_3_postulate_suites():
    space = postulate_space()
    start = time.perf_counter()
    bad, runs = [], 0
    for op in OPERATOR_NAMES:
        for name in BASIC_POSTULATES + ("K-conjunction",):
            runs += 1
            rep = check_postulate(op, name, space)
            if not rep.holds:
                bad.append(f"{op} {name}")
    for op in CONDITIONING:
        for name in CONDITIONING_CONDITIONS:
            runs += 1
            rep = check_postulate(op, name, space)
            if not rep.holds:
                bad.append(f"{op} {name}")
    elapsed = time.perf_counter() - start
    record(3, not bad, f"{runs - len(bad)}/{runs} postulate runs hold on {len(space)} sequences in {elapsed:.1f}s"
           + (f"; violated {bad}" if bad else ""))


def test_criterion_4_negative_results():
    # conflicting reports need two ordinary sources
    search = SequenceSpace(NEGATIVE_SIG, 2)
    notes, ok = [], True
    for name in ("Duplicate-removal", "Inclusion-vacuity"):
        rep = check_postulate("excess-min", name, search)
        replays = rep.status == "counterexample" and replay(rep, "excess-min", NEGATIVE_SIG)
        ok &= replays
        notes.append(f"excess-min {name} {'replayed' if replays else rep.status} after {rep.instances}")
    space = postulate_space()
    sigma, report = impossibility_construction(ORACLE_SIG)
    for op in CONDITIONING:
        _, strong = check_success_variants(op, sigma, report)
        fails = strong.status == "counterexample"
        ok &= fails
        notes.append(f"{op} construction {'violates' if fails else 'holds'}")
    excess = check_postulate("excess-min", "Strong-cond-success", space)
    ok &= excess.holds
    notes.append(f"excess-min Strong-cond-success {excess.status} ({excess.instances} instances)")
    record(4, ok, "; ".join(notes))


def test_criterion_5_agm_star():
    space = SequenceSpace(AGM_SIG, 2)
    start = time.perf_counter()
    counts, bad = {}, []
    for op_name in CONDITIONING + ("excess-min", "weak-mb"):
        op = make_operator(op_name, AGM_SIG)
        held = skipped = 0
        for sigma in space:
            try:
                rep = check_agm_star(op, sigma, "c")
            except NotApplicable:
                skipped += 1
                continue
            if rep.holds and rep.details["preorder"]:
                held += 1
            else:
                bad.append(f"{op_name} {sigma}")
        counts[op_name] = (held, skipped)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 120
    summary = ", ".join(f"{k} {h} witnessed/{s} empty-knowledge" for k, (h, s) in counts.items())
    record(5, ok, f"{summary} in {elapsed:.1f}s" + (f"; failing {bad[:3]}" if bad else ""))


def test_criterion_6_selectivity():
    seqs = [s for s in postulate_space() if star_consistent(s)]
    bad = []
    for op_name in OPERATOR_NAMES:
        op = make_operator(op_name, POSTULATE_SIG)
        for sigma in seqs:
            if not check_boundedness(op, sigma).holds:
                bad.append(f"{op_name} bounded {sigma}")
                continue
            scheme = extract_selection_scheme(op, sigma)
            out = op(sigma)
            if any(scheme.reconstruct(c) != out.prop_models(c) for c in POSTULATE_SIG.cases):
                bad.append(f"{op_name} scheme {sigma}")
    record(6, not bad, f"{len(OPERATOR_NAMES)} operators x {len(seqs)} *-consistent sequences"
           + (f"; failing {bad[:3]}" if bad else ""))


def test_criterion_7_oracle_equivalence():
    u = get_universe(ORACLE_SIG)
    space = SequenceSpace(ORACLE_SIG, 5, mode="sampled", seed=20261014, count=1000)
    start = time.perf_counter()
    bad = 0
    for seq in space:
        for op_name in OPERATOR_NAMES:
            dense = make_operator(op_name, ORACLE_SIG, engine="brute").compute(seq)
            if decomposed_eval(seq, op_name).to_output(u) != dense:
                bad += 1
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 300
    record(7, ok, f"{len(space)} sequences x {len(OPERATOR_NAMES)} operators, {bad} mismatches, {elapsed:.1f}s")


def test_criterion_8_elementariness():
    bad = []
    spaces = [postulate_space(), SequenceSpace(ORACLE_SIG, 4, mode="sampled", seed=8, count=200)]
    checked = 0
    for space in spaces:
        for op_name in OPERATOR_NAMES:
            op = make_operator(op_name, space.sig)
            for seq in space:
                out = op(seq)
                checked += 1
                if not (is_elementary(out.possible) and is_elementary(out.plausible)):
                    bad.append(f"{op_name} {seq}")
    u = get_universe(ORACLE_SIG)
    rng = np.random.default_rng(8)
    not_idem = 0
    for _ in range(1000):
        ws = WorldSet(u, rng.random(u.size) < rng.uniform(0, 0.05))
        cl = elementary_closure(ws)
        not_idem += not (ws <= cl and elementary_closure(cl) == cl)
    ok = not bad and not_idem == 0
    record(8, ok, f"{checked} outputs elementary, closure idempotent on 1000 random sets ({not_idem} failures)"
           + (f"; non-elementary {bad[:3]}" if bad else ""))


def test_reports_are_deterministic_across_runs():
    # the random sample used by criterion 7 is reproducible
    a = list(SequenceSpace(ORACLE_SIG, 5, mode="sampled", seed=20261014, count=5))
    b = list(SequenceSpace(ORACLE_SIG, 5, mode="sampled", seed=20261014, count=5))
    assert a == b and all(isinstance(s, ReportSequence) for s in a)
