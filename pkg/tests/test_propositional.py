import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from expertrev.errors import FormulaSyntaxError, UnknownNameError
from expertrev.propositional import (
    FALSE,
    TRUE,
    And,
    Expert,
    Iff,
    Implies,
    ModelSet,
    Not,
    Or,
    Signature,
    Sound,
    Var,
    canonical_cnf,
    canonical_formula,
    compact_formula,
    entails0,
    equivalent,
    essential_variables,
    formula_mask,
    models,
    parse_expertise_formula,
    parse_formula,
)

SIG = Signature(["x", "y", "z"], ["c"], ["*", "a", "b"])


def prop_formulas(variables=("x", "y", "z"), max_leaves=8):
    leaves = st.sampled_from([Var(v) for v in variables] + [TRUE, FALSE])

    def extend(children):
        return st.one_of(
            children.map(Not),
            st.tuples(children, children).map(lambda t: And(*t)),
            st.tuples(children, children).map(lambda t: Or(*t)),
            st.tuples(children, children).map(lambda t: Implies(*t)),
            st.tuples(children, children).map(lambda t: Iff(*t)),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def expertise_formulas():
    prop = prop_formulas(max_leaves=4)
    atoms = st.one_of(
        prop,
        st.tuples(st.sampled_from(SIG.sources), prop).map(lambda t: Expert(*t)),
        st.tuples(st.sampled_from(SIG.sources), prop).map(lambda t: Sound(*t)),
    )

    def extend(children):
        return st.one_of(
            children.map(Not),
            st.tuples(children, children).map(lambda t: And(*t)),
            st.tuples(children, children).map(lambda t: Or(*t)),
            st.tuples(children, children).map(lambda t: Implies(*t)),
        )

    return st.recursive(atoms, extend, max_leaves=6)


def test_valuation_order_sets_variable_bits():
    sig = Signature(["x", "y"], ["c"], ["*"])
    bar = "\u0304"
    assert [sig.valuation_label(k) for k in range(4)] == [f"x{bar}y{bar}", f"xy{bar}", f"x{bar}y", "xy"]
    assert formula_mask(Var("x"), sig) == 0b1010
    assert formula_mask(Var("y"), sig) == 0b1100


@given(prop_formulas())
def test_mask_matches_truth_table_oracle(f):
    assert set(models(f, SIG)) == oracle.prop_models(f, SIG)


@given(prop_formulas())
def test_rendering_round_trips(f):
    g = parse_formula(str(f), SIG)
    assert formula_mask(g, SIG) == formula_mask(f, SIG)


@given(expertise_formulas())
def test_expertise_rendering_round_trips(f):
    assert parse_expertise_formula(str(f), SIG) == f


@pytest.mark.parametrize(
    "text, expected",
    [
        ("x | y & z", Or(Var("x"), And(Var("y"), Var("z")))),
        ("!x & y", And(Not(Var("x")), Var("y"))),
        ("x -> y -> z", Implies(Var("x"), Implies(Var("y"), Var("z")))),
        ("x <-> y <-> z", Iff(Iff(Var("x"), Var("y")), Var("z"))),
        ("x -> y <-> z", Iff(Implies(Var("x"), Var("y")), Var("z"))),
        ("x | y -> z", Implies(Or(Var("x"), Var("y")), Var("z"))),
        ("!!x", Not(Not(Var("x")))),
        ("(true)", TRUE),
    ],
)
def test_precedence_and_associativity(text, expected):
    assert parse_formula(text, SIG) == expected


def test_expertise_atoms():
    f = parse_expertise_formula("E(a, x | y) & !S(*, z)", SIG)
    assert f == And(Expert("a", Or(Var("x"), Var("y"))), Not(Sound("*", Var("z"))))


@pytest.mark.parametrize(
    "text, position",
    [("x &", 3), ("(x", 2), ("x y", 2), ("", 0), ("x # y", 2), ("E(a, E(a, x))", 5)],
)
def test_syntax_errors_carry_positions(text, position):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_expertise_formula(text, SIG)
    assert info.value.position == position


def test_modal_atoms_rejected_in_propositional_formulas():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("E(a, x)", SIG)


@pytest.mark.parametrize("text, kind", [("w", "variable"), ("E(q, x)", "source")])
def test_unknown_names(text, kind):
    with pytest.raises(UnknownNameError) as info:
        parse_expertise_formula(text, SIG)
    assert info.value.kind == kind


@pytest.mark.parametrize(
    "args",
    [([], ["c"], ["*"]), (["x", "x"], ["c"], ["*"]), (["x"], ["c"], ["a"]), (["true"], ["c"], ["*"])],
)
def test_signature_validation(args):
    with pytest.raises(ValueError):
        Signature(*args)


@given(st.integers(0, 255))
def test_canonical_forms_are_equivalent_but_distinct(mask):
    dnf, cnf, short = canonical_formula(mask, SIG), canonical_cnf(mask, SIG), compact_formula(mask, SIG)
    assert formula_mask(dnf, SIG) == formula_mask(cnf, SIG) == formula_mask(short, SIG) == mask
    assert str(dnf) != str(cnf)


@given(st.integers(0, 255))
def test_essential_variables_are_exactly_those_mattering(mask):
    ess = essential_variables(mask, SIG)
    short = compact_formula(mask, SIG)
    assert short.variables() == set(ess)
    for v in SIG.variables:
        b = SIG.variable_index(v)
        flips = any(((mask >> k) & 1) != ((mask >> (k ^ (1 << b))) & 1) for k in range(8))
        assert (v in ess) == flips


@given(st.integers(0, 255), st.integers(0, 255))
def test_model_set_algebra(a, b):
    A, B = ModelSet(a, 8), ModelSet(b, 8)
    assert set(A & B) == set(A) & set(B)
    assert set(A | B) == set(A) | set(B)
    assert set(A - B) == set(A) - set(B)
    assert set(~A) == set(range(8)) - set(A)
    assert (A <= B) == set(A).issubset(set(B))
    assert len(A) == len(set(A))


def test_entailment_helpers():
    x, y = Var("x"), Var("y")
    assert entails0([x, Implies(x, y)], y, SIG)
    assert not entails0([Or(x, y)], x, SIG)
    assert equivalent(Not(And(x, y)), Or(Not(x), Not(y)), SIG)
    assert entails0([FALSE], x, SIG)


def test_model_set_size_mismatch_rejected():
    with pytest.raises(ValueError):
        ModelSet(1, 4) & ModelSet(1, 8)


@settings(max_examples=50)
@given(prop_formulas(max_leaves=12))
def test_deep_formulas_parse(f):
    assert formula_mask(parse_formula(str(f), SIG), SIG) == formula_mask(f, SIG)
