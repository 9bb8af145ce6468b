import pytest

from expertrev.errors import ScenarioError
from expertrev.scenario import evaluate_scenario, parse_scenario, trust_masks

DOC = {
    "variables": ["x", "y"],
    "cases": ["c1", "c2"],
    "sources": ["*", "a", "b"],
    "reports": [
        {"source": "*", "case": "c1", "formula": "x"},
        {"source": "a", "case": "c1", "formula": "!x"},
    ],
}


def test_defaults():
    sc = parse_scenario(DOC)
    assert sc.operator == "weak-mb" and sc.engine == "auto"
    assert len(sc.sequence) == 2 and sc.queries == []


def test_trust_verdicts_follow_knowledge():
    doc, ok = evaluate_scenario(parse_scenario(DOC))
    assert ok
    assert doc["trust"]["a"]["x"] == "non-expert"
    assert doc["trust"]["b"]["x"] == "undecided"
    assert set(doc["trust"]) == {"a", "b"}


def test_trust_is_inconsistent_when_nothing_is_plausible():
    bad = dict(DOC, reports=DOC["reports"] + [{"source": "*", "case": "c1", "formula": "!x"}])
    doc, _ = evaluate_scenario(parse_scenario(bad))
    assert set(doc["trust"]["a"].values()) == {"inconsistent"}
    assert doc["prop_models"]["c1"] == []


def test_trust_masks_shrink_for_larger_signatures():
    sc = parse_scenario(dict(DOC, variables=["x", "y", "z"]))
    # single variables plus the reported !x
    assert trust_masks(sc) == [0b01010101, 0b10101010, 0b11001100, 0b11110000]


def test_prior_knowledge_restricts_worlds():
    with_prior = dict(DOC, prior={"c2": ["E(b, y)"]})
    doc, _ = evaluate_scenario(parse_scenario(with_prior))
    assert doc["trust"]["b"]["y"] == "expert"


@pytest.mark.parametrize(
    "doc, field",
    [
        (dict(DOC, cases=[]), "cases"),
        (dict(DOC, reports=[{"source": "a", "case": "c3", "formula": "x"}]), "reports/0"),
        (dict(DOC, queries=[{"case": "c1", "formula": "E(", "target": "belief"}]), "queries/0/formula"),
        (dict(DOC, queries=[{"case": "c1", "formula": "x", "target": "hope"}]), "queries/0/target"),
        (dict(DOC, extra=1), "extra"),
    ],
)
def test_errors_name_the_field(doc, field):
    with pytest.raises(ScenarioError) as info:
        parse_scenario(doc)
    assert field in str(info.value)
