import pytest
from hypothesis import given, strategies as st

from respcalc.axioms import (
    SPECIAL_AXIOMS,
    TABLE1_AXIOMS,
    TABLE1_EXPECTED,
    AxiomId,
    CheckStatus,
    GeneratorConfig,
    InstanceError,
    applicable,
    check_axiom,
    compliance_matrix,
    falsify,
    generate_random_tree,
    named_counterexample,
    special_instances,
    zero_weight_instance,
)
from respcalc.responsibility import VariantId

CE, HOLDS, NA = CheckStatus.COUNTEREXAMPLE, CheckStatus.HOLDS, CheckStatus.NOT_APPLICABLE

NAMED = [("IZP", "0"), ("IND", "3"), ("IND", "4"), ("IAT", "0"), ("IAT", "1"),
         ("AMF", "1"), ("AMF", "2"), ("AMF", "4"), ("NUR", "3")]


@pytest.mark.parametrize("axiom,variant", NAMED)
def test_named_counterexamples_fail(axiom, variant):
    inst = named_counterexample(axiom, variant)
    res = check_axiom(variant, axiom, inst)
    assert res.status is CE
    assert res.witness.failures
    assert res.witness.describe().startswith("tree ")


@pytest.mark.parametrize("variant", ["2", "4"])
def test_named_climate_tree_is_outside_the_strict_no_risk_precondition(variant):
    with pytest.raises(InstanceError, match="ambiguity or probability"):
        check_axiom(variant, "NRV", named_counterexample("NRV", variant))


def test_no_named_counterexample_for_checkmarks():
    assert named_counterexample("IND", "0") is None
    assert named_counterexample("GSM", "2") is None


def test_zero_weight_instance_separates_variant_0():
    inst = zero_weight_instance()
    assert check_axiom("0", "IZP", inst).status is CE
    for v in "1234":
        assert check_axiom(v, "IZP", inst).status is HOLDS


# Statuses of the special-situation axioms on their fixed example trees,
# for variants 0..4.
SPECIAL = {
    "Norm": (CE, HOLDS, HOLDS, HOLDS, HOLDS),
    "NWT": (NA, HOLDS, HOLDS, HOLDS, HOLDS),
    "NUT": (NA, CE, HOLDS, HOLDS, HOLDS),
    "NFT": (NA, HOLDS, CE, HOLDS, HOLDS),
    "NUD": (NA, CE, CE, HOLDS, HOLDS),
    "UFR": (HOLDS, HOLDS, HOLDS, HOLDS, HOLDS),
    "MFR": (HOLDS, HOLDS, CE, HOLDS, HOLDS),
    "CFR": (CE, CE, HOLDS, HOLDS, HOLDS),
    "OPR": (CE, HOLDS, HOLDS, HOLDS, HOLDS),
    "MAR": (HOLDS, HOLDS, HOLDS, HOLDS, HOLDS),
}


@pytest.mark.parametrize("axiom", sorted(SPECIAL))
def test_special_situation_axioms(axiom):
    assert tuple(check_axiom(v, axiom).status for v in "01234") == SPECIAL[axiom]


@pytest.mark.parametrize("axiom", ["NFT", "NUD", "MFR", "CFR"])
def test_special_statuses_agree_with_the_expected_table(axiom):
    marks = {CE: "counterexample", HOLDS: "holds", NA: "n/a"}
    a = AxiomId.parse(axiom)
    for v in "01234":
        assert marks[check_axiom(v, a).status] == TABLE1_EXPECTED[VariantId.parse(v)][a]


def test_special_instances_only_for_special_axioms():
    assert len(special_instances("MAR")) >= 1
    with pytest.raises(ValueError):
        special_instances("IND")
    assert SPECIAL_AXIOMS >= {AxiomId.parse(a) for a in SPECIAL}


def test_non_special_axiom_needs_an_instance():
    with pytest.raises(InstanceError):
        check_axiom("1", "IND")


def test_forward_axioms_do_not_apply_to_variant_0():
    assert not applicable("0", "FCS")
    assert applicable("0", "IND")
    assert falsify("0", "FCS", budget=5).status is NA


def test_axiom_parsing_ignores_case():
    assert AxiomId.parse("pcont") is AxiomId.PCONT
    with pytest.raises(ValueError):
        AxiomId.parse("XYZ")


def test_falsify_is_deterministic_and_shrinks():
    first = falsify("3", "IND", budget=200)
    assert first == falsify("3", "IND", budget=200)
    assert first.status is CE
    raw = falsify("3", "IND", budget=200, shrink=False)
    assert len(first.witness.instance.doc.tree.nodes) <= len(raw.witness.instance.doc.tree.nodes)
    assert "counterexample" in first.summary()


def test_shrunk_witness_still_fails():
    res = falsify("3", "IND", budget=200)
    again = check_axiom("3", "IND", res.witness.instance)
    assert again.status is CE


@pytest.mark.parametrize("axiom", ["Anon", "ACon", "IST", "BIL"])
def test_searched_axioms_hold_for_variant_3(axiom):
    res = falsify("3", axiom, budget=60)
    assert res.status is HOLDS
    assert res.checked > 0


def test_search_seed_changes_the_draws():
    a = generate_random_tree(GeneratorConfig(seed=1))
    b = generate_random_tree(GeneratorConfig(seed=2))
    assert a.tree != b.tree


def test_small_compliance_matrix():
    m = compliance_matrix(["1", "3"], ["IND", "NUD"], budget=100)
    assert m.status("3", "IND") is CE
    assert m.cells[(VariantId.V3, AxiomId.IND)].source == "named"
    assert m.status("1", "NUD") is CE
    assert m.status("3", "NUD") is HOLDS
    text = m.to_text()
    assert text.splitlines()[0].split()[1:] == ["IND", "NUD"]
    assert len(m.rows()) == 4


def test_table1_layout():
    assert len(TABLE1_AXIOMS) == 11
    assert set(TABLE1_EXPECTED) == {VariantId.V0, VariantId.V1, VariantId.V2, VariantId.V3, VariantId.V4}


def _depth(tree):
    best = 0
    for v in tree.nodes:
        d = 0
        while v in tree.parent:
            v, d = tree.parent[v], d + 1
        best = max(best, d)
    return best


@given(st.integers(0, 10_000), st.integers(1, 4))
def test_generator_is_deterministic_and_bounded(seed, depth):
    cfg = GeneratorConfig(seed=seed, max_depth=depth)
    doc = generate_random_tree(cfg)
    assert generate_random_tree(cfg) == doc
    assert _depth(doc.tree) <= depth
    assert doc.event.outcomes
    assert doc.event.outcomes <= set(doc.tree.outcomes)
