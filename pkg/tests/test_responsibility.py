from fractions import Fraction as F

import pytest

from respcalc.responsibility import (
    Analysis,
    ResponsibilityError,
    VariantId,
    analysis,
    backward,
    evaluate,
    forward,
    rb0,
)
from respcalc.scenarios import build_paradigmatic
from respcalc.tree_io import parse

I = frozenset({"i"})


def _fr(text: str) -> list[F]:
    return [F(x) for x in text.split(",")]


# Values computed independently by the brute-force oracle in tests/oracle.py.
# Backward lists hold variants 0..4, forward lists variants 1..4.
FIGURES = [
    ("load_and_shoot", {},
     {"v3": "0,0,0,0,0", "v4": "0,0,1,1,1", "v5": "0,0,0,0,0", "v6": "1,1,1,1,1"},
     {"v1": "0,1,1,1", "v2": "1,1,1,1"}),
    ("rock_throwing", {},
     {"v5": "0,0,0,0,0", "v6": "1,1,0,1,1", "v3": "0,0,0,0,0", "v4": "0,0,0,1,1"},
     {"v1": "1,0,1,1", "v2": "0,0,1,1"}),
    ("choose_probabilities", {"p": F(1, 4), "q": F(3, 4)},
     {"v2": "0,0,0,0,0", "v3": "0,0,0,0,0", "v4": "0,1/2,1/2,1/2,1/2", "v5": "0,1/2,1/2,1/2,1/2"},
     {"v1": "1/2,1/2,1/2,1/2"}),
    ("hesitation_1", {"p": F(1, 2)},
     {"v2": "0,0,0,0,0", "v7": "0,1/2,1/2,1/2,1/2", "v5": "1,3/2,3/2,3/2,3/2", "v6": "0,1/2,1/2,1/2,1/2"},
     {"v1": "1/2,1/2,1,1/2", "v4": "1,1,1,1"}),
    ("hesitation_2", {},
     {"v2": "0,0,0,0,0", "v6": "0,0,1,1,1", "v7": "0,0,1,1,1", "v5": "1,1,1,2,2"},
     {"v1": "0,1,1,1", "v3": "1,0,1,1"}),
    ("climate_no_learning", {},
     {"10": "1,1,0,1,0", "9": "0,0,0,1,0", "12": "0,0,0,1,0", "11": "1,1,0,1,0"},
     {"4": "1,0,1,0", "5": "1,0,1,0"}),
    ("climate_with_learning", {},
     {"7": "0,0,0,0,0", "8": "1,1,1,1,1", "9": "0,0,1,1,0", "10": "1,1,1,1,0",
      "13": "1,1,1,1,1", "14": "0,0,0,0,0", "11": "1,1,1,1,0", "12": "0,0,1,1,0"},
     {"1": "0,1,1,0", "3": "1,1,1,1", "4": "1,0,1,0", "2": "0,1,1,0", "6": "1,1,1,1", "5": "1,0,1,0"}),
    ("ambiguity_aversion", {"p": F(1, 3)},
     {"v2": "0,0,2/3,2/3,1/3", "v3": "0,0,2/3,2/3,1/3", "v4": "0,1/3,0,1/3,0", "v5": "0,1/3,0,1/3,0"},
     {"v1": "1/3,2/3,2/3,1/3"}),
]

BACKWARD_CASES = [(pid, kw, v, _fr(s)) for pid, kw, rb, _ in FIGURES for v, s in rb.items()]
FORWARD_CASES = [(pid, kw, v, _fr(s)) for pid, kw, _, rf in FIGURES for v, s in rf.items()]


@pytest.mark.parametrize("pid,kw,v_o,want", BACKWARD_CASES, ids=[f"{c[0]}-{c[2]}" for c in BACKWARD_CASES])
def test_backward_values_on_example_trees(pid, kw, v_o, want):
    doc = build_paradigmatic(pid, **kw)
    a = analysis(doc.tree, doc.event, I)
    assert [a.backward(str(k), v_o).value for k in range(5)] == want


@pytest.mark.parametrize("pid,kw,v_d,want", FORWARD_CASES, ids=[f"{c[0]}-{c[2]}" for c in FORWARD_CASES])
def test_forward_values_on_example_trees(pid, kw, v_d, want):
    doc = build_paradigmatic(pid, **kw)
    a = analysis(doc.tree, doc.event, I)
    assert [a.forward(str(k), v_d).value for k in range(1, 5)] == want


@pytest.mark.parametrize("pid,v_o,want", [
    ("load_and_shoot", "v6", 0),
    ("rock_throwing", "v3", 0),
    ("rock_throwing", "v4", 1),
    ("rock_throwing", "v6", 1),
    ("hesitation_2", "v5", 1),
    ("hesitation_2", "v7", 0),
    ("climate_no_learning", "10", 0),
])
def test_ness_values(pid, v_o, want):
    doc = build_paradigmatic(pid)
    value, sufficient = analysis(doc.tree, doc.event, I).ness(v_o)
    assert value == want
    assert (sufficient is not None) == bool(want)


def test_overdetermined_rock_has_a_sufficient_set_containing_the_group_throw():
    doc = build_paradigmatic("rock_throwing")
    _, ds = analysis(doc.tree, doc.event, I).ness("v4")
    assert ("yi", "throw") in {(d.info_set, d.action) for d in ds}


@pytest.mark.parametrize("pid", ["hesitation_1", "climate_with_learning", "ambiguity_aversion"])
@pytest.mark.parametrize("variant", ["1", "2", "3", "4"])
def test_backward_value_is_sum_of_per_decision_terms(pid, variant):
    doc = build_paradigmatic(pid, p=F(1, 3))
    a = analysis(doc.tree, doc.event, I)
    for v_o in doc.tree.outcomes:
        rep = a.backward(variant, v_o)
        assert rep.value == sum(rep.per_decision.values(), F(0))
        assert all(a.is_group_node(v) for v in rep.per_decision)


def test_rb0_report_names_the_deciding_node():
    doc = build_paradigmatic("load_and_shoot")
    rep = analysis(doc.tree, doc.event, I).backward("0", "v6")
    assert rep.value == 1
    assert dict(rep.per_decision) == {"v2": 1}


def test_intermediates_expose_minimax_values():
    doc = build_paradigmatic("hesitation_2")
    rep = analysis(doc.tree, doc.event, I).backward("2", "v5")
    assert set(rep.intermediates) >= {"mu(v1)", "mu(v3)"}


def test_module_functions_agree_with_analysis():
    doc = build_paradigmatic("rock_throwing")
    assert backward("3", doc.tree, doc.event, I, "v4") == 1
    assert forward("2", doc.tree, doc.event, I, "v2") == 0
    assert rb0(doc.tree, doc.event, I, "v6") == 1
    assert evaluate("4", "forward", doc.tree, doc.event, I, "v1").value == 1


def test_analysis_is_shared_between_calls():
    doc = build_paradigmatic("rock_throwing")
    assert analysis(doc.tree, doc.event, {"i"}) is analysis(doc.tree, set(doc.event), ["i"])


@pytest.mark.parametrize("text,want", [("0", VariantId.V0), ("v3", VariantId.V3), (4, VariantId.V4),
                                       ("NESS", VariantId.NESS)])
def test_variant_parsing(text, want):
    assert VariantId.parse(text) is want


def test_unknown_variant_is_rejected():
    with pytest.raises(ValueError, match="unknown variant"):
        VariantId.parse("7")


@pytest.mark.parametrize("variant", ["0", "ness"])
def test_variants_without_forward_function(variant):
    doc = build_paradigmatic("rock_throwing")
    with pytest.raises(ResponsibilityError, match="no forward function"):
        analysis(doc.tree, doc.event, I).forward(variant, "v1")


def test_forward_requires_a_group_decision_node():
    doc = build_paradigmatic("rock_throwing")
    with pytest.raises(ResponsibilityError, match="not a decision node of the group"):
        analysis(doc.tree, doc.event, I).forward("1", "v0")


def test_backward_requires_an_outcome():
    doc = build_paradigmatic("rock_throwing")
    with pytest.raises(ResponsibilityError, match="not an outcome node"):
        analysis(doc.tree, doc.event, I).backward("1", "v1")


def test_ness_requires_an_event_outcome():
    doc = build_paradigmatic("rock_throwing")
    with pytest.raises(ResponsibilityError, match="not in the event"):
        analysis(doc.tree, doc.event, I).backward("ness", "v5")


def test_empty_group_is_rejected():
    doc = build_paradigmatic("rock_throwing")
    with pytest.raises(ResponsibilityError, match="nonempty"):
        Analysis(doc.tree, doc.event, set())


def test_unknown_action_is_rejected():
    doc = build_paradigmatic("rock_throwing")
    with pytest.raises(ResponsibilityError, match="not an action"):
        analysis(doc.tree, doc.event, I).rho("v1", "duck")


def test_unknown_direction_is_rejected():
    doc = build_paradigmatic("rock_throwing")
    with pytest.raises(ValueError, match="unknown direction"):
        evaluate("1", "sideways", doc.tree, doc.event, I, "v1")


# Information sets that join nodes in different branches can make the
# literal difference formulas negative. Both trees below are checked against
# the oracle; the values are frozen as documented behaviour.

COUPLED_RECALL = """
tree "coupled_recall" {
  agents: i;
  node r ambiguity { -> s1; -> s2; }
  node s1 decision agent=i infoset=top { act a -> m1; act b -> bad1; }
  node m1 ambiguity { -> x1; -> ok1; }
  node x1 decision agent=i infoset=low { act L -> bad2; act R -> ok2; }
  node bad2 outcome bad;
  node ok2 outcome;
  node ok1 outcome;
  node bad1 outcome bad;
  node s2 decision agent=i infoset=top { act a -> m2; act b -> bad3; }
  node m2 ambiguity { -> x2; -> ok3; }
  node x2 decision agent=i infoset=low { act L -> ok4; act R -> bad4; }
  node ok4 outcome;
  node bad4 outcome bad;
  node ok3 outcome;
  node bad3 outcome bad;
}
"""

ABSENT_MINDED = """
tree "absent_minded" {
  agents: i;
  node t0 decision agent=i infoset=y { act a -> t2; act b -> bad0; }
  node t2 decision agent=i infoset=y { act a -> bad1; act b -> ok; }
  node bad0 outcome bad;
  node bad1 outcome bad;
  node ok outcome;
}
"""


def test_coupled_low_information_set_gives_negative_minimax_difference():
    doc = parse(COUPLED_RECALL)
    a = analysis(doc.tree, doc.event, I)
    # committing to one action at "low" cannot fit both branches, but each
    # single branch below "a" can be handled
    assert a.mu("s1") == 1
    assert a.mu("m1") == a.mu("m2") == 0
    assert a.delta_mu("s1", "a") == -1
    assert a.backward("2", "ok1").value == -1
    assert a.backward("2", "bad2").value == -1
    assert a.forward("2", "s1").value == 0


def test_absent_minded_information_set_gives_negative_guaranteed_difference():
    doc = parse(ABSENT_MINDED)
    a = analysis(doc.tree, doc.event, I)
    assert a.gamma("t0") == 1
    assert a.gamma("t2") == 0
    assert a.delta_gamma("t0", "a") == -1
    assert a.backward("1", "ok").value == -1
    assert a.backward("3", "bad1").value == 2
