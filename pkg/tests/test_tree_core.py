from fractions import Fraction

import pytest
from hypothesis import given

from respcalc.tree_core import (
    Ambiguity,
    Decision,
    DecisionTree,
    Event,
    Group,
    Outcome,
    Probability,
    TreeError,
    ValidationError,
    branch,
    choice_at,
    history,
    validate,
)
from respcalc.tree_io import load_bundled
from trees import tree_documents


def small_tree():
    return DecisionTree.build({
        "r": Decision("i", (("a", "p"), ("b", "o3"))),
        "p": Probability((("o1", Fraction(1, 3)), ("o2", Fraction(2, 3)))),
        "o1": Outcome(),
        "o2": Outcome(),
        "o3": Outcome(),
    })


def test_build_defaults_root_and_agents():
    t = small_tree()
    assert t.root == "r"
    assert t.agents == frozenset({"i"})
    assert t.order == ("r", "p", "o1", "o2", "o3")


def test_history_branch_and_choice():
    t = small_tree()
    assert history(t, "o2") == ["r", "p", "o2"]
    assert branch(t, "p") == {"p", "o1", "o2"}
    assert choice_at(t, "r", "o2") == "a"
    with pytest.raises(TreeError):
        choice_at(t, "r", "r")
    with pytest.raises(TreeError):
        choice_at(t, "p", "o1")


def test_information_branch_unions_equivalent_nodes():
    doc = load_bundled("load_and_shoot")
    assert branch(doc.tree, "v1", info_aware=True) == {"v1", "v3", "v4", "v2", "v5", "v6"}
    assert doc.tree.equivalents("v2") == ("v1", "v2")
    assert not doc.tree.is_complete_information("v1")


@pytest.mark.parametrize("nodes, fragment", [
    ({"r": Decision("i", (("a", "x"), ("a", "y"))), "x": Outcome(), "y": Outcome()}, "not distinct"),
    ({"r": Probability((("x", Fraction(1, 2)), ("y", Fraction(1, 3)))), "x": Outcome(), "y": Outcome()},
     "sum to 5/6"),
    ({"r": Ambiguity(("x", "missing")), "x": Outcome()}, "is not a node"),
    ({"r": Ambiguity(("x",)), "x": Outcome(), "z": Outcome()}, "expected exactly one predecessor"),
    ({"r": Ambiguity(()), }, "without successors"),
    ({"r": Ambiguity(("x", "y")),
      "x": Decision("i", (("a", "o1"), ("b", "o2")), "y1"),
      "y": Decision("i", (("a", "o3"), ("c", "o4")), "y1"),
      "o1": Outcome(), "o2": Outcome(), "o3": Outcome(), "o4": Outcome()}, "action lists differ"),
    ({"r": Ambiguity(("x", "y")),
      "x": Decision("i", (("a", "o1"),), "y1"),
      "y": Decision("j", (("a", "o3"),), "y1"),
      "o1": Outcome(), "o3": Outcome()}, "spans agents"),
])
def test_validation_reports_each_violation(nodes, fragment):
    with pytest.raises(ValidationError) as exc:
        DecisionTree.build(nodes, "r")
    assert any(fragment in v for v in exc.value.violations)


def test_cycle_is_rejected():
    bad = DecisionTree(frozenset(), {"r": Ambiguity(("x",)), "x": Ambiguity(("r",))}, "r")
    assert validate(bad)


def test_event_and_group_checks():
    t = small_tree()
    with pytest.raises(TreeError):
        Event({"p"}).check(t)
    Event({"o1"}).check(t)
    with pytest.raises(TreeError):
        Group([])
    with pytest.raises(TreeError):
        Group(["k"]).check(t)
    assert list(Group(["j", "i"])) == ["i", "j"]


def test_structural_equality_and_hash():
    assert small_tree() == small_tree()
    assert hash(small_tree()) == hash(small_tree())


@given(tree_documents())
def test_drawn_trees_satisfy_invariants(doc):
    t = doc.tree
    assert validate(t) == []
    assert set(t.order) == set(t.nodes)
    for v in t.nodes:
        h = history(t, v)
        assert h[0] == t.root and h[-1] == v
        assert t.depth[v] == len(h) - 1
        assert t.outcomes_below[v] == {w for w in t.subtree[v] if isinstance(t.nodes[w], Outcome)}
    for key, members in t.infosets.items():
        assert len({t.nodes[m].labels for m in members}) == 1
