import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from respcalc.scenarios import build_paradigmatic
from respcalc.strategy_engine import (
    Scenario,
    Strategy,
    enumerate_scenarios,
    enumerate_strategies,
    likelihood,
    prospect,
    start_nodes,
    strategy_outcomes,
)
from respcalc.tree_core import Decision, TreeError
from trees import groups, tree_documents

I = frozenset({"i"})


def test_load_and_shoot_counts():
    tree = build_paradigmatic("load_and_shoot").tree
    sigmas = enumerate_strategies(tree, "v0", I)
    # one information set, so both copies always act alike
    assert [s.assignments for s in sigmas] == [{"v1": "not_shoot", "v2": "not_shoot"},
                                               {"v1": "shoot", "v2": "shoot"}]
    assert len(enumerate_scenarios(tree, "v0", I)) == 2


def test_scenarios_range_over_the_information_set():
    tree = build_paradigmatic("load_and_shoot").tree
    aware = enumerate_scenarios(tree, "v1", I)
    assert [z.actual_node for z in aware] == ["v1", "v2"]
    assert [z.actual_node for z in enumerate_scenarios(tree, "v1", I, info_aware=False)] == ["v1"]


def test_start_nodes_are_group_relative():
    tree = build_paradigmatic("rock_throwing").tree
    assert start_nodes(tree, "v1", I) == ("v1", "v2")
    assert start_nodes(tree, "v1", {"j"}) == ("v1",)
    assert start_nodes(tree, "v1") == ("v1", "v2")


def test_strategies_prune_unreachable_nodes():
    tree = build_paradigmatic("hesitation_2").tree
    sigmas = enumerate_strategies(tree, "v1", I)
    domains = {s.domain for s in sigmas}
    assert len(domains) > 1
    assert len(sigmas) < 2 ** len([v for v in tree.decision_nodes if tree.nodes[v].agent == "i"])


def test_prospect_of_certain_play():
    doc = build_paradigmatic("rock_throwing")
    tree = doc.tree
    sigma = next(s for s in enumerate_strategies(tree, "v0", I) if s["v1"] == "throw")
    zeta = next(z for z in enumerate_scenarios(tree, "v0", I) if z.assignments["v0"] == "v1")
    assert prospect(tree, "v0", sigma, zeta).distribution == (("v6", Fraction(1)),)
    assert likelihood(tree, doc.event, "v0", sigma, zeta) == 1


def test_prospect_through_a_lottery():
    doc = build_paradigmatic("choose_probabilities", p=Fraction(1, 4), q=Fraction(3, 4))
    tree = doc.tree
    zeta = enumerate_scenarios(tree, "v1", I)[0]
    values = sorted(likelihood(tree, doc.event, "v1", s, zeta) for s in enumerate_strategies(tree, "v1", I))
    assert values == [Fraction(1, 4), Fraction(3, 4)]


def test_prospect_rejects_foreign_strategy_and_scenario():
    tree = build_paradigmatic("rock_throwing").tree
    sigma = enumerate_strategies(tree, "v1", I)[0]
    zeta = enumerate_scenarios(tree, "v0", I)[0]
    with pytest.raises(TreeError, match="not equivalent"):
        prospect(tree, "v0", sigma, zeta)
    other = Scenario("v1", "v1", frozenset({"j"}), ())
    with pytest.raises(TreeError, match="different groups"):
        prospect(tree, "v1", sigma, other)


def test_prospect_rejects_incomplete_strategy():
    tree = build_paradigmatic("rock_throwing").tree
    zeta = enumerate_scenarios(tree, "v1", I)[0]
    with pytest.raises(TreeError, match="does not cover"):
        prospect(tree, "v1", Strategy("v1", I, ()), zeta)


def test_strategy_outcomes_follow_the_strategy():
    tree = build_paradigmatic("rock_throwing").tree
    sigma = next(s for s in enumerate_strategies(tree, "v1", I) if s["v1"] == "not_throw")
    assert strategy_outcomes(tree, "v1", I, sigma) == {"v5", "v3"}


def _restrictions(tree, v, group):
    """Distinct reachable parts of the full strategy product, computed by hand."""
    g = frozenset(group)
    mine = [w for w in tree.decision_nodes if tree.nodes[w].agent in g]
    keys = sorted({tree.infoset_of(w) for w in mine})
    labels = {tree.infoset_of(w): tree.nodes[w].labels for w in mine}
    seen = set()
    for combo in itertools.product(*(labels[k] for k in keys)):
        pick = dict(zip(keys, combo))
        reached, stack = [], list(start_nodes(tree, v, g))
        while stack:
            x = stack.pop()
            k = tree.nodes[x]
            if isinstance(k, Decision) and k.agent in g:
                reached.append((x, pick[tree.infoset_of(x)]))
                stack.append(k.consequence(pick[tree.infoset_of(x)]))
            else:
                stack.extend(k.successors)
        seen.add(frozenset(reached))
    return seen


@given(st.data())
def test_strategies_are_the_reachable_restrictions_of_the_product(data):
    doc = data.draw(tree_documents(max_nodes=12))
    group = data.draw(groups(doc))
    v = data.draw(st.sampled_from(sorted(doc.tree.nodes)))
    sigmas = enumerate_strategies(doc.tree, v, group)
    assert {frozenset(s.choices) for s in sigmas} == _restrictions(doc.tree, v, group)
    assert len(set(sigmas)) == len(sigmas)


@given(st.data())
def test_strategies_respect_information_sets(data):
    doc = data.draw(tree_documents(max_nodes=12))
    group = data.draw(groups(doc))
    v = data.draw(st.sampled_from(sorted(doc.tree.nodes)))
    for s in enumerate_strategies(doc.tree, v, group):
        by_set = {}
        for x, a in s.choices:
            assert by_set.setdefault(doc.tree.infoset_of(x), a) == a


@given(st.data())
def test_prospects_are_distributions_over_reachable_outcomes(data):
    doc = data.draw(tree_documents(max_nodes=12))
    tree = doc.tree
    group = data.draw(groups(doc))
    v = data.draw(st.sampled_from(sorted(tree.nodes)))
    for s in enumerate_strategies(tree, v, group):
        allowed = strategy_outcomes(tree, v, group, s)
        for z in enumerate_scenarios(tree, v, group):
            pr = prospect(tree, v, s, z)
            assert sum(p for _, p in pr.distribution) == 1
            assert all(p >= 0 for _, p in pr.distribution)
            assert pr.support <= allowed
            assert 0 <= likelihood(tree, doc.event, v, s, z) <= 1
