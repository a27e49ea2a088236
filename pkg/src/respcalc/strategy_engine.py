"""Strategies, scenarios and the outcome distributions they induce.

A strategy fixes an action at every decision node of the group that can
still be reached when the group follows it. A scenario fixes a successor at
every ambiguity node and every decision node of the other agents that can be
reached under it, starting from its actual node. Both respect information
sets: equivalent nodes receive the same action.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from fractions import Fraction

from .tree_core import (
    ActionLabel,
    AgentId,
    Decision,
    DecisionTree,
    Event,
    Group,
    NodeId,
    Outcome,
    Probability,
    TreeError,
)

__all__ = [
    "Strategy",
    "Scenario",
    "Prospect",
    "enumerate_strategies",
    "enumerate_scenarios",
    "iter_strategies",
    "iter_scenarios",
    "prospect",
    "likelihood",
    "strategy_outcomes",
    "start_nodes",
    "group_agents",
]


def group_agents(group: Group | Iterable[AgentId]) -> frozenset[AgentId]:
    return group.members if isinstance(group, Group) else frozenset(group)


def start_nodes(tree: DecisionTree, v: NodeId, group=None) -> tuple[NodeId, ...]:
    """``v`` and the nodes the group cannot distinguish from it.

    At a decision node of the group this is its information set. Elsewhere the
    group knows its own past moves, so only ``v`` itself qualifies. Without a
    group every decision node contributes its information set.
    """
    k = tree.kind(v)
    if group is not None and not (isinstance(k, Decision) and k.agent in group_agents(group)):
        return (v,)
    return tree.equivalents(v)


@dataclass(frozen=True)
class Strategy:
    """Choice function of ``group`` at ``origin``; ``choices`` is in preorder."""

    origin: NodeId
    group: frozenset[AgentId]
    choices: tuple[tuple[NodeId, ActionLabel], ...]

    @property
    def assignments(self) -> dict[NodeId, ActionLabel]:
        return dict(self.choices)

    @property
    def domain(self) -> frozenset[NodeId]:
        return frozenset(v for v, _ in self.choices)

    def __getitem__(self, v: NodeId) -> ActionLabel:
        for w, a in self.choices:
            if w == v:
                return a
        raise KeyError(v)


@dataclass(frozen=True)
class Scenario:
    """Successor choices for ambiguity nodes and other agents' decision nodes.

    ``actual_node`` is the node the scenario assumes to be current; it equals
    ``origin`` or is information-equivalent to it.
    """

    origin: NodeId
    actual_node: NodeId
    group: frozenset[AgentId]
    choices: tuple[tuple[NodeId, NodeId], ...]

    @property
    def assignments(self) -> dict[NodeId, NodeId]:
        return dict(self.choices)

    @property
    def domain(self) -> frozenset[NodeId]:
        return frozenset(v for v, _ in self.choices)


@dataclass(frozen=True)
class Prospect:
    """Distribution over outcome nodes, in preorder of the tree."""

    distribution: tuple[tuple[NodeId, Fraction], ...]

    def __getitem__(self, v: NodeId) -> Fraction:
        for w, p in self.distribution:
            if w == v:
                return p
        return Fraction(0)

    def as_dict(self) -> dict[NodeId, Fraction]:
        return dict(self.distribution)

    @property
    def support(self) -> frozenset[NodeId]:
        return frozenset(v for v, p in self.distribution if p)


def _is_group_node(tree: DecisionTree, v: NodeId, g: frozenset[AgentId]) -> bool:
    k = tree.nodes[v]
    return isinstance(k, Decision) and k.agent in g


def _is_other_node(tree: DecisionTree, v: NodeId, g: frozenset[AgentId]) -> bool:
    k = tree.nodes[v]
    if isinstance(k, Decision):
        return k.agent not in g
    return not isinstance(k, (Probability, Outcome))


def _choice_key(tree: DecisionTree, v: NodeId):
    k = tree.nodes[v]
    if isinstance(k, Decision):
        return ("info", tree.infoset_of(v))
    return ("node", v)


def _frontier(tree, starts, controlled, assign):
    """Walk from ``starts``; controlled nodes follow ``assign`` (key -> successor
    index) when keyed there. Returns the reached controlled nodes and the first
    unassigned one met in preorder, if any."""
    reached: list[NodeId] = []
    pending = None
    stack = list(reversed(starts))
    while stack:
        v = stack.pop()
        succ = tree.nodes[v].successors
        if controlled(v):
            key = _choice_key(tree, v)
            if key in assign:
                reached.append(v)
                stack.append(succ[assign[key]])
            elif pending is None:
                pending = (v, key)
            continue
        stack.extend(reversed(succ))
    return reached, pending


def _enumerate(tree, starts, controlled) -> Iterator[list[tuple[NodeId, int]]]:
    stack: list[dict] = [{}]
    while stack:
        assign = stack.pop()
        reached, pending = _frontier(tree, starts, controlled, assign)
        if pending is None:
            yield [(v, assign[_choice_key(tree, v)]) for v in reached]
            continue
        v, key = pending
        for i in reversed(range(len(tree.nodes[v].successors))):
            stack.append({**assign, key: i})


def _order_index(tree: DecisionTree) -> dict[NodeId, int]:
    return {v: i for i, v in enumerate(tree.order)}


def iter_strategies(tree: DecisionTree, v: NodeId, group) -> Iterator[Strategy]:
    """Lazily yield Σ(v) in a deterministic order."""
    g = group_agents(group)
    pos = _order_index(tree)
    starts = start_nodes(tree, v, g)
    for items in _enumerate(tree, starts, lambda x: _is_group_node(tree, x, g)):
        items.sort(key=lambda t: pos[t[0]])
        yield Strategy(v, g, tuple((x, tree.nodes[x].labels[i]) for x, i in items))


def enumerate_strategies(tree: DecisionTree, v: NodeId, group) -> list[Strategy]:
    """All maximal, information-consistent, reachability-pruned strategies at ``v``."""
    tree.kind(v)
    return list(iter_strategies(tree, v, group))


def iter_scenarios(tree: DecisionTree, v: NodeId, group, info_aware: bool = True) -> Iterator[Scenario]:
    g = group_agents(group)
    pos = _order_index(tree)
    actuals = start_nodes(tree, v, g) if info_aware else (v,)
    for actual in actuals:
        for items in _enumerate(tree, (actual,), lambda x: _is_other_node(tree, x, g)):
            items.sort(key=lambda t: pos[t[0]])
            yield Scenario(v, actual, g, tuple((x, tree.nodes[x].successors[i]) for x, i in items))


def enumerate_scenarios(tree: DecisionTree, v: NodeId, group, info_aware: bool = True) -> list[Scenario]:
    """Z∼(v) when ``info_aware`` (actual node ranges over v's information set), else Z(v)."""
    tree.kind(v)
    return list(iter_scenarios(tree, v, group, info_aware))


def prospect(tree: DecisionTree, v: NodeId, sigma: Strategy, zeta: Scenario) -> Prospect:
    """Outcome distribution when the group follows ``sigma`` and the rest ``zeta``,
    starting at the scenario's actual node with probability one."""
    starts = start_nodes(tree, v, zeta.group)
    if zeta.actual_node not in starts:
        raise TreeError(f"scenario actual node {zeta.actual_node!r} is not equivalent to {v!r}")
    if sigma.origin not in starts:
        raise TreeError(f"strategy origin {sigma.origin!r} is not equivalent to {v!r}")
    if sigma.group != zeta.group:
        raise TreeError("strategy and scenario belong to different groups")
    g = sigma.group
    acts = sigma.assignments
    succ_of = zeta.assignments
    mass: dict[NodeId, Fraction] = {}
    stack: list[tuple[NodeId, Fraction]] = [(zeta.actual_node, Fraction(1))]
    while stack:
        x, p = stack.pop()
        k = tree.nodes[x]
        if isinstance(k, Outcome):
            mass[x] = mass.get(x, Fraction(0)) + p
        elif isinstance(k, Probability):
            stack.extend((s, p * w) for s, w in k.branches)
        elif isinstance(k, Decision) and k.agent in g:
            if x not in acts:
                raise TreeError(f"strategy does not cover reached node {x!r}")
            stack.append((k.consequence(acts[x]), p))
        else:
            if x not in succ_of:
                raise TreeError(f"scenario does not cover reached node {x!r}")
            stack.append((succ_of[x], p))
    pos = _order_index(tree)
    return Prospect(tuple(sorted(mass.items(), key=lambda t: pos[t[0]])))


def likelihood(tree: DecisionTree, event: Event | Iterable[NodeId], v: NodeId,
               sigma: Strategy, zeta: Scenario) -> Fraction:
    eps = event if isinstance(event, Event) else Event(event)
    return sum((p for x, p in prospect(tree, v, sigma, zeta).distribution if x in eps), Fraction(0))


def strategy_outcomes(tree: DecisionTree, v: NodeId, group, sigma: Strategy) -> frozenset[NodeId]:
    """Outcomes below v's information set that remain possible under ``sigma``."""
    g = group_agents(group)
    acts = sigma.assignments
    found: set[NodeId] = set()
    stack = list(start_nodes(tree, v, g))
    while stack:
        x = stack.pop()
        k = tree.nodes[x]
        if isinstance(k, Outcome):
            found.add(x)
        elif isinstance(k, Decision) and k.agent in g and x in acts:
            stack.append(k.consequence(acts[x]))
        else:
            stack.extend(k.successors)
    return frozenset(found)
