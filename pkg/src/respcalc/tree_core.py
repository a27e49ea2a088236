"""Immutable multi-agent decision trees with ambiguity.

A tree is a rooted arborescence whose inner nodes are decision nodes (owned by
an agent and possibly grouped into information sets), ambiguity nodes (the set
of possibilities is known, their likelihood is not) and probability nodes
(exact rational weights). Leaves are outcome nodes.

All probabilities are :class:`fractions.Fraction` values.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Union

AgentId = str
NodeId = str
ActionLabel = str
InfoSetId = str

__all__ = [
    "AgentId",
    "NodeId",
    "ActionLabel",
    "InfoSetId",
    "Decision",
    "Ambiguity",
    "Probability",
    "Outcome",
    "NodeKind",
    "DecisionTree",
    "Event",
    "Group",
    "TreeError",
    "ValidationError",
    "validate",
    "history",
    "branch",
    "choice_at",
]


class TreeError(ValueError):
    """Raised for queries that are ill-formed for the given tree."""


class ValidationError(TreeError):
    """Raised when a tree violates a structural invariant."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(violations))


@dataclass(frozen=True)
class Decision:
    """A decision node of ``agent``.

    ``actions`` is an ordered tuple of ``(label, successor)`` pairs. A node
    without ``infoset`` forms its own singleton information set.
    """

    agent: AgentId
    actions: tuple[tuple[ActionLabel, NodeId], ...]
    infoset: InfoSetId | None = None

    @cached_property
    def successors(self) -> tuple[NodeId, ...]:
        return tuple(s for _, s in self.actions)

    @cached_property
    def labels(self) -> tuple[ActionLabel, ...]:
        return tuple(a for a, _ in self.actions)

    def consequence(self, action: ActionLabel) -> NodeId:
        for a, s in self.actions:
            if a == action:
                return s
        raise TreeError(f"unknown action {action!r}")


@dataclass(frozen=True)
class Ambiguity:
    successors: tuple[NodeId, ...]


@dataclass(frozen=True)
class Probability:
    """Probability node; ``branches`` holds ``(successor, weight)`` pairs."""

    branches: tuple[tuple[NodeId, Fraction], ...]

    @cached_property
    def successors(self) -> tuple[NodeId, ...]:
        return tuple(s for s, _ in self.branches)

    def weight(self, successor: NodeId) -> Fraction:
        for s, w in self.branches:
            if s == successor:
                return w
        raise TreeError(f"{successor!r} is not a successor")


@dataclass(frozen=True)
class Outcome:
    @property
    def successors(self) -> tuple[NodeId, ...]:
        return ()


NodeKind = Union[Decision, Ambiguity, Probability, Outcome]


def _infoset_key(v: NodeId, kind: Decision) -> str:
    # '@' cannot occur in DSL identifiers, so implicit keys never clash
    return kind.infoset if kind.infoset is not None else "@" + v


@dataclass(frozen=True, eq=False)
class DecisionTree:
    """A multi-agent decision tree with ambiguity.

    Construct through :meth:`build` to get validation; the raw constructor
    accepts anything so that :func:`validate` can report violations.
    """

    agents: frozenset[AgentId]
    nodes: Mapping[NodeId, NodeKind]
    root: NodeId
    _order: tuple[NodeId, ...] = field(default=(), repr=False)

    @classmethod
    def build(
        cls,
        nodes: Mapping[NodeId, NodeKind] | Iterable[tuple[NodeId, NodeKind]],
        root: NodeId | None = None,
        agents: Iterable[AgentId] | None = None,
    ) -> "DecisionTree":
        """Create and validate a tree. Agents default to those owning a node."""
        items = list(nodes.items() if isinstance(nodes, Mapping) else nodes)
        if not items:
            raise ValidationError(["tree has no nodes"])
        table = dict(items)
        if len(table) != len(items):
            raise ValidationError(["duplicate node identifier"])
        if root is None:
            root = items[0][0]
        found = {k.agent for k in table.values() if isinstance(k, Decision)}
        agent_set = frozenset(agents) if agents is not None else frozenset(found)
        tree = cls(agent_set, MappingProxyType(table), root, tuple(table))
        problems = validate(tree)
        if problems:
            raise ValidationError(problems)
        return tree

    # -- equality is structural -------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DecisionTree):
            return NotImplemented
        return (
            self.root == other.root
            and self.agents == other.agents
            and dict(self.nodes) == dict(other.nodes)
        )

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.root, self.agents, frozenset(self.nodes.items())))

    # -- basic accessors ---------------------------------------------------
    def kind(self, v: NodeId) -> NodeKind:
        try:
            return self.nodes[v]
        except KeyError:
            raise TreeError(f"unknown node {v!r}") from None

    def successors(self, v: NodeId) -> tuple[NodeId, ...]:
        return self.kind(v).successors

    @cached_property
    def order(self) -> tuple[NodeId, ...]:
        """Nodes in depth-first preorder from the root (action order)."""
        out: list[NodeId] = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(self.nodes[v].successors))
        return tuple(out)

    @cached_property
    def parent(self) -> Mapping[NodeId, NodeId]:
        par: dict[NodeId, NodeId] = {}
        for v, k in self.nodes.items():
            for s in k.successors:
                par[s] = v
        return MappingProxyType(par)

    @cached_property
    def depth(self) -> Mapping[NodeId, int]:
        d = {self.root: 0}
        for v in self.order:
            for s in self.nodes[v].successors:
                d[s] = d[v] + 1
        return MappingProxyType(d)

    def predecessor(self, v: NodeId) -> NodeId | None:
        self.kind(v)
        return self.parent.get(v)

    def is_decision(self, v: NodeId) -> bool:
        return isinstance(self.kind(v), Decision)

    def is_outcome(self, v: NodeId) -> bool:
        return isinstance(self.kind(v), Outcome)

    @cached_property
    def outcomes(self) -> tuple[NodeId, ...]:
        return tuple(v for v in self.order if isinstance(self.nodes[v], Outcome))

    @cached_property
    def decision_nodes(self) -> tuple[NodeId, ...]:
        return tuple(v for v in self.order if isinstance(self.nodes[v], Decision))

    def infoset_of(self, v: NodeId) -> str:
        k = self.kind(v)
        if not isinstance(k, Decision):
            raise TreeError(f"{v!r} is not a decision node")
        return _infoset_key(v, k)

    @cached_property
    def infosets(self) -> Mapping[str, tuple[NodeId, ...]]:
        """Information-set key to member nodes, members in preorder."""
        sets: dict[str, list[NodeId]] = {}
        for v in self.order:
            k = self.nodes[v]
            if isinstance(k, Decision):
                sets.setdefault(_infoset_key(v, k), []).append(v)
        return MappingProxyType({key: tuple(m) for key, m in sets.items()})

    def equivalents(self, v: NodeId) -> tuple[NodeId, ...]:
        """Nodes information-equivalent to ``v`` (including ``v``)."""
        k = self.kind(v)
        if not isinstance(k, Decision):
            return (v,)
        return self.infosets[_infoset_key(v, k)]

    def is_complete_information(self, v: NodeId) -> bool:
        return self.is_decision(v) and len(self.equivalents(v)) == 1

    def group_nodes(self, group: Iterable[AgentId]) -> frozenset[NodeId]:
        g = frozenset(group)
        return frozenset(
            v for v in self.decision_nodes if self.nodes[v].agent in g  # type: ignore[union-attr]
        )

    @cached_property
    def subtree(self) -> Mapping[NodeId, frozenset[NodeId]]:
        """Forward branch B(v) for every node."""
        out: dict[NodeId, frozenset[NodeId]] = {}
        for v in reversed(self.order):
            acc = {v}
            for s in self.nodes[v].successors:
                acc |= out[s]
            out[v] = frozenset(acc)
        return MappingProxyType(out)

    @cached_property
    def outcomes_below(self) -> Mapping[NodeId, frozenset[NodeId]]:
        out: dict[NodeId, frozenset[NodeId]] = {}
        for v in reversed(self.order):
            k = self.nodes[v]
            if isinstance(k, Outcome):
                out[v] = frozenset((v,))
            else:
                acc: frozenset[NodeId] = frozenset()
                for s in k.successors:
                    acc |= out[s]
                out[v] = acc
        return MappingProxyType(out)

    def __repr__(self) -> str:
        return f"DecisionTree(root={self.root!r}, nodes={len(self.nodes)}, agents={sorted(self.agents)})"


@dataclass(frozen=True)
class Event:
    """A set of outcome nodes deemed ethically undesired."""

    outcomes: frozenset[NodeId]

    def __init__(self, outcomes: Iterable[NodeId] = ()):
        object.__setattr__(self, "outcomes", frozenset(outcomes))

    def __contains__(self, v: object) -> bool:
        return v in self.outcomes

    def __iter__(self):
        return iter(sorted(self.outcomes))

    def __len__(self) -> int:
        return len(self.outcomes)

    def check(self, tree: DecisionTree) -> None:
        bad = sorted(v for v in self.outcomes if v not in tree.nodes or not tree.is_outcome(v))
        if bad:
            raise TreeError(f"event members are not outcome nodes: {', '.join(bad)}")


@dataclass(frozen=True)
class Group:
    """A nonempty set of agents."""

    members: frozenset[AgentId]

    def __init__(self, members: Iterable[AgentId]):
        m = frozenset(members)
        if not m:
            raise TreeError("a group must be nonempty")
        object.__setattr__(self, "members", m)

    def __contains__(self, agent: object) -> bool:
        return agent in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def check(self, tree: DecisionTree) -> None:
        extra = sorted(self.members - tree.agents)
        if extra:
            raise TreeError(f"unknown agents: {', '.join(extra)}")


def validate(tree: DecisionTree) -> list[str]:
    """Return the list of invariant violations; empty means the tree is valid."""
    problems: list[str] = []
    nodes = tree.nodes
    if tree.root not in nodes:
        return [f"root {tree.root!r} is not a node"]

    indegree: dict[NodeId, int] = {v: 0 for v in nodes}
    for v, k in nodes.items():
        succ = k.successors
        if not isinstance(k, Outcome) and not succ:
            problems.append(f"{v}: non-outcome node without successors")
        if len(set(succ)) != len(succ):
            problems.append(f"{v}: repeated successor")
        for s in succ:
            if s not in nodes:
                problems.append(f"{v}: successor {s!r} is not a node")
            else:
                indegree[s] += 1
        if isinstance(k, Decision):
            labels = k.labels
            if len(set(labels)) != len(labels):
                problems.append(f"{v}: action labels are not distinct")
            if k.agent not in tree.agents:
                problems.append(f"{v}: agent {k.agent!r} is not in the agent set")
        elif isinstance(k, Probability):
            for s, w in k.branches:
                if not isinstance(w, Fraction) or w < 0 or w > 1:
                    problems.append(f"{v}: weight of {s!r} is not a rational in [0,1]")
            total = sum((w for _, w in k.branches), Fraction(0))
            if total != 1:
                problems.append(f"{v}: weights sum to {total}, not 1")

    for v, d in indegree.items():
        if v == tree.root and d:
            problems.append(f"{v}: root has a predecessor")
        elif v != tree.root and d != 1:
            problems.append(f"{v}: expected exactly one predecessor, found {d}")

    if problems:
        return problems

    # reachability (also rules out cycles, given in-degree 1 everywhere)
    seen: set[NodeId] = set()
    stack = [tree.root]
    while stack:
        v = stack.pop()
        if v in seen:
            problems.append(f"{v}: cycle detected")
            return problems
        seen.add(v)
        stack.extend(nodes[v].successors)
    for v in nodes:
        if v not in seen:
            problems.append(f"{v}: not reachable from the root")

    members: dict[str, list[NodeId]] = {}
    for v, k in nodes.items():
        if isinstance(k, Decision):
            members.setdefault(_infoset_key(v, k), []).append(v)
    for key, vs in sorted(members.items()):
        if len(vs) < 2:
            continue
        kinds = [nodes[v] for v in vs]
        agents = {k.agent for k in kinds}  # type: ignore[union-attr]
        if len(agents) > 1:
            problems.append(f"infoset {key}: spans agents {sorted(agents)} at nodes {', '.join(sorted(vs))}")
        labels = {k.labels for k in kinds}  # type: ignore[union-attr]
        if len(labels) > 1:
            problems.append(f"infoset {key}: action lists differ at nodes {', '.join(sorted(vs))}")
    return problems


def history(tree: DecisionTree, v: NodeId) -> list[NodeId]:
    """Nodes from the root down to ``v`` inclusive."""
    tree.kind(v)
    path = [v]
    par = tree.parent
    while path[-1] in par:
        path.append(par[path[-1]])
    path.reverse()
    return path


def branch(tree: DecisionTree, v: NodeId, info_aware: bool = False) -> frozenset[NodeId]:
    """B(v), or the information branch (union over equivalent nodes) if ``info_aware``."""
    tree.kind(v)
    if not info_aware:
        return tree.subtree[v]
    out: frozenset[NodeId] = frozenset()
    for w in tree.equivalents(v):
        out |= tree.subtree[w]
    return out


def choice_at(tree: DecisionTree, v_d: NodeId, v: NodeId) -> ActionLabel:
    """The action taken at decision node ``v_d`` on the way to ``v``."""
    k = tree.kind(v_d)
    if not isinstance(k, Decision):
        raise TreeError(f"{v_d!r} is not a decision node")
    h = history(tree, v)
    try:
        i = h.index(v_d)
    except ValueError:
        raise TreeError(f"{v_d!r} is not on the history of {v!r}") from None
    if i + 1 >= len(h):
        raise TreeError(f"{v!r} is {v_d!r} itself; no choice has been made yet")
    nxt = h[i + 1]
    for a, s in k.actions:
        if s == nxt:
            return a
    raise TreeError("inconsistent tree")  # pragma: no cover
