"""Tree-to-tree transformations used by the independence and monotonicity axioms.

Every transform returns a fresh validated tree together with a map from old
node ids to new ones (nodes that disappear, or that are duplicated, are absent
from ``node_map``) and the induced event. Nodes copied more than once are listed
in ``copies``. Copied ids are ``<source>_c<index>`` unless that name is taken.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

from .tree_core import (
    ActionLabel,
    AgentId,
    Ambiguity,
    Decision,
    DecisionTree,
    Event,
    NodeId,
    NodeKind,
    Outcome,
    Probability,
    TreeError,
)
from .tree_io import TreeDocument

__all__ = [
    "TransformError",
    "TransformResult",
    "merge_nested_decisions",
    "pull_ambiguity_before",
    "merge_nested_uncertainty",
    "eliminate_sure_thing",
    "prune_zero_probability",
    "clone_possibility",
    "decision_to_ambiguity",
    "merge_group_agents",
    "relabel",
    "complement_event",
    "remove_action",
    "remove_ambiguity_successor",
    "perturb_probabilities",
]


class TransformError(TreeError):
    """A transform was asked to act outside its precondition."""


@dataclass(frozen=True)
class TransformResult:
    tree: DecisionTree
    node_map: Mapping[NodeId, NodeId]
    event: Event
    copies: Mapping[NodeId, tuple[NodeId, ...]] = field(default_factory=dict)

    def document(self, name: str = "tree") -> TreeDocument:
        return TreeDocument(self.tree, self.event, name)


def _split(source: DecisionTree | TreeDocument, event) -> tuple[DecisionTree, Event]:
    if isinstance(source, TreeDocument):
        return source.tree, source.event if event is None else Event(event)
    return source, Event(event or ())


def _finish(nodes: dict[NodeId, NodeKind], root: NodeId, agents, event: Event,
            node_map: Mapping[NodeId, NodeId], copies=None) -> TransformResult:
    tree = DecisionTree.build(nodes, root=root, agents=agents)
    new_event = Event(node_map[v] for v in event.outcomes if v in node_map)
    if copies:
        new_event = Event(set(new_event.outcomes).union(
            *(copies[v] for v in event.outcomes if v in copies)))
    return TransformResult(tree, MappingProxyType(dict(node_map)), new_event,
                           MappingProxyType(dict(copies or {})))


def _identity(tree: DecisionTree, drop: Iterable[NodeId] = ()) -> dict[NodeId, NodeId]:
    gone = set(drop)
    return {v: v for v in tree.nodes if v not in gone}


def _replace_successor(kind: NodeKind, old: NodeId, new: NodeId) -> NodeKind:
    if isinstance(kind, Decision):
        return Decision(kind.agent, tuple((a, new if s == old else s) for a, s in kind.actions), kind.infoset)
    if isinstance(kind, Probability):
        return Probability(tuple((new if s == old else s, w) for s, w in kind.branches))
    if isinstance(kind, Ambiguity):
        return Ambiguity(tuple(new if s == old else s for s in kind.successors))
    raise TransformError("outcome nodes have no successors")


def _drop_successor(kind: NodeKind, old: NodeId) -> NodeKind:
    if isinstance(kind, Decision):
        return Decision(kind.agent, tuple((a, s) for a, s in kind.actions if s != old), kind.infoset)
    if isinstance(kind, Probability):
        return Probability(tuple((s, w) for s, w in kind.branches if s != old))
    return Ambiguity(tuple(s for s in kind.successors if s != old))


def _rename_successors(kind: NodeKind, ren: Mapping[NodeId, NodeId], infoset=None) -> NodeKind:
    if isinstance(kind, Decision):
        return Decision(kind.agent, tuple((a, ren[s]) for a, s in kind.actions),
                        kind.infoset if infoset is None else infoset)
    if isinstance(kind, Probability):
        return Probability(tuple((ren[s], w) for s, w in kind.branches))
    if isinstance(kind, Ambiguity):
        return Ambiguity(tuple(ren[s] for s in kind.successors))
    return kind


def _fresh(base: str, taken: set[str]) -> str:
    name, i = base, 2
    while name in taken:
        name = f"{base}_{i}"
        i += 1
    taken.add(name)
    return name


def _require_kind(tree: DecisionTree, v: NodeId, cls, what: str):
    k = tree.kind(v)
    if not isinstance(k, cls):
        raise TransformError(f"{v!r} is not {what}")
    return k


def _require_complete(tree: DecisionTree, v: NodeId) -> None:
    if tree.is_decision(v) and not tree.is_complete_information(v):
        raise TransformError(f"{v!r} lies in a non-singleton information set")


def _rebuild(tree: DecisionTree, changes: Mapping[NodeId, NodeKind], drop: Iterable[NodeId] = ()) -> dict:
    gone = set(drop)
    return {v: changes.get(v, k) for v, k in tree.nodes.items() if v not in gone}


# ---------------------------------------------------------------------------


def merge_nested_decisions(source, v_d: NodeId, action: ActionLabel, event=None) -> TransformResult:
    """Fold the decision reached by ``action`` at ``v_d`` into ``v_d``.

    ``action`` is replaced, in place, by composite actions ``<action>_<a2>``
    for every action ``a2`` of the inner node.
    """
    tree, eps = _split(source, event)
    outer = _require_kind(tree, v_d, Decision, "a decision node")
    inner_id = outer.consequence(action)
    inner = _require_kind(tree, inner_id, Decision, "a decision node")
    _require_complete(tree, v_d)
    _require_complete(tree, inner_id)
    if inner.agent != outer.agent:
        raise TransformError(f"{v_d!r} and {inner_id!r} belong to different agents")
    actions: list[tuple[ActionLabel, NodeId]] = []
    for a, s in outer.actions:
        if a == action:
            actions.extend((f"{a}_{a2}", s2) for a2, s2 in inner.actions)
        else:
            actions.append((a, s))
    if len({a for a, _ in actions}) != len(actions):
        raise TransformError("composite action labels collide with existing ones")
    nodes = _rebuild(tree, {v_d: Decision(outer.agent, tuple(actions), outer.infoset)}, (inner_id,))
    return _finish(nodes, tree.root, tree.agents, eps, _identity(tree, (inner_id,)))


def pull_ambiguity_before(source, v: NodeId, v_a: NodeId, event=None) -> TransformResult:
    """Move ambiguity node ``v_a`` (a successor of ``v``) in front of ``v``.

    The new ambiguity node keeps the id ``v_a`` and gets one copy of the branch
    at ``v`` per possibility, in which ``v_a`` is replaced by that possibility's
    branch. Every node keeps its information set, so the copies of a decision
    node (``v`` included) are indistinguishable from each other: the agent did
    not know how ``v_a`` resolves when acting there.
    """
    tree, eps = _split(source, event)
    kv = tree.kind(v)
    if isinstance(kv, Decision):
        _require_complete(tree, v)
    elif not isinstance(kv, Probability):
        raise TransformError(f"{v!r} must be a probability or decision node")
    amb = _require_kind(tree, v_a, Ambiguity, "an ambiguity node")
    if v_a not in kv.successors:
        raise TransformError(f"{v_a!r} is not a successor of {v!r}")

    region = tree.subtree[v]
    taken = set(tree.nodes) - region | {v_a}
    nodes = {x: k for x, k in tree.nodes.items() if x not in region}
    copies: dict[NodeId, list[NodeId]] = {}
    node_map = {x: x for x in nodes}
    node_map[v_a] = v_a
    tops: list[NodeId] = []
    names = set(tree.infosets)
    shared: dict[NodeId, str] = {}
    for x in tree.order:
        k = tree.nodes[x]
        if x in region - tree.subtree[v_a] and isinstance(k, Decision) and k.infoset is None:
            shared[x] = _fresh(f"{x}_pulled", names)
            names.add(shared[x])
    for idx, chosen in enumerate(amb.successors):
        keep = (region - tree.subtree[v_a]) | tree.subtree[chosen]
        ren = {x: _fresh(f"{x}_c{idx}", taken) for x in tree.order if x in keep}
        ren[v_a] = ren[chosen]
        for x, new in ren.items():
            if x == v_a:
                continue
            if x in tree.subtree[chosen]:
                node_map[x] = new
            else:
                copies.setdefault(x, []).append(new)
        for x in tree.order:
            if x not in keep:
                continue
            k = tree.nodes[x]
            infoset = None
            if isinstance(k, Decision):
                infoset = shared.get(x, k.infoset)
            nodes[ren[x]] = _rename_successors(k, ren, infoset)
        tops.append(ren[v])
    nodes[v_a] = Ambiguity(tuple(tops))
    par = tree.parent.get(v)
    root = v_a if par is None else tree.root
    if par is not None:
        nodes[par] = _replace_successor(nodes[par], v, v_a)
    return _finish(nodes, root, tree.agents, eps, node_map, {x: tuple(c) for x, c in copies.items()})


def merge_nested_uncertainty(source, v: NodeId, inner: NodeId, event=None) -> TransformResult:
    """Lift the successors of ``inner`` into its parent ``v`` of the same kind."""
    tree, eps = _split(source, event)
    kv, ki = tree.kind(v), tree.kind(inner)
    if inner not in kv.successors:
        raise TransformError(f"{inner!r} is not a successor of {v!r}")
    if isinstance(kv, Ambiguity) and isinstance(ki, Ambiguity):
        succ: list[NodeId] = []
        for s in kv.successors:
            succ.extend(ki.successors if s == inner else (s,))
        new: NodeKind = Ambiguity(tuple(succ))
    elif isinstance(kv, Probability) and isinstance(ki, Probability):
        branches: list[tuple[NodeId, Fraction]] = []
        for s, w in kv.branches:
            if s == inner:
                branches.extend((s2, w * w2) for s2, w2 in ki.branches)
            else:
                branches.append((s, w))
        new = Probability(tuple(branches))
    else:
        raise TransformError("both nodes must be ambiguity nodes or both probability nodes")
    nodes = _rebuild(tree, {v: new}, (inner,))
    return _finish(nodes, tree.root, tree.agents, eps, _identity(tree, (inner,)))


def eliminate_sure_thing(source, v: NodeId, event=None) -> TransformResult:
    """Remove a node with a single successor, splicing the successor in its place."""
    tree, eps = _split(source, event)
    k = tree.kind(v)
    if isinstance(k, Outcome) or len(k.successors) != 1:
        raise TransformError(f"{v!r} does not have exactly one successor")
    _require_complete(tree, v)
    (only,) = k.successors
    par = tree.parent.get(v)
    changes = {} if par is None else {par: _replace_successor(tree.nodes[par], v, only)}
    nodes = _rebuild(tree, changes, (v,))
    root = only if par is None else tree.root
    return _finish(nodes, root, tree.agents, eps, _identity(tree, (v,)))


def _cut(tree: DecisionTree, parent: NodeId, child: NodeId, eps: Event) -> TransformResult:
    gone = tree.subtree[child]
    nodes = _rebuild(tree, {parent: _drop_successor(tree.nodes[parent], child)}, gone)
    return _finish(nodes, tree.root, tree.agents, eps, _identity(tree, gone))


def prune_zero_probability(source, v_p: NodeId, child: NodeId, event=None) -> TransformResult:
    """Drop a successor of probability node ``v_p`` that has weight zero."""
    tree, eps = _split(source, event)
    k = _require_kind(tree, v_p, Probability, "a probability node")
    weights = dict(k.branches)
    if child not in weights:
        raise TransformError(f"{child!r} is not a successor of {v_p!r}")
    if weights[child] != 0:
        raise TransformError(f"{child!r} has nonzero probability {weights[child]}")
    return _cut(tree, v_p, child, eps)


def clone_possibility(source, v_a: NodeId, child: NodeId, event=None) -> TransformResult:
    """Append a deep copy of the branch at ``child`` as another possibility of ``v_a``.

    Copied decision nodes keep their explicit information sets, so the agent
    cannot tell a clone from its original.
    """
    tree, eps = _split(source, event)
    k = _require_kind(tree, v_a, Ambiguity, "an ambiguity node")
    if child not in k.successors:
        raise TransformError(f"{child!r} is not a successor of {v_a!r}")
    taken = set(tree.nodes)
    n = 1
    while any(f"{x}_c{n}" in taken for x in tree.subtree[child]):
        n += 1
    ren = {x: _fresh(f"{x}_c{n}", taken) for x in tree.order if x in tree.subtree[child]}
    nodes = dict(tree.nodes)
    for x, new in ren.items():
        nodes[new] = _rename_successors(tree.nodes[x], ren)
    nodes[v_a] = Ambiguity(k.successors + (ren[child],))
    copies = {x: (new,) for x, new in ren.items()}
    return _finish(nodes, tree.root, tree.agents, eps, _identity(tree), copies)


def decision_to_ambiguity(source, v_d: NodeId, event=None) -> TransformResult:
    """Turn a complete-information decision node into an ambiguity node."""
    tree, eps = _split(source, event)
    k = _require_kind(tree, v_d, Decision, "a decision node")
    _require_complete(tree, v_d)
    nodes = _rebuild(tree, {v_d: Ambiguity(k.successors)})
    return _finish(nodes, tree.root, tree.agents, eps, _identity(tree))


def merge_group_agents(source, keep: AgentId, absorbed: AgentId, event=None) -> TransformResult:
    """Reassign every decision node of ``absorbed`` to ``keep``."""
    tree, eps = _split(source, event)
    if keep == absorbed:
        raise TransformError("the two agents must differ")
    missing = sorted({keep, absorbed} - tree.agents)
    if missing:
        raise TransformError(f"unknown agents: {', '.join(missing)}")
    changes = {
        v: Decision(keep, k.actions, k.infoset)
        for v, k in tree.nodes.items()
        if isinstance(k, Decision) and k.agent == absorbed
    }
    nodes = _rebuild(tree, changes)
    return _finish(nodes, tree.root, tree.agents - {absorbed}, eps, _identity(tree))


def relabel(source, kind: str, old: str, new: str, event=None, at: NodeId | None = None) -> TransformResult:
    """Rename an agent, an action label or an outcome node.

    Action renames apply to the information set of ``at`` when given, and to
    every decision node offering ``old`` otherwise.
    """
    tree, eps = _split(source, event)
    if kind == "agent":
        if old not in tree.agents:
            raise TransformError(f"unknown agent {old!r}")
        if new in tree.agents:
            raise TransformError(f"agent {new!r} already exists")
        changes = {
            v: Decision(new, k.actions, k.infoset)
            for v, k in tree.nodes.items()
            if isinstance(k, Decision) and k.agent == old
        }
        agents = (tree.agents - {old}) | {new}
        return _finish(_rebuild(tree, changes), tree.root, agents, eps, _identity(tree))
    if kind == "action":
        where = tree.equivalents(at) if at is not None else tree.decision_nodes
        changes = {}
        for v in where:
            k = tree.nodes[v]
            if not isinstance(k, Decision) or old not in k.labels:
                continue
            if new in k.labels:
                raise TransformError(f"action {new!r} already exists at {v!r}")
            changes[v] = Decision(k.agent, tuple((new if a == old else a, s) for a, s in k.actions), k.infoset)
        if not changes:
            raise TransformError(f"no action {old!r} to rename")
        return _finish(_rebuild(tree, changes), tree.root, tree.agents, eps, _identity(tree))
    if kind == "outcome":
        _require_kind(tree, old, Outcome, "an outcome node")
        if new in tree.nodes:
            raise TransformError(f"node {new!r} already exists")
        nodes = {}
        for v, k in tree.nodes.items():
            if old in k.successors:
                k = _replace_successor(k, old, new)
            nodes[new if v == old else v] = k
        node_map = _identity(tree)
        node_map[old] = new
        root = new if tree.root == old else tree.root
        return _finish(nodes, root, tree.agents, eps, node_map)
    raise TransformError(f"unknown relabel kind {kind!r}")


def complement_event(event: Event | Iterable[NodeId], tree: DecisionTree) -> Event:
    """All outcomes of ``tree`` outside ``event``."""
    eps = event if isinstance(event, Event) else Event(event)
    return Event(v for v in tree.outcomes if v not in eps)


def remove_action(source, v_d: NodeId, action: ActionLabel, event=None) -> TransformResult:
    """Delete ``action`` and its branch from a complete-information decision node."""
    tree, eps = _split(source, event)
    k = _require_kind(tree, v_d, Decision, "a decision node")
    _require_complete(tree, v_d)
    if len(k.actions) < 2:
        raise TransformError(f"{action!r} is the last action at {v_d!r}")
    return _cut(tree, v_d, k.consequence(action), eps)


def remove_ambiguity_successor(source, v_a: NodeId, child: NodeId, event=None) -> TransformResult:
    """Delete one possibility of an ambiguity node."""
    tree, eps = _split(source, event)
    k = _require_kind(tree, v_a, Ambiguity, "an ambiguity node")
    if child not in k.successors:
        raise TransformError(f"{child!r} is not a successor of {v_a!r}")
    if len(k.successors) < 2:
        raise TransformError(f"{child!r} is the last successor of {v_a!r}")
    return _cut(tree, v_a, child, eps)


def perturb_probabilities(source, v_p: NodeId,
                          weights: Mapping[NodeId, Fraction] | Sequence[Fraction],
                          event=None) -> TransformResult:
    """Replace the weights of ``v_p``; ``weights`` is keyed by successor or in successor order."""
    tree, eps = _split(source, event)
    k = _require_kind(tree, v_p, Probability, "a probability node")
    if isinstance(weights, Mapping):
        if set(weights) != set(k.successors):
            raise TransformError("weights must cover exactly the successors")
        new = [Fraction(weights[s]) for s in k.successors]
    else:
        new = [Fraction(w) for w in weights]
        if len(new) != len(k.successors):
            raise TransformError("one weight per successor is required")
    if any(w < 0 or w > 1 for w in new) or sum(new) != 1:
        raise TransformError("weights must form a probability distribution")
    nodes = _rebuild(tree, {v_p: Probability(tuple(zip(k.successors, new)))})
    return _finish(nodes, tree.root, tree.agents, eps, _identity(tree))
