"""Hypothesis strategies for small decision trees, independent of the
library's own random generator."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from respcalc.tree_core import Ambiguity, Decision, DecisionTree, Event, Outcome, Probability
from respcalc.tree_io import TreeDocument

LABELS = "abc"


@st.composite
def weights(draw, n: int) -> tuple[Fraction, ...]:
    raw = draw(st.lists(st.integers(0, 4), min_size=n, max_size=n).filter(lambda xs: sum(xs) > 0))
    total = sum(raw)
    return tuple(Fraction(x, total) for x in raw)


@st.composite
def tree_documents(draw, max_nodes: int = 12, agents: str = "ij", max_depth: int = 3,
                   siblings_only: bool = False) -> TreeDocument:
    """A valid tree with at most ``max_nodes`` nodes, random information sets
    among same-agent same-arity decision nodes, and a random event.

    With ``siblings_only`` an information set only joins children of one
    common parent; otherwise it may join any nodes, including a node and its
    own descendant.
    """
    nodes: dict[str, object] = {}
    parent: dict[str, str] = {}
    budget = [max_nodes]

    def grow(depth: int) -> str:
        v = f"t{len(nodes)}"
        nodes[v] = None
        budget[0] -= 1
        kinds = ["outcome"]
        if depth < max_depth and budget[0] >= 2:
            kinds += ["decision", "decision", "ambiguity", "probability"]
        kind = draw(st.sampled_from(kinds))
        if kind == "outcome":
            nodes[v] = Outcome()
            return v
        n = draw(st.integers(2, min(3, budget[0])))
        budget[0] -= n  # reserve one node per child
        kids = []
        for _ in range(n):
            budget[0] += 1
            kids.append(grow(depth + 1))
            parent[kids[-1]] = v
        if kind == "decision":
            nodes[v] = Decision(draw(st.sampled_from(agents)), tuple(zip(LABELS, kids)))
        elif kind == "ambiguity":
            nodes[v] = Ambiguity(tuple(kids))
        else:
            nodes[v] = Probability(tuple(zip(kids, draw(weights(n)))))
        return v

    grow(0)
    decisions = [v for v, k in nodes.items() if isinstance(k, Decision)]
    buckets: dict[tuple, list[str]] = {}
    for v in decisions:
        k = nodes[v]
        where = parent.get(v) if siblings_only else None
        buckets.setdefault((k.agent, k.labels, where), []).append(v)
    for n_set, (key, members) in enumerate(sorted(buckets.items(), key=lambda kv: kv[1])):
        if len(members) > 1 and draw(st.booleans()):
            chosen = draw(st.lists(st.sampled_from(members), min_size=2, unique=True))
            for v in chosen:
                k = nodes[v]
                nodes[v] = Decision(k.agent, k.actions, f"y{n_set}_{key[0]}")
    tree = DecisionTree.build(nodes, "t0", agents=sorted({k.agent for k in nodes.values()
                                                          if isinstance(k, Decision)} or {agents[0]}))
    outs = [v for v in tree.order if isinstance(tree.nodes[v], Outcome)]
    bad = draw(st.lists(st.sampled_from(outs), unique=True))
    return TreeDocument(tree, Event(bad), "drawn")


def groups(doc: TreeDocument):
    agents = sorted(doc.tree.agents)
    return st.lists(st.sampled_from(agents), min_size=1, unique=True).map(frozenset)
