"""Forward- and backward-looking responsibility degrees.

Every quantity is an exact :class:`~fractions.Fraction`. The extrema over
strategies and scenarios are evaluated by backward induction wherever no
information set couples two nodes of the region under consideration; coupled
information sets are resolved by enumerating their joint assignments, and
only the minimax over strategies against coupled scenarios falls back to
explicit strategy enumeration.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Literal

from .strategy_engine import Scenario, Strategy, group_agents, iter_scenarios, iter_strategies, start_nodes
from .tree_core import (
    ActionLabel,
    Decision,
    DecisionTree,
    Event,
    Group,
    InfoSetId,
    NodeId,
    Outcome,
    Probability,
    TreeError,
    choice_at,
    history,
)

__all__ = [
    "VariantId",
    "Direction",
    "ResponsibilityError",
    "ResponsibilityReport",
    "NessDecision",
    "Analysis",
    "analysis",
    "gamma",
    "rb1",
    "rf1",
    "worst_case",
    "minimax",
    "rb2",
    "rf2",
    "optimum",
    "risk",
    "rb3",
    "rf3",
    "min_risk",
    "rb4",
    "rf4",
    "rb0",
    "ness_rb",
    "backward",
    "forward",
    "evaluate",
]

ZERO = Fraction(0)
ONE = Fraction(1)
Direction = Literal["forward", "backward"]


class VariantId(str, Enum):
    V0 = "0"
    V1 = "1"
    V2 = "2"
    V3 = "3"
    V4 = "4"
    NESS = "ness"

    @property
    def has_forward(self) -> bool:
        return self not in (VariantId.V0, VariantId.NESS)

    @classmethod
    def parse(cls, text: str | int | "VariantId") -> "VariantId":
        if isinstance(text, VariantId):
            return text
        t = str(text).strip().lower().lstrip("v")
        for v in cls:
            if v.value == t:
                return v
        raise ValueError(f"unknown variant {text!r}")


class ResponsibilityError(TreeError):
    """A query that is outside the domain of the requested function."""


@dataclass(frozen=True)
class NessDecision:
    info_set: InfoSetId
    action: ActionLabel


@dataclass(frozen=True)
class ResponsibilityReport:
    variant: VariantId
    direction: Direction
    value: Fraction
    per_decision: Mapping[NodeId, Fraction] = field(default_factory=dict)
    intermediates: Mapping[str, Fraction] = field(default_factory=dict)


def _max(xs) -> Fraction:
    return max(xs)


def _min(xs) -> Fraction:
    return min(xs)


class Analysis:
    """All responsibility quantities for one (tree, event, group) triple.

    Results are cached on the instance; the tree is immutable so the caches
    never go stale.
    """

    def __init__(self, tree: DecisionTree, event: Event | Iterable[NodeId], group: Group | Iterable[str]):
        self.tree = tree
        self.event = event if isinstance(event, Event) else Event(event)
        self.event.check(tree)
        self.g = group_agents(group)
        if not self.g:
            raise ResponsibilityError("a group must be nonempty")
        self._free: dict[tuple, Fraction] = {}
        self._gamma: dict[NodeId, Fraction] = {}
        self._mu: dict[NodeId, Fraction] = {}
        self._rho: dict[tuple[NodeId, ActionLabel], Fraction] = {}
        self._spread: dict[NodeId, Fraction] = {}
        self._coupled: dict[tuple, tuple[tuple[str, ...], tuple[str, ...]]] = {}

    # -- node classification ----------------------------------------------
    def is_group_node(self, v: NodeId) -> bool:
        k = self.tree.nodes[v]
        return isinstance(k, Decision) and k.agent in self.g

    def starts(self, v: NodeId) -> tuple[NodeId, ...]:
        """Nodes the group cannot tell apart from ``v``: its information set when
        ``v`` is a group decision node, otherwise ``v`` alone."""
        return start_nodes(self.tree, v, self.g)

    def _require_group_node(self, v: NodeId) -> Decision:
        k = self.tree.kind(v)
        if not isinstance(k, Decision) or k.agent not in self.g:
            raise ResponsibilityError(f"{v!r} is not a decision node of the group")
        return k

    def _require_outcome(self, v: NodeId) -> None:
        if not isinstance(self.tree.kind(v), Outcome):
            raise ResponsibilityError(f"{v!r} is not an outcome node")

    def _consequence(self, v: NodeId, action: ActionLabel) -> NodeId:
        k = self.tree.nodes[v]
        assert isinstance(k, Decision)
        try:
            return k.consequence(action)
        except TreeError:
            raise ResponsibilityError(f"{action!r} is not an action at {v!r}") from None

    # -- information-set coupling -----------------------------------------
    def coupled_sets(self, roots: tuple[NodeId, ...]) -> tuple[tuple[str, ...], tuple[str, ...]]:
        """Information sets with at least two members below ``roots``, split into
        (group sets, other agents' sets)."""
        hit = self._coupled.get(roots)
        if hit is not None:
            return hit
        sub = self.tree.subtree
        gs: list[str] = []
        os_: list[str] = []
        for key, members in self.tree.infosets.items():
            if len(members) < 2:
                continue
            inside = sum(1 for m in members if any(m in sub[r] for r in roots))
            if inside >= 2:
                (gs if self.is_group_node(members[0]) else os_).append(key)
        hit = (tuple(gs), tuple(os_))
        self._coupled[roots] = hit
        return hit

    def _assignments(self, keys: tuple[str, ...], roots: tuple[NodeId, ...],
                     fixed: Mapping[NodeId, NodeId] | None = None):
        """Joint choices for the information sets ``keys``, as node -> successor maps.

        A set is branched on only once one of its members is reachable from
        ``roots`` under ``fixed`` and the choices made so far; sets below
        alternatives that were not chosen are left open since they cannot
        affect the walk.
        """
        if not keys:
            yield {}
            return
        fixed = fixed or {}
        wanted = set(keys)
        nodes, infos = self.tree.nodes, self.tree.infosets
        stack: list[dict[str, int]] = [{}]
        while stack:
            chosen = stack.pop()
            open_key = None
            walk = list(roots)
            while walk:
                x = walk.pop()
                if x in fixed:
                    walk.append(fixed[x])
                    continue
                k = nodes[x]
                if isinstance(k, Decision):
                    key = k.infoset if k.infoset is not None else "@" + x
                    if key in wanted:
                        if key in chosen:
                            walk.append(k.successors[chosen[key]])
                            continue
                        open_key = key
                        break
                walk.extend(k.successors)
            if open_key is None:
                yield {m: nodes[m].successors[i] for key, i in chosen.items() for m in infos[key]}
                continue
            for i in reversed(range(len(nodes[infos[open_key][0]].successors))):
                stack.append({**chosen, open_key: i})

    # -- backward induction -------------------------------------------------
    def _bi_free(self, v: NodeId, gm: Callable, om: Callable) -> Fraction:
        key = (v, gm, om)
        hit = self._free.get(key)
        if hit is not None:
            return hit
        k = self.tree.nodes[v]
        if isinstance(k, Outcome):
            r = ONE if v in self.event else ZERO
        elif isinstance(k, Probability):
            r = sum((w * self._bi_free(s, gm, om) for s, w in k.branches), ZERO)
        elif isinstance(k, Decision) and k.agent in self.g:
            r = gm(self._bi_free(s, gm, om) for s in k.successors)
        else:
            r = om(self._bi_free(s, gm, om) for s in k.successors)
        self._free[key] = r
        return r

    def bi(self, v: NodeId, gm: Callable, om: Callable, forced: Mapping[NodeId, NodeId] | None = None) -> Fraction:
        """Event likelihood from ``v`` when group nodes take ``gm`` over their
        successors, all other non-probability nodes take ``om``, and nodes in
        ``forced`` move to the given successor."""
        if not forced:
            return self._bi_free(v, gm, om)
        parent = self.tree.parent
        above: set[NodeId] = set()
        for x in forced:
            while x not in above:
                above.add(x)
                if x not in parent:
                    break
                x = parent[x]
        memo: dict[NodeId, Fraction] = {}
        nodes = self.tree.nodes

        def rec(x: NodeId) -> Fraction:
            if x not in above:
                return self._bi_free(x, gm, om)
            hit = memo.get(x)
            if hit is not None:
                return hit
            k = nodes[x]
            if x in forced:
                r = rec(forced[x])
            elif isinstance(k, Probability):
                r = sum((w * rec(s) for s, w in k.branches), ZERO)
            elif isinstance(k, Decision) and k.agent in self.g:
                r = gm(rec(s) for s in k.successors)
            else:
                r = om(rec(s) for s in k.successors)
            memo[x] = r
            return r

        return rec(v)

    # -- variant 1 -----------------------------------------------------------
    def gamma(self, v: NodeId) -> Fraction:
        """Guaranteed likelihood: least likelihood over strategies and scenarios at v itself."""
        hit = self._gamma.get(v)
        if hit is not None:
            return hit
        self.tree.kind(v)
        gs, os_ = self.coupled_sets((v,))
        if not gs and not os_:
            r = self._bi_free(v, _min, _min)
        else:
            r = min(self.bi(v, _min, _min, f) for f in self._assignments(gs + os_, (v,)))
        self._gamma[v] = r
        return r

    def delta_gamma(self, v_d: NodeId, action: ActionLabel) -> Fraction:
        return self.gamma(self._consequence(v_d, action)) - self.gamma(v_d)

    # -- variant 2 -----------------------------------------------------------
    def _scenario_coupled_others(self, starts: tuple[NodeId, ...]) -> tuple[str, ...]:
        keys: list[str] = []
        for s in starts:
            for k in self.coupled_sets((s,))[1]:
                if k not in keys:
                    keys.append(k)
        return tuple(keys)

    def worst_case(self, v: NodeId, sigma: Strategy) -> Fraction:
        """Largest likelihood over info-aware scenarios when the group follows ``sigma``."""
        starts = self.starts(v)
        if sigma.origin not in starts:
            raise ResponsibilityError(f"strategy origin {sigma.origin!r} is not equivalent to {v!r}")
        base = {x: self._consequence(x, a) for x, a in sigma.choices}
        best = ZERO
        for s in starts:
            for f in self._assignments(self.coupled_sets((s,))[1], (s,), base):
                best = max(best, self.bi(s, _min, _max, {**f, **base}))
        return best

    def mu(self, v: NodeId) -> Fraction:
        """Minimax likelihood: least worst-case likelihood over strategies."""
        hit = self._mu.get(v)
        if hit is not None:
            return hit
        starts = self.starts(v)
        if self._scenario_coupled_others(starts):
            r = min(self.worst_case(v, s) for s in iter_strategies(self.tree, v, self.g))
        else:
            gs = self.coupled_sets(starts)[0]
            r = min(
                max(self.bi(s, _min, _max, f) for s in starts)
                for f in self._assignments(gs, starts)
            )
        self._mu[v] = r
        return r

    def delta_mu(self, v_d: NodeId, action: ActionLabel) -> Fraction:
        after = max(self.mu(self._consequence(w, action)) for w in self.starts(v_d))
        return after - self.mu(v_d)

    # -- variant 3 -----------------------------------------------------------
    def omega(self, v: NodeId, zeta: Scenario) -> Fraction:
        """Least likelihood the group can achieve from the scenario's actual node."""
        start = zeta.actual_node
        if start not in self.starts(v):
            raise ResponsibilityError(f"scenario actual node {start!r} is not equivalent to {v!r}")
        base = dict(zeta.choices)
        gs = self.coupled_sets((start,))[0]
        return min(self.bi(start, _min, _max, {**base, **f}) for f in self._assignments(gs, (start,), base))

    def restrict(self, zeta: Scenario, node: NodeId) -> Scenario:
        """The part of ``zeta`` inside the branch of ``node``, with ``node`` as actual node."""
        below = self.tree.subtree[node]
        return Scenario(node, node, zeta.group, tuple((x, s) for x, s in zeta.choices if x in below))

    def _rho_from(self, s: NodeId, action: ActionLabel) -> Fraction:
        k = self.tree.nodes[s]
        assert isinstance(k, Decision)
        target = k.consequence(action)
        gs, os_ = self.coupled_sets((s,))
        if not gs and not os_:
            rest = [c for a, c in k.actions if a != action]
            if not rest:
                return ZERO
            worst_after = self._bi_free(target, _min, _max)
            best_other = min(self._bi_free(c, _min, _min) for c in rest)
            return max(ZERO, worst_after - best_other)
        best = ZERO
        for zeta in iter_scenarios(self.tree, s, self.g, info_aware=False):
            shortfall = self.omega(target, self.restrict(zeta, target)) - self.omega(s, zeta)
            best = max(best, shortfall)
        return best

    def rho(self, v_d: NodeId, action: ActionLabel) -> Fraction:
        """Risk taken by choosing ``action`` at ``v_d``: largest shortfall over scenarios."""
        key = (v_d, action)
        hit = self._rho.get(key)
        if hit is not None:
            return hit
        k = self._require_group_node(v_d)
        self._consequence(v_d, action)
        del k
        r = max(self._rho_from(s, action) for s in self.starts(v_d))
        self._rho[key] = r
        return r

    def delta_ell(self, v: NodeId, zeta: Scenario) -> Fraction:
        """Spread between the largest and least likelihood over strategies under ``zeta``."""
        start = zeta.actual_node
        base = dict(zeta.choices)
        gs = self.coupled_sets((start,))[0]
        hi = max(self.bi(start, _max, _max, {**base, **f}) for f in self._assignments(gs, (start,), base))
        lo = min(self.bi(start, _min, _min, {**base, **f}) for f in self._assignments(gs, (start,), base))
        return hi - lo

    def _spread_free(self, v: NodeId) -> Fraction:
        hit = self._spread.get(v)
        if hit is not None:
            return hit
        k = self.tree.nodes[v]
        if isinstance(k, Outcome):
            r = ZERO
        elif isinstance(k, Probability):
            r = sum((w * self._spread_free(s) for s, w in k.branches), ZERO)
        elif isinstance(k, Decision) and k.agent in self.g:
            r = max(self._spread_free(s) for s in k.successors)
            for s1, s2 in itertools.permutations(k.successors, 2):
                r = max(r, self._bi_free(s1, _max, _max) - self._bi_free(s2, _min, _min))
        else:
            r = max(self._spread_free(s) for s in k.successors)
        self._spread[v] = r
        return r

    def influence(self, v_d: NodeId) -> Fraction:
        """Largest spread over info-aware scenarios at ``v_d``."""
        best = ZERO
        for s in self.starts(v_d):
            gs, os_ = self.coupled_sets((s,))
            if not gs and not os_:
                best = max(best, self._spread_free(s))
            else:
                for zeta in iter_scenarios(self.tree, s, self.g, info_aware=False):
                    best = max(best, self.delta_ell(s, zeta))
        return best

    # -- variant 4 -----------------------------------------------------------
    def min_risk(self, v_d: NodeId) -> tuple[Fraction, tuple[ActionLabel, ...]]:
        k = self._require_group_node(v_d)
        risks = [(a, self.rho(v_d, a)) for a in k.labels]
        low = min(r for _, r in risks)
        return low, tuple(a for a, r in risks if r == low)

    # -- benchmark and NESS --------------------------------------------------
    def _sure(self, v: NodeId) -> bool:
        return self.tree.outcomes_below[v] <= self.event.outcomes

    def rb0(self, v_o: NodeId) -> tuple[Fraction, NodeId | None]:
        """Strict-causation benchmark: 1 iff a group choice turned a not-yet-certain
        event into a certain one along the history."""
        self._require_outcome(v_o)
        for v in history(self.tree, v_o)[1:]:
            p = self.tree.parent[v]
            if self.is_group_node(p) and self._sure(v) and not self._sure(p):
                return ONE, p
        return ZERO, None

    def ness_decisions(self, v_o: NodeId) -> list[NessDecision]:
        h = history(self.tree, v_o)
        out: list[NessDecision] = []
        for v in h[:-1]:
            if isinstance(self.tree.nodes[v], Decision):
                d = NessDecision(self.tree.infoset_of(v), choice_at(self.tree, v, v_o))
                if d not in out:
                    out.append(d)
        return out

    def ness(self, v_o: NodeId) -> tuple[Fraction, tuple[NessDecision, ...] | None]:
        """1 iff some group decision is a necessary element of a sufficient set of
        taken decisions; also returns such a sufficient set."""
        self._require_outcome(v_o)
        if v_o not in self.event:
            raise ResponsibilityError(f"{v_o!r} is not in the event")
        taken = self.ness_decisions(v_o)
        table = {w: set(self.ness_decisions(w)) for w in self.tree.outcomes}
        infos = self.tree.infosets

        def sufficient(ds) -> bool:
            need = set(ds)
            return all(w in self.event for w, dw in table.items() if need <= dw)

        def ours(d: NessDecision) -> bool:
            return self.tree.nodes[infos[d.info_set][0]].agent in self.g  # type: ignore[union-attr]

        for size in range(1, len(taken) + 1):
            for ds in itertools.combinations(taken, size):
                if not sufficient(ds):
                    continue
                for d in ds:
                    if ours(d) and not sufficient([e for e in ds if e != d]):
                        return ONE, ds
        return ZERO, None

    # -- reports -------------------------------------------------------------
    def backward(self, variant: VariantId | str, v_o: NodeId) -> ResponsibilityReport:
        variant = VariantId.parse(variant)
        self._require_outcome(v_o)
        if variant is VariantId.V0:
            value, at = self.rb0(v_o)
            return ResponsibilityReport(variant, "backward", value, {at: ONE} if at else {}, {})
        if variant is VariantId.NESS:
            value, ds = self.ness(v_o)
            inter = {f"decisions:{len(self.ness_decisions(v_o))}": Fraction(len(ds or ()))}
            return ResponsibilityReport(variant, "backward", value, {}, inter)
        per: dict[NodeId, Fraction] = {}
        inter: dict[str, Fraction] = {}
        for v in history(self.tree, v_o)[:-1]:
            if not self.is_group_node(v):
                continue
            a = choice_at(self.tree, v, v_o)
            c = self.tree.nodes[v].consequence(a)  # type: ignore[union-attr]
            if variant is VariantId.V1:
                inter[f"gamma({v})"] = self.gamma(v)
                inter[f"gamma({c})"] = self.gamma(c)
                per[v] = self.delta_gamma(v, a)
            elif variant is VariantId.V2:
                inter[f"mu({v})"] = self.mu(v)
                inter[f"mu({c})"] = self.mu(c)
                per[v] = self.delta_mu(v, a)
            elif variant is VariantId.V3:
                per[v] = self.rho(v, a)
                inter[f"rho({v},{a})"] = per[v]
            else:
                low, _ = self.min_risk(v)
                inter[f"rho({v},{a})"] = self.rho(v, a)
                inter[f"min_rho({v})"] = low
                per[v] = self.rho(v, a) - low
        return ResponsibilityReport(variant, "backward", sum(per.values(), ZERO), per, inter)

    def forward(self, variant: VariantId | str, v_d: NodeId) -> ResponsibilityReport:
        variant = VariantId.parse(variant)
        if not variant.has_forward:
            raise ResponsibilityError(f"variant {variant.value} has no forward function")
        k = self._require_group_node(v_d)
        inter: dict[str, Fraction] = {}
        if variant is VariantId.V1:
            for a in k.labels:
                inter[f"dgamma({v_d},{a})"] = self.delta_gamma(v_d, a)
            value = max(inter.values())
        elif variant is VariantId.V2:
            for a in k.labels:
                inter[f"dmu({v_d},{a})"] = self.delta_mu(v_d, a)
            value = max(inter.values())
        elif variant is VariantId.V3:
            value = self.influence(v_d)
            inter[f"influence({v_d})"] = value
        else:
            low, _ = self.min_risk(v_d)
            for a in k.labels:
                inter[f"rho({v_d},{a})"] = self.rho(v_d, a)
            inter[f"min_rho({v_d})"] = low
            value = max(self.rho(v_d, a) for a in k.labels) - low
        return ResponsibilityReport(variant, "forward", value, {}, inter)


@lru_cache(maxsize=128)
def _cached(tree: DecisionTree, event: frozenset, group: frozenset) -> Analysis:
    return Analysis(tree, Event(event), group)


def analysis(tree: DecisionTree, event, group) -> Analysis:
    """Shared :class:`Analysis` for repeated queries on one configuration."""
    eps = event.outcomes if isinstance(event, Event) else frozenset(event)
    return _cached(tree, eps, group_agents(group))


def gamma(tree, event, group, v) -> Fraction:
    return analysis(tree, event, group).gamma(v)


def rb1(tree, event, group, v_o) -> ResponsibilityReport:
    return analysis(tree, event, group).backward(VariantId.V1, v_o)


def rf1(tree, event, group, v_d) -> ResponsibilityReport:
    return analysis(tree, event, group).forward(VariantId.V1, v_d)


def worst_case(tree, event, group, v, sigma: Strategy) -> Fraction:
    return analysis(tree, event, group).worst_case(v, sigma)


def minimax(tree, event, group, v) -> Fraction:
    return analysis(tree, event, group).mu(v)


def rb2(tree, event, group, v_o) -> ResponsibilityReport:
    return analysis(tree, event, group).backward(VariantId.V2, v_o)


def rf2(tree, event, group, v_d) -> ResponsibilityReport:
    return analysis(tree, event, group).forward(VariantId.V2, v_d)


def optimum(tree, event, group, v, zeta: Scenario) -> Fraction:
    return analysis(tree, event, group).omega(v, zeta)


def risk(tree, event, group, v_d, action) -> Fraction:
    return analysis(tree, event, group).rho(v_d, action)


def rb3(tree, event, group, v_o) -> ResponsibilityReport:
    return analysis(tree, event, group).backward(VariantId.V3, v_o)


def rf3(tree, event, group, v_d) -> ResponsibilityReport:
    return analysis(tree, event, group).forward(VariantId.V3, v_d)


def min_risk(tree, event, group, v_d) -> tuple[Fraction, tuple[ActionLabel, ...]]:
    return analysis(tree, event, group).min_risk(v_d)


def rb4(tree, event, group, v_o) -> ResponsibilityReport:
    return analysis(tree, event, group).backward(VariantId.V4, v_o)


def rf4(tree, event, group, v_d) -> ResponsibilityReport:
    return analysis(tree, event, group).forward(VariantId.V4, v_d)


def rb0(tree, event, group, v_o) -> Fraction:
    return analysis(tree, event, group).rb0(v_o)[0]


def ness_rb(tree, event, group, v_o) -> Fraction:
    return analysis(tree, event, group).ness(v_o)[0]


def backward(variant, tree, event, group, v_o) -> Fraction:
    return analysis(tree, event, group).backward(variant, v_o).value


def forward(variant, tree, event, group, v_d) -> Fraction:
    return analysis(tree, event, group).forward(variant, v_d).value


def evaluate(variant, direction: Direction, tree, event, group, node) -> ResponsibilityReport:
    a = analysis(tree, event, group)
    if direction == "backward":
        return a.backward(variant, node)
    if direction == "forward":
        return a.forward(variant, node)
    raise ValueError(f"unknown direction {direction!r}")
