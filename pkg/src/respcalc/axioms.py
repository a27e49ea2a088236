"""Executable axiom checks, random-tree falsification and the compliance matrix.

An axiom instance is a tree document, a group and a few axiom-specific
parameters (nodes, actions, a second group, a perturbation). ``check_axiom``
evaluates the axiom's equalities or inequalities on one instance with exact
arithmetic. ``falsify`` draws random instances until one fails, then shrinks
it. The special-situation axioms are evaluated on their fixed example trees.

Backward values are compared at outcomes in the event; forward values at the
group's decision nodes.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from types import MappingProxyType

from . import transforms as tf
from .responsibility import ResponsibilityError, VariantId, analysis
from .scenarios import ParadigmId, build_paradigmatic
from .strategy_engine import iter_strategies, strategy_outcomes
from .tree_core import (
    Ambiguity,
    Decision,
    DecisionTree,
    Event,
    NodeId,
    Outcome,
    Probability,
    TreeError,
    ValidationError,
    choice_at,
    history,
)
from .tree_io import TreeDocument, parse

__all__ = [
    "AxiomId",
    "CheckStatus",
    "Instance",
    "Comparison",
    "Witness",
    "CheckResult",
    "GeneratorConfig",
    "InstanceError",
    "ComplianceMatrix",
    "TABLE1_AXIOMS",
    "TABLE1_EXPECTED",
    "SPECIAL_AXIOMS",
    "check_axiom",
    "falsify",
    "compliance_matrix",
    "generate_random_tree",
    "named_counterexample",
    "zero_weight_instance",
    "special_instances",
    "applicable",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class AxiomId(str, Enum):
    ANON = "Anon"
    ACON = "ACon"
    OCON = "OCon"
    FCS = "FCS"
    IST = "IST"
    IZP = "IZP"
    ICP = "ICP"
    INA = "INA"
    INP = "INP"
    IND = "IND"
    IAT = "IAT"
    IOA = "IOA"
    IGC = "IGC"
    FIU = "FIU"
    BIL = "BIL"
    PCONT = "PCont"
    CAM = "CAM"
    PAM = "PAM"
    AMF = "AMF"
    GSM = "GSM"
    GSA = "GSA"
    GPA = "GPA"
    GA = "GA"
    MBF = "MBF"
    NRV = "NRV"
    NUR = "NUR"
    NORM = "Norm"
    NWT = "NWT"
    NUT = "NUT"
    NFT = "NFT"
    NUD = "NUD"
    UFR = "UFR"
    MFR = "MFR"
    CFR = "CFR"
    OPR = "OPR"
    MAR = "MAR"

    @classmethod
    def parse(cls, text: str | "AxiomId") -> "AxiomId":
        if isinstance(text, AxiomId):
            return text
        for a in cls:
            if a.value.lower() == str(text).strip().lower():
                return a
        raise ValueError(f"unknown axiom {text!r}")


A = AxiomId

SPECIAL_AXIOMS = frozenset({A.NORM, A.NWT, A.NUT, A.NFT, A.NUD, A.UFR, A.MFR, A.CFR, A.OPR, A.MAR})
# axioms about forward responsibility only; variants without a forward function skip them
FORWARD_ONLY = frozenset({A.FCS, A.FIU, A.CAM, A.AMF, A.NWT, A.NUT, A.NFT, A.NUD, A.MBF})

TABLE1_AXIOMS = (A.IND, A.IAT, A.GSM, A.AMF, A.NRV, A.NUR, A.MBF, A.NFT, A.NUD, A.MFR, A.CFR)


def _row(marks: str) -> dict[AxiomId, str]:
    return {a: {"+": "holds", "-": "counterexample", ".": "n/a"}[m] for a, m in zip(TABLE1_AXIOMS, marks)}


#: Expected compliance statuses per variant, in the order of ``TABLE1_AXIOMS``.
TABLE1_EXPECTED: Mapping[VariantId, Mapping[AxiomId, str]] = MappingProxyType({
    VariantId.V0: _row("+-+.++...+-"),
    VariantId.V1: _row("+-+-++++-+-"),
    VariantId.V2: _row("++---++---+"),
    VariantId.V3: _row("-+-++--++++"),
    VariantId.V4: _row("-+---++++++"),
})


class CheckStatus(str, Enum):
    HOLDS = "holds"
    COUNTEREXAMPLE = "counterexample"
    NOT_APPLICABLE = "n/a"


class InstanceError(TreeError):
    """The instance does not have the shape the axiom requires."""


@dataclass(frozen=True)
class Instance:
    doc: TreeDocument
    group: frozenset[str]
    params: Mapping[str, object] = field(default_factory=dict)

    def describe(self) -> str:
        ps = ", ".join(f"{k}={_fmt(v)}" for k, v in sorted(self.params.items()))
        return f"tree {self.doc.name!r}, group {{{', '.join(sorted(self.group))}}}" + (f", {ps}" if ps else "")


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (tuple, list, frozenset, set)):
        return "[" + ", ".join(_fmt(x) for x in (sorted(v) if isinstance(v, (set, frozenset)) else v)) + "]"
    return str(v)


_RELATIONS = {
    "==": lambda a, b: a == b,
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
}


@dataclass(frozen=True)
class Comparison:
    """``left relation right`` must hold; ``query`` says what was compared."""

    query: str
    left: Fraction
    relation: str
    right: Fraction

    @property
    def ok(self) -> bool:
        return _RELATIONS[self.relation](self.left, self.right)

    def __str__(self) -> str:
        return f"{self.query}: {self.left} {self.relation} {self.right} is {'true' if self.ok else 'false'}"


@dataclass(frozen=True)
class Witness:
    instance: Instance
    failures: tuple[Comparison, ...]

    def describe(self) -> str:
        return self.instance.describe() + "; " + "; ".join(str(c) for c in self.failures)


@dataclass(frozen=True)
class CheckResult:
    axiom: AxiomId
    variant: VariantId
    status: CheckStatus
    witness: Witness | None = None
    checked: int = 0
    budget: int | None = None
    seed: int | None = None
    source: str = "instance"
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.status is CheckStatus.HOLDS

    def summary(self) -> str:
        parts = [f"{self.axiom.value} variant {self.variant.value}: {self.status.value}"]
        if self.budget is not None:
            parts.append(f"{self.checked} instances of budget {self.budget}, seed {self.seed}")
        if self.witness is not None:
            parts.append(self.witness.describe())
        if self.note:
            parts.append(self.note)
        return "; ".join(parts)


@dataclass(frozen=True)
class GeneratorConfig:
    max_depth: int = 4
    max_branching: int = 3
    min_branching: int = 2
    agents: int = 3
    probability_density: float = 0.2
    ambiguity_density: float = 0.2
    infoset_density: float = 0.4
    leaf_density: float = 0.35
    event_density: float = 0.5
    seed: int = 0


def applicable(variant: VariantId | str, axiom: AxiomId | str) -> bool:
    variant, axiom = VariantId.parse(variant), AxiomId.parse(axiom)
    return variant.has_forward or axiom not in FORWARD_ONLY


# ---------------------------------------------------------------------------
# evaluation helpers
# ---------------------------------------------------------------------------


def _rb(variant, tree, event, group, v) -> Fraction:
    try:
        return analysis(tree, event, group).backward(variant, v).value
    except ResponsibilityError as exc:
        raise InstanceError(str(exc)) from None


def _rf(variant, tree, event, group, v) -> Fraction:
    try:
        return analysis(tree, event, group).forward(variant, v).value
    except ResponsibilityError as exc:
        raise InstanceError(str(exc)) from None


def _group_nodes(tree: DecisionTree, group) -> list[NodeId]:
    return [v for v in tree.decision_nodes if tree.nodes[v].agent in group]  # type: ignore[union-attr]


def _profile(variant: VariantId, tree: DecisionTree, event: Event, group) -> dict[tuple[str, NodeId], Fraction]:
    """Backward values at event outcomes and forward values at group nodes."""
    out: dict[tuple[str, NodeId], Fraction] = {}
    for v in tree.outcomes:
        if v in event:
            out[("rb", v)] = _rb(variant, tree, event, group, v)
    if variant.has_forward:
        for v in _group_nodes(tree, group):
            out[("rf", v)] = _rf(variant, tree, event, group, v)
    return out


def _mapped(before: Mapping, after: Mapping, res: tf.TransformResult, relation: str = "==",
            skip: Iterable[tuple[str, NodeId]] = ()) -> list[Comparison]:
    """Compare ``after`` (left) with ``before`` (right) along the transform's node map."""
    skipped = set(skip)
    out: list[Comparison] = []
    for (d, x), old in before.items():
        if (d, x) in skipped:
            continue
        targets = (res.node_map[x],) if x in res.node_map else res.copies.get(x, ())
        for y in targets:
            if (d, y) in after:
                out.append(Comparison(f"{d}({y}) after vs {d}({x}) before", after[(d, y)], relation, old))
    return out


def _unchanged(variant, inst: Instance, res: tf.TransformResult, group_after=None, skip=()) -> list[Comparison]:
    doc = inst.doc
    before = _profile(variant, doc.tree, doc.event, inst.group)
    after = _profile(variant, res.tree, res.event, inst.group if group_after is None else group_after)
    return _mapped(before, after, res, "==", skip)


def _param(inst: Instance, key: str):
    try:
        return inst.params[key]
    except KeyError:
        raise InstanceError(f"instance lacks parameter {key!r}") from None


def _transform(fn, *args, **kw) -> tf.TransformResult:
    try:
        return fn(*args, **kw)
    except (tf.TransformError, ValidationError) as exc:
        raise InstanceError(str(exc)) from None


def _nonempty_subsets(agents: Iterable[str]) -> list[frozenset[str]]:
    items = sorted(agents)
    return [frozenset(c) for r in range(1, len(items) + 1) for c in itertools.combinations(items, r)]


# ---------------------------------------------------------------------------
# per-axiom checks
# ---------------------------------------------------------------------------


def _check_anon(variant, inst):
    old, new = _param(inst, "agent"), _param(inst, "new")
    res = _transform(tf.relabel, inst.doc, "agent", old, new)
    g2 = frozenset(new if a == old else a for a in inst.group)
    return _unchanged(variant, inst, res, g2)


def _check_acon(variant, inst):
    res = _transform(tf.relabel, inst.doc, "action", _param(inst, "action"), _param(inst, "new"),
                     at=_param(inst, "node"))
    return _unchanged(variant, inst, res)


def _check_ocon(variant, inst):
    res = _transform(tf.relabel, inst.doc, "outcome", _param(inst, "outcome"), _param(inst, "new"))
    return _unchanged(variant, inst, res)


def _check_fcs(variant, inst):
    tree, eps = inst.doc.tree, inst.doc.event
    comp = tf.complement_event(eps, tree)
    return [
        Comparison(f"rf({v}) complement vs event", _rf(variant, tree, comp, inst.group, v), "==",
                   _rf(variant, tree, eps, inst.group, v))
        for v in _group_nodes(tree, inst.group)
    ]


def _check_ist(variant, inst):
    return _unchanged(variant, inst, _transform(tf.eliminate_sure_thing, inst.doc, _param(inst, "node")))


def _check_izp(variant, inst):
    res = _transform(tf.prune_zero_probability, inst.doc, _param(inst, "node"), _param(inst, "child"))
    return _unchanged(variant, inst, res)


def _check_icp(variant, inst):
    res = _transform(tf.clone_possibility, inst.doc, _param(inst, "node"), _param(inst, "child"))
    return _unchanged(variant, inst, res)


def _nested(kind):
    def check(variant, inst):
        v, child = _param(inst, "node"), _param(inst, "child")
        if not isinstance(inst.doc.tree.kind(v), kind):
            raise InstanceError(f"{v!r} is not a {kind.__name__.lower()} node")
        return _unchanged(variant, inst, _transform(tf.merge_nested_uncertainty, inst.doc, v, child))
    return check


def _check_ind(variant, inst):
    v = _param(inst, "node")
    res = _transform(tf.merge_nested_decisions, inst.doc, v, _param(inst, "action"))
    # forward responsibility at the merged node itself is not constrained
    return _unchanged(variant, inst, res, skip=[("rf", v)])


def _check_iat(variant, inst):
    res = _transform(tf.pull_ambiguity_before, inst.doc, _param(inst, "node"), _param(inst, "ambiguity"))
    return _unchanged(variant, inst, res)


def _check_ioa(variant, inst):
    v = _param(inst, "node")
    k = inst.doc.tree.kind(v)
    if not isinstance(k, Decision) or k.agent in inst.group:
        raise InstanceError(f"{v!r} must be a decision node of an agent outside the group")
    return _unchanged(variant, inst, _transform(tf.decision_to_ambiguity, inst.doc, v))


def _check_igc(variant, inst):
    keep, absorbed = _param(inst, "keep"), _param(inst, "absorbed")
    if not {keep, absorbed} <= inst.group:
        raise InstanceError("both agents must belong to the group")
    res = _transform(tf.merge_group_agents, inst.doc, keep, absorbed)
    return _unchanged(variant, inst, res, inst.group - {absorbed})


def _check_fiu(variant, inst):
    if len(inst.group) != 1:
        raise InstanceError("the group must consist of a single agent")
    tree, eps = inst.doc.tree, inst.doc.event
    out = []
    for members in tree.infosets.values():
        if len(members) < 2 or tree.nodes[members[0]].agent not in inst.group:  # type: ignore[union-attr]
            continue
        first = _rf(variant, tree, eps, inst.group, members[0])
        for m in members[1:]:
            out.append(Comparison(f"rf({m}) vs rf({members[0]})", _rf(variant, tree, eps, inst.group, m), "==", first))
    return out


def _choice_history(tree: DecisionTree, v_o: NodeId) -> tuple:
    return tuple((v, choice_at(tree, v, v_o)) for v in history(tree, v_o)[:-1] if tree.is_decision(v))


def _check_bil(variant, inst):
    tree, eps = inst.doc.tree, inst.doc.event
    classes: dict[tuple, list[NodeId]] = {}
    for v in tree.outcomes:
        if v in eps:
            classes.setdefault(_choice_history(tree, v), []).append(v)
    out = []
    for members in classes.values():
        first = _rb(variant, tree, eps, inst.group, members[0])
        for m in members[1:]:
            out.append(Comparison(f"rb({m}) vs rb({members[0]})", _rb(variant, tree, eps, inst.group, m), "==", first))
    return out


def _lipschitz_bound(tree: DecisionTree) -> int:
    # every likelihood moves by at most the L1 size of the perturbation; each
    # responsibility value combines at most four such moves per decision on a path
    return 4 * (max(tree.depth.values()) + 1)


def _check_pcont(variant, inst):
    v = _param(inst, "node")
    weights = [Fraction(w) for w in _param(inst, "weights")]
    k = inst.doc.tree.kind(v)
    if not isinstance(k, Probability):
        raise InstanceError(f"{v!r} is not a probability node")
    delta = sum((abs(a - b) for (_, a), b in zip(k.branches, weights)), ZERO)
    if delta == 0:
        raise InstanceError("the perturbation is zero")
    res = _transform(tf.perturb_probabilities, inst.doc, v, weights)
    before = _profile(variant, inst.doc.tree, inst.doc.event, inst.group)
    after = _profile(variant, res.tree, res.event, inst.group)
    bound = _lipschitz_bound(inst.doc.tree) * delta
    return [
        Comparison(f"|change of {d}({x})| for perturbation {delta}", abs(after[(d, x)] - val), "<=", bound)
        for (d, x), val in before.items()
    ]


def _require_group_node(inst: Instance, v: NodeId) -> Decision:
    k = inst.doc.tree.kind(v)
    if not isinstance(k, Decision) or k.agent not in inst.group:
        raise InstanceError(f"{v!r} is not a decision node of the group")
    return k


def _check_cam(variant, inst):
    v = _param(inst, "node")
    _require_group_node(inst, v)
    res = _transform(tf.remove_action, inst.doc, v, _param(inst, "action"))
    doc = inst.doc
    return [Comparison(f"rf({v}) after vs before", _rf(variant, res.tree, res.event, inst.group, v), "<=",
                       _rf(variant, doc.tree, doc.event, inst.group, v))]


def _check_pam(variant, inst):
    v, a, v_o = _param(inst, "node"), _param(inst, "action"), _param(inst, "outcome")
    doc = inst.doc
    _require_group_node(inst, v)
    if v_o not in doc.event:
        raise InstanceError(f"{v_o!r} is not in the event")
    if v not in history(doc.tree, v_o)[:-1]:
        raise InstanceError(f"{v!r} is not on the history of {v_o!r}")
    if choice_at(doc.tree, v, v_o) == a:
        raise InstanceError(f"{a!r} is the action taken towards {v_o!r}")
    res = _transform(tf.remove_action, doc, v, a)
    return [Comparison(f"rb({v_o}) after vs before", _rb(variant, res.tree, res.event, inst.group, v_o), "<=",
                       _rb(variant, doc.tree, doc.event, inst.group, v_o))]


def _check_amf(variant, inst):
    v_a, child = _param(inst, "node"), _param(inst, "child")
    res = _transform(tf.remove_ambiguity_successor, inst.doc, v_a, child)
    before = {k: x for k, x in _profile(variant, inst.doc.tree, inst.doc.event, inst.group).items() if k[0] == "rf"}
    after = _profile(variant, res.tree, res.event, inst.group)
    return _mapped(before, after, res, "<=")


def _check_gsm(variant, inst):
    sup = frozenset(_param(inst, "supergroup"))
    if not inst.group <= sup:
        raise InstanceError("the supergroup must contain the group")
    tree, eps = inst.doc.tree, inst.doc.event
    small = _profile(variant, tree, eps, inst.group)
    big = _profile(variant, tree, eps, sup)
    return [Comparison(f"{d}({x}) group vs supergroup", val, "<=", big[(d, x)]) for (d, x), val in small.items()]


def _additivity(relation):
    def check(variant, inst):
        other = frozenset(_param(inst, "other"))
        if not other or other & inst.group:
            raise InstanceError("the second group must be nonempty and disjoint from the first")
        tree, eps = inst.doc.tree, inst.doc.event
        out = []
        for v in tree.outcomes:
            if v not in eps:
                continue
            joint = _rb(variant, tree, eps, inst.group | other, v)
            parts = _rb(variant, tree, eps, inst.group, v) + _rb(variant, tree, eps, other, v)
            out.append(Comparison(f"rb({v}) of union vs sum", joint, relation, parts))
        return out
    return check


def _check_mbf(variant, inst):
    tree, eps, g = inst.doc.tree, inst.doc.event, inst.group
    rb = {v: (_rb(variant, tree, eps, g, v) if v in eps else ZERO) for v in tree.outcomes}
    out = []
    for v in _group_nodes(tree, g):
        target = _rf(variant, tree, eps, g, v)
        best = None
        for sigma in iter_strategies(tree, v, g):
            top = max(rb[w] for w in strategy_outcomes(tree, v, g, sigma))
            best = top if best is None else max(best, top)
            if best >= target:
                break
        out.append(Comparison(f"best reachable rb vs rf({v})", best if best is not None else ZERO, ">=", target))
    return out


def _check_nrv(variant, inst):
    tree, eps = inst.doc.tree, inst.doc.event
    if any(isinstance(k, (Ambiguity, Probability)) for k in tree.nodes.values()):
        raise InstanceError("the tree must not contain ambiguity or probability nodes")
    if not eps.outcomes or set(tree.outcomes) <= eps.outcomes:
        raise InstanceError("the event must be a nonempty proper subset of the outcomes")
    groups = _nonempty_subsets(tree.agents)
    out = []
    for v in tree.outcomes:
        if v in eps:
            best = max((_rb(variant, tree, eps, g, v) for g in groups), default=ZERO)
            out.append(Comparison(f"largest rb({v}) over all groups", best, ">", ZERO))
    return out


def _check_nur(variant, inst):
    tree, eps = inst.doc.tree, inst.doc.event
    out = []
    for g in _nonempty_subsets(tree.agents):
        blamed = {v for v in tree.outcomes if v in eps and _rb(variant, tree, eps, g, v) > 0}
        least = ONE
        for sigma in iter_strategies(tree, tree.root, g):
            reach = strategy_outcomes(tree, tree.root, g, sigma)
            worst = max((_rb(variant, tree, eps, g, v) for v in reach & blamed), default=ZERO)
            least = min(least, worst) if least is not None else worst
            if least == 0:
                break
        if not blamed:
            least = ZERO
        out.append(Comparison(f"least unavoidable rb for group {{{', '.join(sorted(g))}}}", least, "==", ZERO))
    return out


# -- special situations -------------------------------------------------------


def _fixed(pid: ParadigmId, **kw) -> Instance:
    return Instance(build_paradigmatic(pid, **kw), frozenset({"i"}), MappingProxyType(dict(kw)))


def _value_checks(variant, inst, wanted: Sequence[tuple[str, NodeId, Fraction]]) -> list[Comparison]:
    tree, eps = inst.doc.tree, inst.doc.event
    out = []
    for d, v, target in wanted:
        if d == "rf":
            if not variant.has_forward:
                continue
            val = _rf(variant, tree, eps, inst.group, v)
        else:
            val = _rb(variant, tree, eps, inst.group, v)
        out.append(Comparison(f"{d}({v})", val, "==", target))
    return out


def _special(pid: ParadigmId, wanted, **defaults):
    def check(variant, inst):
        return _value_checks(variant, inst, wanted)
    check.default = lambda: [_fixed(pid, **defaults)]  # type: ignore[attr-defined]
    return check


def _check_opr(variant, inst):
    p, q = Fraction(_param(inst, "p")), Fraction(_param(inst, "q"))
    p2, q2 = Fraction(_param(inst, "p2")), Fraction(_param(inst, "q2"))
    if not (p < q and ((p2 == p and q2 > q) or (q2 == q and p2 < p))):
        raise InstanceError("need p < q and either a larger q or a smaller p")
    old = build_paradigmatic(ParadigmId.CHOOSE_PROBABILITIES, p=p, q=q)
    new = build_paradigmatic(ParadigmId.CHOOSE_PROBABILITIES, p=p2, q=q2)
    g = inst.group
    out = []
    if variant.has_forward:
        out.append(Comparison("rf(v1) after vs before", _rf(variant, new.tree, new.event, g, "v1"), ">",
                              _rf(variant, old.tree, old.event, g, "v1")))
    out.append(Comparison("rb(v5) after vs before", _rb(variant, new.tree, new.event, g, "v5"), ">",
                          _rb(variant, old.tree, old.event, g, "v5")))
    return out


_GRID = tuple(Fraction(n, 4) for n in range(5))


def _opr_default() -> list[Instance]:
    doc = build_paradigmatic(ParadigmId.CHOOSE_PROBABILITIES)
    out = []
    for p, q in itertools.combinations(_GRID, 2):
        for q2 in (x for x in _GRID if x > q):
            out.append(Instance(doc, frozenset({"i"}), MappingProxyType({"p": p, "q": q, "p2": p, "q2": q2})))
        for p2 in (x for x in _GRID if x < p):
            out.append(Instance(doc, frozenset({"i"}), MappingProxyType({"p": p, "q": q, "p2": p2, "q2": q})))
    return out


def _check_mar(variant, inst):
    p = Fraction(_param(inst, "p"))
    if p <= 0:
        raise InstanceError("p must be positive")
    doc = build_paradigmatic(ParadigmId.HESITATION_I, p=p)
    return [Comparison("rb(v5) vs rb(v6)", _rb(variant, doc.tree, doc.event, inst.group, "v5"), ">",
                       _rb(variant, doc.tree, doc.event, inst.group, "v6"))]


def _mar_default() -> list[Instance]:
    return [_fixed(ParadigmId.HESITATION_I, p=p) for p in (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(3, 4), ONE)]


_check_opr.default = _opr_default  # type: ignore[attr-defined]
_check_mar.default = _mar_default  # type: ignore[attr-defined]

_CHECKS = {
    A.ANON: _check_anon,
    A.ACON: _check_acon,
    A.OCON: _check_ocon,
    A.FCS: _check_fcs,
    A.IST: _check_ist,
    A.IZP: _check_izp,
    A.ICP: _check_icp,
    A.INA: _nested(Ambiguity),
    A.INP: _nested(Probability),
    A.IND: _check_ind,
    A.IAT: _check_iat,
    A.IOA: _check_ioa,
    A.IGC: _check_igc,
    A.FIU: _check_fiu,
    A.BIL: _check_bil,
    A.PCONT: _check_pcont,
    A.CAM: _check_cam,
    A.PAM: _check_pam,
    A.AMF: _check_amf,
    A.GSM: _check_gsm,
    A.GSA: _additivity("<="),
    A.GPA: _additivity(">="),
    A.GA: _additivity("=="),
    A.MBF: _check_mbf,
    A.NRV: _check_nrv,
    A.NUR: _check_nur,
    A.NORM: _special(ParadigmId.CHOOSE_PROBABILITIES,
                     [("rf", "v1", ONE), ("rb", "v5", ONE), ("rb", "v2", ZERO)], p=ZERO, q=ONE),
    A.NWT: _special(ParadigmId.LOAD_AND_SHOOT, [("rf", "v2", ONE)]),
    A.NUT: _special(ParadigmId.LOAD_AND_SHOOT, [("rf", "v1", ONE)]),
    A.NFT: _special(ParadigmId.ROCK_THROWING, [("rf", "v1", ONE)]),
    A.NUD: _special(ParadigmId.ROCK_THROWING, [("rf", "v2", ONE)]),
    A.UFR: _special(ParadigmId.LOAD_AND_SHOOT, [("rb", "v6", ONE)]),
    A.MFR: _special(ParadigmId.ROCK_THROWING, [("rb", "v6", ONE)]),
    A.CFR: _special(ParadigmId.LOAD_AND_SHOOT, [("rb", "v4", ONE)]),
    A.OPR: _check_opr,
    A.MAR: _check_mar,
}


def special_instances(axiom: AxiomId | str) -> list[Instance]:
    """The fixed instances a special-situation axiom is evaluated on."""
    axiom = AxiomId.parse(axiom)
    if axiom not in SPECIAL_AXIOMS:
        raise ValueError(f"{axiom.value} is not a special-situation axiom")
    return _CHECKS[axiom].default()  # type: ignore[attr-defined]


def _failures(variant: VariantId, axiom: AxiomId, inst: Instance) -> tuple[Comparison, ...]:
    comps = _CHECKS[axiom](variant, inst)
    return tuple(c for c in comps if not c.ok)


def check_axiom(variant: VariantId | str, axiom: AxiomId | str, instance: Instance | None = None) -> CheckResult:
    """Evaluate ``axiom`` for ``variant`` on one instance.

    Special-situation axioms accept ``instance=None`` and then use their
    fixed example trees. Raises :class:`InstanceError` for malformed instances.
    """
    variant, axiom = VariantId.parse(variant), AxiomId.parse(axiom)
    if not applicable(variant, axiom):
        return CheckResult(axiom, variant, CheckStatus.NOT_APPLICABLE, note="no forward function")
    if instance is None:
        if axiom not in SPECIAL_AXIOMS:
            raise InstanceError(f"{axiom.value} needs an instance")
        instances = special_instances(axiom)
    else:
        instances = [instance]
    for inst in instances:
        bad = _failures(variant, axiom, inst)
        if bad:
            return CheckResult(axiom, variant, CheckStatus.COUNTEREXAMPLE, Witness(inst, bad), len(instances),
                               source="fixed" if instance is None else "instance")
    return CheckResult(axiom, variant, CheckStatus.HOLDS, None, len(instances),
                       source="fixed" if instance is None else "instance")


# ---------------------------------------------------------------------------
# random trees
# ---------------------------------------------------------------------------

_AGENT_NAMES = ("i", "j", "k", "l", "m")
_ACTION_NAMES = ("a", "b", "c", "d", "e")


def generate_random_tree(config: GeneratorConfig = GeneratorConfig()) -> TreeDocument:
    """A random valid tree; identical configs give identical documents.

    Information sets only join sibling decision nodes of one agent with the
    same number of actions.
    """
    c = config
    if not (1 <= c.max_depth and 1 <= c.min_branching <= c.max_branching <= len(_ACTION_NAMES)
            and 1 <= c.agents <= len(_AGENT_NAMES)):
        raise ValueError("unsatisfiable generator configuration")
    for name in ("probability_density", "ambiguity_density", "infoset_density", "leaf_density", "event_density"):
        if not 0 <= getattr(c, name) <= 1:
            raise ValueError(f"{name} must lie in [0, 1]")
    if c.probability_density + c.ambiguity_density > 1:
        raise ValueError("probability and ambiguity densities exceed 1")

    rng = random.Random(c.seed)
    agents = _AGENT_NAMES[: c.agents]
    kinds: dict[str, object] = {}
    order: list[str] = []

    def grow(depth: int) -> str:
        v = f"n{len(order)}"
        order.append(v)
        if depth == c.max_depth or (depth > 0 and rng.random() < c.leaf_density):
            kinds[v] = Outcome()
            return v
        r = rng.random()
        n = rng.randint(c.min_branching, c.max_branching)
        if r < c.probability_density:
            raw = [rng.randint(0, 3) for _ in range(n)]
            if not any(raw):
                raw = [1] * n
            total = sum(raw)
            succ = [grow(depth + 1) for _ in range(n)]
            kinds[v] = Probability(tuple((s, Fraction(w, total)) for s, w in zip(succ, raw)))
        elif r < c.probability_density + c.ambiguity_density:
            kinds[v] = Ambiguity(tuple(grow(depth + 1) for _ in range(n)))
        else:
            agent = rng.choice(agents)
            succ = [grow(depth + 1) for _ in range(n)]
            kinds[v] = Decision(agent, tuple(zip(_ACTION_NAMES, succ)))
        return v

    grow(0)
    sets = 0
    for v in order:
        k = kinds[v]
        if isinstance(k, Outcome):
            continue
        by_shape: dict[tuple, list[str]] = {}
        for s in k.successors:  # type: ignore[attr-defined]
            ks = kinds[s]
            if isinstance(ks, Decision):
                by_shape.setdefault((ks.agent, len(ks.actions)), []).append(s)
        for members in by_shape.values():
            if len(members) >= 2 and rng.random() < c.infoset_density:
                name = f"y{sets}"
                sets += 1
                for s in members:
                    ks = kinds[s]
                    kinds[s] = Decision(ks.agent, ks.actions, name)  # type: ignore[union-attr]
    tree = DecisionTree.build([(v, kinds[v]) for v in order], root="n0")
    outs = list(tree.outcomes)
    bad = {v for v in outs if rng.random() < c.event_density}
    if c.event_density > 0 and not bad:
        bad = {rng.choice(outs)}
    return TreeDocument(tree, Event(bad), f"random_{c.seed}")


# ---------------------------------------------------------------------------
# instance sampling
# ---------------------------------------------------------------------------


def _rebuilt(tree: DecisionTree, nodes: Mapping, root=None) -> DecisionTree:
    return DecisionTree.build(dict(nodes), root=tree.root if root is None else root, agents=tree.agents)


def _random_group(rng: random.Random, agents: Iterable[str], min_size: int = 1) -> frozenset[str] | None:
    items = sorted(agents)
    if len(items) < min_size:
        return None
    size = rng.randint(min_size, len(items))
    return frozenset(rng.sample(items, size))


def _fresh_id(tree: DecisionTree, base: str) -> str:
    name, i = base, 1
    while name in tree.nodes:
        name = f"{base}{i}"
        i += 1
    return name


def _complete_decisions(tree: DecisionTree, agents=None) -> list[NodeId]:
    return [v for v in tree.decision_nodes if tree.is_complete_information(v)
            and (agents is None or tree.nodes[v].agent in agents)]  # type: ignore[union-attr]


def _insert_above(doc: TreeDocument, child: NodeId, new_id: NodeId, kind_for) -> TreeDocument:
    """Insert node ``new_id`` between ``child`` and its parent; ``kind_for(child)`` builds it."""
    tree = doc.tree
    nodes = dict(tree.nodes)
    par = tree.parent.get(child)
    if par is not None:
        nodes[par] = tf._replace_successor(nodes[par], child, new_id)
    nodes[new_id] = kind_for(child)
    root = new_id if par is None else tree.root
    return TreeDocument(_rebuilt(tree, nodes, root), doc.event, doc.name)


def _with_params(doc, group, **params) -> Instance:
    return Instance(doc, frozenset(group), MappingProxyType(params))


def _sample(axiom: AxiomId, doc: TreeDocument, rng: random.Random) -> Instance | None:
    tree = doc.tree
    group = _random_group(rng, tree.agents)
    if group is None:
        return None
    if axiom is A.ANON:
        return _with_params(doc, group, agent=rng.choice(sorted(tree.agents)), new="x_new")
    if axiom is A.ACON:
        v = rng.choice(tree.decision_nodes)
        return _with_params(doc, group, node=v, action=rng.choice(tree.nodes[v].labels), new="renamed")
    if axiom is A.OCON:
        return _with_params(doc, group, outcome=rng.choice(tree.outcomes), new=_fresh_id(tree, "renamed"))
    if axiom in (A.FCS, A.BIL, A.MBF):
        return _with_params(doc, group)
    if axiom is A.IST:
        child = rng.choice([v for v in tree.order if v != tree.root] or [tree.root])
        new = _fresh_id(tree, "sure")
        agents = sorted(tree.agents)
        choice = rng.randrange(3)
        if choice == 0:
            kind_for = lambda c: Probability(((c, ONE),))  # noqa: E731
        elif choice == 1:
            kind_for = lambda c: Ambiguity((c,))  # noqa: E731
        else:
            agent = rng.choice(agents)
            kind_for = lambda c: Decision(agent, (("go", c),))  # noqa: E731
        return _with_params(_insert_above(doc, child, new, kind_for), group, node=new)
    if axiom in (A.IZP, A.PCONT):
        probs = [v for v in tree.order if isinstance(tree.nodes[v], Probability) and len(tree.nodes[v].successors) >= 2]
        if not probs:
            return None
        v = rng.choice(probs)
        k = tree.nodes[v]
        succ = list(k.successors)
        weights = [w for _, w in k.branches]
        if axiom is A.IZP:
            i, j = rng.sample(range(len(succ)), 2)
            weights[j] += weights[i]
            weights[i] = ZERO
            nodes = dict(tree.nodes)
            nodes[v] = Probability(tuple(zip(succ, weights)))
            new_doc = TreeDocument(_rebuilt(tree, nodes), doc.event, doc.name)
            return _with_params(new_doc, group, node=v, child=succ[i])
        donors = [i for i, w in enumerate(weights) if w > 0]
        i = rng.choice(donors)
        j = rng.choice([x for x in range(len(succ)) if x != i])
        delta = min(weights[i], Fraction(1, rng.choice((1000, 1000000))))
        weights[i] -= delta
        weights[j] += delta
        return _with_params(doc, group, node=v, weights=tuple(weights))
    if axiom in (A.ICP, A.AMF):
        ambs = [v for v in tree.order if isinstance(tree.nodes[v], Ambiguity)
                and (axiom is A.ICP or len(tree.nodes[v].successors) >= 2)]
        if not ambs:
            return None
        v = rng.choice(ambs)
        return _with_params(doc, group, node=v, child=rng.choice(tree.nodes[v].successors))
    if axiom in (A.INA, A.INP):
        cls = Ambiguity if axiom is A.INA else Probability
        pairs = [(v, s) for v in tree.order if isinstance(tree.nodes[v], cls)
                 for s in tree.nodes[v].successors if isinstance(tree.nodes[s], cls)]
        if pairs:
            v, s = rng.choice(pairs)
            return _with_params(doc, group, node=v, child=s)
        hosts = [v for v in tree.order if isinstance(tree.nodes[v], cls) and len(tree.nodes[v].successors) >= 2]
        if not hosts:
            return None
        v = rng.choice(hosts)
        return _nest(doc, group, v, rng)
    if axiom is A.IND:
        pairs = [(v, a) for v in _complete_decisions(tree) for a, s in tree.nodes[v].actions
                 if s in tree.nodes and isinstance(tree.nodes[s], Decision)
                 and tree.nodes[s].agent == tree.nodes[v].agent and tree.is_complete_information(s)]
        if pairs:
            v, a = rng.choice(pairs)
            return _with_params(doc, group, node=v, action=a)
        hosts = _complete_decisions(tree)
        if not hosts:
            return None
        return _split_decision(doc, group, rng.choice(hosts), rng)
    if axiom is A.IAT:
        pairs = [(v, s) for v in tree.order
                 if isinstance(tree.nodes[v], Probability) or v in set(_complete_decisions(tree))
                 for s in tree.nodes[v].successors if isinstance(tree.nodes[s], Ambiguity)]
        if pairs:
            v, s = rng.choice(pairs)
            return _with_params(doc, group, node=v, ambiguity=s)
        hosts = [v for v in tree.order if isinstance(tree.nodes[v], Probability)] + _complete_decisions(tree)
        if not hosts:
            return None
        v = rng.choice(hosts)
        child = rng.choice(tree.nodes[v].successors)
        amb, alt = _fresh_id(tree, "amb"), _fresh_id(tree, "alt")
        nodes = dict(tree.nodes)
        nodes[v] = tf._replace_successor(nodes[v], child, amb)
        nodes[amb] = Ambiguity((child, alt))
        nodes[alt] = Outcome()
        event = set(doc.event.outcomes) | ({alt} if rng.random() < 0.5 else set())
        new_doc = TreeDocument(_rebuilt(tree, nodes), Event(event), doc.name)
        return _with_params(new_doc, group, node=v, ambiguity=amb)
    if axiom is A.IOA:
        hosts = _complete_decisions(tree, tree.agents - group)
        if not hosts:
            return None
        return _with_params(doc, group, node=rng.choice(hosts))
    if axiom is A.IGC:
        group = _random_group(rng, tree.agents, 2)
        if group is None:
            return None
        keep, absorbed = rng.sample(sorted(group), 2)
        return _with_params(doc, group, keep=keep, absorbed=absorbed)
    if axiom is A.FIU:
        owners = sorted({tree.nodes[m[0]].agent for m in tree.infosets.values() if len(m) >= 2})
        if not owners:
            return None
        return _with_params(doc, {rng.choice(owners)})
    if axiom is A.CAM:
        hosts = [v for v in _complete_decisions(tree, group) if len(tree.nodes[v].actions) >= 2]
        if not hosts:
            return None
        v = rng.choice(hosts)
        return _with_params(doc, group, node=v, action=rng.choice(tree.nodes[v].labels))
    if axiom is A.PAM:
        options = []
        for v_o in tree.outcomes:
            if v_o not in doc.event:
                continue
            for v in history(tree, v_o)[:-1]:
                k = tree.nodes[v]
                if isinstance(k, Decision) and k.agent in group and tree.is_complete_information(v):
                    taken = choice_at(tree, v, v_o)
                    options.extend((v_o, v, a) for a in k.labels if a != taken)
        if not options:
            return None
        v_o, v, a = rng.choice(options)
        return _with_params(doc, group, outcome=v_o, node=v, action=a)
    if axiom is A.GSM:
        sup = _random_group(rng, tree.agents, 2)
        if sup is None:
            return None
        small = frozenset(rng.sample(sorted(sup), rng.randint(1, len(sup) - 1)))
        return _with_params(doc, small, supergroup=tuple(sorted(sup)))
    if axiom in (A.GSA, A.GPA, A.GA):
        both = _random_group(rng, tree.agents, 2)
        if both is None:
            return None
        first = frozenset(rng.sample(sorted(both), rng.randint(1, len(both) - 1)))
        return _with_params(doc, first, other=tuple(sorted(both - first)))
    if axiom is A.NRV:
        return _with_params(_certain(doc, rng), group)
    if axiom is A.NUR:
        return _with_params(doc, group)
    return None


def _nest(doc: TreeDocument, group, v: NodeId, rng: random.Random) -> Instance:
    """Group some successors of uncertainty node ``v`` under a new node of the same kind."""
    tree = doc.tree
    k = tree.nodes[v]
    succ = list(k.successors)
    chosen = sorted(rng.sample(range(len(succ)), rng.randint(2, len(succ))))
    new = _fresh_id(tree, "nest")
    nodes = dict(tree.nodes)
    if isinstance(k, Ambiguity):
        inner = Ambiguity(tuple(succ[i] for i in chosen))
        outer = [s for i, s in enumerate(succ) if i not in chosen]
        outer.insert(chosen[0], new)
        nodes[v] = Ambiguity(tuple(outer))
    else:
        ws = [w for _, w in k.branches]
        total = sum((ws[i] for i in chosen), ZERO)
        inner = Probability(tuple((succ[i], ws[i] / total if total else Fraction(1, len(chosen))) for i in chosen))
        outer_b = [(s, ws[i]) for i, s in enumerate(succ) if i not in chosen]
        outer_b.insert(chosen[0], (new, total))
        nodes[v] = Probability(tuple(outer_b))
    nodes[new] = inner
    new_doc = TreeDocument(_rebuilt(tree, nodes), doc.event, doc.name)
    return _with_params(new_doc, group, node=v, child=new)


def _split_decision(doc: TreeDocument, group, v: NodeId, rng: random.Random) -> Instance:
    """Move some actions of ``v`` behind a new decision node of the same agent."""
    tree = doc.tree
    k = tree.nodes[v]
    chosen = sorted(rng.sample(range(len(k.actions)), rng.randint(1, len(k.actions))))
    new = _fresh_id(tree, "later")
    label = "defer"
    while label in k.labels:
        label += "_"
    nodes = dict(tree.nodes)
    outer = [act for i, act in enumerate(k.actions) if i not in chosen]
    outer.insert(chosen[0], (label, new))
    nodes[v] = Decision(k.agent, tuple(outer), k.infoset)
    nodes[new] = Decision(k.agent, tuple(k.actions[i] for i in chosen))
    new_doc = TreeDocument(_rebuilt(tree, nodes), doc.event, doc.name)
    return _with_params(new_doc, group, node=v, action=label)


def _certain(doc: TreeDocument, rng: random.Random) -> TreeDocument:
    """Replace every uncertainty node by a complete-information decision node."""
    tree = doc.tree
    agents = sorted(tree.agents) or ["i"]
    nodes = {}
    for v, k in tree.nodes.items():
        if isinstance(k, (Ambiguity, Probability)):
            k = Decision(rng.choice(agents), tuple(zip(_ACTION_NAMES, k.successors)))
        nodes[v] = k
    built = DecisionTree.build(nodes, root=tree.root, agents=tree.agents | set(agents))
    return TreeDocument(built, doc.event, doc.name)


# ---------------------------------------------------------------------------
# shrinking
# ---------------------------------------------------------------------------

_NODE_PARAMS = ("node", "child", "ambiguity", "outcome")


def _referenced(inst: Instance) -> set[NodeId]:
    return {inst.params[k] for k in _NODE_PARAMS if k in inst.params}  # type: ignore[misc]


def _drop_branches(doc: TreeDocument, v: NodeId, index: int) -> TreeDocument:
    """Remove the ``index``-th successor at ``v`` and at all nodes equivalent to it."""
    tree = doc.tree
    nodes = dict(tree.nodes)
    gone: set[NodeId] = set()
    for w in tree.equivalents(v):
        k = nodes[w]
        s = k.successors[index]
        gone |= tree.subtree[s]
        if isinstance(k, Probability):
            rest = [(x, p) for i, (x, p) in enumerate(k.branches) if i != index]
            total = sum((p for _, p in rest), ZERO)
            nodes[w] = Probability(tuple((x, p / total if total else Fraction(1, len(rest))) for x, p in rest))
        else:
            nodes[w] = tf._drop_successor(k, s)
    for x in gone:
        del nodes[x]
    built = _rebuilt(tree, nodes)
    return TreeDocument(built, Event(o for o in doc.event.outcomes if o not in gone), doc.name)


def _reductions(inst: Instance) -> Iterable[Instance]:
    doc, tree = inst.doc, inst.doc.tree
    keep = _referenced(inst)
    for v in tree.order:
        k = tree.nodes[v]
        n = len(k.successors)
        if n < 2:
            continue
        members = tree.equivalents(v)
        for i in range(n):
            if any(tree.subtree[tree.nodes[w].successors[i]] & keep for w in members):
                continue
            try:
                yield replace(inst, doc=_drop_branches(doc, v, i))
            except (TreeError, ValueError):
                continue
    for v in tree.order:
        k = tree.nodes[v]
        if v in keep or isinstance(k, Outcome):
            continue
        if len(k.successors) == 1:
            try:
                yield replace(inst, doc=tf.eliminate_sure_thing(doc, v).document(doc.name))
            except TreeError:
                pass
        for s in k.successors:
            if s not in keep and type(tree.nodes[s]) is type(k) and not isinstance(k, Decision):
                yield replace(inst, doc=tf.merge_nested_uncertainty(doc, v, s).document(doc.name))


def _shrink(variant: VariantId, axiom: AxiomId, inst: Instance, failures) -> tuple[Instance, tuple]:
    improved = True
    while improved:
        improved = False
        for cand in _reductions(inst):
            try:
                bad = _failures(variant, axiom, cand)
            except (TreeError, ValueError):
                continue
            if bad:
                inst, failures, improved = cand, bad, True
                break
    return inst, failures


# ---------------------------------------------------------------------------
# falsification and the compliance matrix
# ---------------------------------------------------------------------------


def _instance_seed(seed: int, k: int) -> int:
    return seed * 1_000_003 + k


def falsify(variant: VariantId | str, axiom: AxiomId | str, config: GeneratorConfig = GeneratorConfig(),
            budget: int = 1000, shrink: bool = True) -> CheckResult:
    """Search ``budget`` random trees for a counterexample.

    Trees where the axiom's precondition cannot be arranged are skipped and
    not counted in ``checked``.
    """
    variant, axiom = VariantId.parse(variant), AxiomId.parse(axiom)
    if not applicable(variant, axiom):
        return CheckResult(axiom, variant, CheckStatus.NOT_APPLICABLE, note="no forward function")
    if axiom in SPECIAL_AXIOMS:
        return check_axiom(variant, axiom)
    checked = 0
    for k in range(budget):
        s = _instance_seed(config.seed, k)
        doc = generate_random_tree(replace(config, seed=s))
        inst = _sample(axiom, doc, random.Random(s))
        if inst is None:
            continue
        try:
            bad = _failures(variant, axiom, inst)
        except InstanceError:
            continue
        checked += 1
        if bad:
            if shrink:
                inst, bad = _shrink(variant, axiom, inst, bad)
            return CheckResult(axiom, variant, CheckStatus.COUNTEREXAMPLE, Witness(inst, bad), checked,
                               budget, config.seed, "search", f"found at draw {k}")
    return CheckResult(axiom, variant, CheckStatus.HOLDS, None, checked, budget, config.seed, "search")


_ZERO_WEIGHT_TREE = """
tree "zero_weight_branch" {
  agents: i;
  node d decision agent=i { act risky -> p; act safe -> ok; }
  node p probability { 1 -> harm; 0 -> spared; }
  node harm outcome bad;
  node spared outcome;
  node ok outcome;
}
"""


def zero_weight_instance() -> Instance:
    """A lottery whose only good branch has weight zero.

    Variant 0 reads certainty off the support of the tree, so pruning the
    zero-weight branch makes harm certain after ``risky``.
    """
    return Instance(parse(_ZERO_WEIGHT_TREE), frozenset({"i"}),
                    MappingProxyType({"node": "p", "child": "spared"}))


def named_counterexample(axiom: AxiomId | str, variant: VariantId | str) -> Instance | None:
    """The named counterexample for a failing cell of the compliance table, if there is one."""
    axiom, variant = AxiomId.parse(axiom), VariantId.parse(variant)
    v = variant.value
    i = frozenset({"i"})
    if axiom is A.IND and v in "34":
        return Instance(build_paradigmatic(ParadigmId.HESITATION_II), i,
                        MappingProxyType({"node": "v1", "action": "hesitate"}))
    if axiom is A.IAT and v in "01":
        doc = build_paradigmatic(ParadigmId.IAT_DECISION)
        doc = TreeDocument(doc.tree, Event({"v1"}), doc.name, doc.node_labels)
        return Instance(doc, i, MappingProxyType({"node": "v", "ambiguity": "va"}))
    if axiom is A.AMF and v in "124":
        child = "va_good" if v == "1" else "va_bad"
        return Instance(build_paradigmatic(ParadigmId.AMBIGUITY_PAIR), i,
                        MappingProxyType({"node": "va", "child": child}))
    if axiom is A.IZP and v == "0":
        return zero_weight_instance()
    if axiom in (A.NRV, A.NUR) and v in ("24" if axiom is A.NRV else "3"):
        return Instance(build_paradigmatic(ParadigmId.CLIMATE_NO_LEARNING), i)
    return None


@dataclass(frozen=True)
class ComplianceMatrix:
    variants: tuple[VariantId, ...]
    axioms: tuple[AxiomId, ...]
    cells: Mapping[tuple[VariantId, AxiomId], CheckResult]
    budget: int
    seed: int

    def status(self, variant, axiom) -> CheckStatus:
        return self.cells[(VariantId.parse(variant), AxiomId.parse(axiom))].status

    def to_text(self) -> str:
        marks = {CheckStatus.HOLDS: "+", CheckStatus.COUNTEREXAMPLE: "-", CheckStatus.NOT_APPLICABLE: "n/a"}
        width = max(4, *(len(a.value) for a in self.axioms))
        head = "variant " + " ".join(a.value.rjust(width) for a in self.axioms)
        lines = [head]
        for v in self.variants:
            lines.append(f"{v.value:>7} " + " ".join(marks[self.cells[(v, a)].status].rjust(width) for a in self.axioms))
        lines.append(f"budget {self.budget} random trees per searched cell, seed {self.seed}")
        return "\n".join(lines) + "\n"

    def rows(self) -> list[dict]:
        return [
            {
                "variant": v.value,
                "axiom": a.value,
                "status": self.cells[(v, a)].status.value,
                "source": self.cells[(v, a)].source,
                "checked": self.cells[(v, a)].checked,
                "seed": self.seed,
                "budget": self.budget,
            }
            for v in self.variants
            for a in self.axioms
        ]


def compliance_matrix(variants: Iterable[VariantId | str] = tuple(v for v in VariantId if v is not VariantId.NESS),
                      axioms: Iterable[AxiomId | str] = TABLE1_AXIOMS,
                      config: GeneratorConfig = GeneratorConfig(), budget: int = 1000) -> ComplianceMatrix:
    """Each cell tries the named counterexample first, then a random search
    (or the fixed trees for special-situation axioms)."""
    vs = tuple(VariantId.parse(v) for v in variants)
    axs = tuple(AxiomId.parse(a) for a in axioms)
    cells: dict[tuple[VariantId, AxiomId], CheckResult] = {}
    for v in vs:
        for a in axs:
            named = named_counterexample(a, v) if applicable(v, a) else None
            result = None
            if named is not None:
                try:
                    res = check_axiom(v, a, named)
                except InstanceError as exc:
                    res = None
                    note = f"named counterexample outside the precondition: {exc}"
                else:
                    note = "named counterexample does not fail"
                if res is not None and res.status is CheckStatus.COUNTEREXAMPLE:
                    result = replace(res, source="named")
            if result is None:
                result = falsify(v, a, config, budget)
                if named is not None:
                    result = replace(result, note="; ".join(x for x in (result.note, note) if x))
            cells[(v, a)] = result
    return ComplianceMatrix(vs, axs, MappingProxyType(cells), budget, config.seed)
