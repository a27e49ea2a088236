"""Canonical example trees, voting-method trees and their closed-form values.

Voting trees model a voter group of size ``m`` as the single agent ``"G"``
choosing how many of its ballots go where, followed by a decision of the
agent ``"O"`` (the other ``N - m`` voters) over anonymous vote-count classes.
The others do not observe the group's ballots of the same round, so their
nodes of one round share an information set; in later rounds they recall
only their own earlier ballots.
Lotteries (ties, random dictator, tipping) are probability nodes and the
undesired event is the election of option ``U`` (or tipping).
"""

from __future__ import annotations

import itertools
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .responsibility import Analysis, VariantId
from .tree_core import Ambiguity, Decision, DecisionTree, Event, NodeKind, Outcome, Probability, history
from .tree_io import TreeDocument, format_rational

__all__ = [
    "ParadigmId",
    "MethodId",
    "VotingParams",
    "KnifeEdgeError",
    "build_paradigmatic",
    "build_voting_tree",
    "closed_form",
    "verify_table2",
    "Table2Row",
    "Table2Report",
    "GROUP_AGENT",
    "OTHERS_AGENT",
    "TWO_ROUND",
]

F = Fraction
GROUP_AGENT = "G"
OTHERS_AGENT = "O"


class _Builder:
    def __init__(self):
        self.nodes: list[tuple[str, NodeKind]] = []
        self.bad: set[str] = set()

    def decision(self, v, agent, actions, infoset=None):
        self.nodes.append((v, Decision(agent, tuple(actions), infoset)))
        return v

    def ambiguity(self, v, successors):
        self.nodes.append((v, Ambiguity(tuple(successors))))
        return v

    def probability(self, v, branches):
        self.nodes.append((v, Probability(tuple((s, F(w)) for s, w in branches))))
        return v

    def outcome(self, v, bad=False):
        self.nodes.append((v, Outcome()))
        if bad:
            self.bad.add(v)
        return v

    def lottery(self, v, p_bad) -> str:
        """Outcome that is undesired with probability ``p_bad``; a plain outcome
        when the probability is 0 or 1."""
        p_bad = F(p_bad)
        if p_bad in (0, 1):
            return self.outcome(v, bad=p_bad == 1)
        self.probability(v, [(v + "_U", p_bad), (v + "_N", 1 - p_bad)])
        self.outcome(v + "_U", bad=True)
        self.outcome(v + "_N")
        return v

    def document(self, name, root=None, agents=None, labels=None) -> TreeDocument:
        tree = DecisionTree.build(self.nodes, root=root, agents=agents)
        return TreeDocument(tree, Event(self.bad), name, labels)


# ---------------------------------------------------------------------------
# paradigmatic examples
# ---------------------------------------------------------------------------


class ParadigmId(str, Enum):
    LOAD_AND_SHOOT = "load_and_shoot"
    ROCK_THROWING = "rock_throwing"
    CHOOSE_PROBABILITIES = "choose_probabilities"
    HESITATION_I = "hesitation_1"
    HESITATION_II = "hesitation_2"
    CLIMATE_NO_LEARNING = "climate_no_learning"
    CLIMATE_WITH_LEARNING = "climate_with_learning"
    AMBIGUITY_AVERSION = "ambiguity_aversion"
    IAT_DECISION = "iat_decision"
    IAT_PROBABILITY = "iat_probability"
    AMBIGUITY_PAIR = "ambiguity_pair"


def _prob(x, name) -> Fraction:
    x = F(x)
    if not 0 <= x <= 1:
        raise ValueError(f"{name} must lie in [0, 1], got {x}")
    return x


def build_paradigmatic(pid: ParadigmId | str, p=F(0), q=F(1)) -> TreeDocument:
    """The example tree ``pid``. ``p`` and ``q`` parameterize the examples that
    involve probabilities and are ignored by the others."""
    pid = ParadigmId(pid)
    p, q = _prob(p, "p"), _prob(q, "q")
    b = _Builder()
    if pid is ParadigmId.LOAD_AND_SHOOT:
        b.ambiguity("v0", ["v1", "v2"])
        b.decision("v1", "i", [("not_shoot", "v3"), ("shoot", "v4")], "y1")
        b.outcome("v3"), b.outcome("v4")
        b.decision("v2", "i", [("not_shoot", "v5"), ("shoot", "v6")], "y1")
        b.outcome("v5"), b.outcome("v6", bad=True)
        return b.document("load_and_shoot")
    if pid is ParadigmId.ROCK_THROWING:
        b.decision("v0", "j", [("not_throw", "v1"), ("throw", "v2")])
        b.decision("v1", "i", [("not_throw", "v5"), ("throw", "v6")], "yi")
        b.outcome("v5"), b.outcome("v6", bad=True)
        b.decision("v2", "i", [("not_throw", "v3"), ("throw", "v4")], "yi")
        b.outcome("v3", bad=True), b.outcome("v4", bad=True)
        return b.document("rock_throwing")
    if pid is ParadigmId.CHOOSE_PROBABILITIES:
        b.decision("v1", "i", [("choose_p", "vp"), ("choose_q", "vq")])
        b.probability("vp", [("v2", 1 - p), ("v3", p)])
        b.outcome("v2"), b.outcome("v3", bad=True)
        b.probability("vq", [("v4", 1 - q), ("v5", q)])
        b.outcome("v4"), b.outcome("v5", bad=True)
        return b.document("choose_probabilities")
    if pid is ParadigmId.HESITATION_I:
        b.decision("v1", "i", [("rescue", "v2"), ("hesitate", "v3")])
        b.outcome("v2")
        b.probability("v3", [("v4", p), ("v6", 1 - p)])
        b.decision("v4", "i", [("rescue", "v7"), ("pass", "v5")])
        b.outcome("v7"), b.outcome("v5", bad=True)
        b.outcome("v6", bad=True)
        return b.document("hesitation_1")
    if pid is ParadigmId.HESITATION_II:
        b.decision("v1", "i", [("rescue", "v2"), ("hesitate", "v3")])
        b.outcome("v2")
        b.decision("v3", "i", [("reconsider", "v4"), ("pass", "v5")])
        b.ambiguity("v4", ["v6", "v7"])
        b.outcome("v6"), b.outcome("v7", bad=True)
        b.outcome("v5", bad=True)
        return b.document("hesitation_2")
    if pid is ParadigmId.CLIMATE_NO_LEARNING:
        b.ambiguity("0", ["4", "5"])
        b.decision("4", "i", [("heat", "10"), ("abstain", "9")], "y45")
        b.outcome("10", bad=True), b.outcome("9")
        b.decision("5", "i", [("heat", "12"), ("abstain", "11")], "y45")
        b.outcome("12"), b.outcome("11", bad=True)
        return b.document("climate_no_learning", labels={"4": "warming", "5": "cooling"})
    if pid is ParadigmId.CLIMATE_WITH_LEARNING:
        b.ambiguity("0", ["1", "2"])
        b.decision("1", "i", [("learn", "3"), ("pass", "4")], "y12")
        b.decision("3", "i", [("abstain", "7"), ("heat", "8")])
        b.outcome("7"), b.outcome("8", bad=True)
        b.decision("4", "i", [("abstain", "9"), ("heat", "10")], "y45")
        b.outcome("9"), b.outcome("10", bad=True)
        b.decision("2", "i", [("learn", "6"), ("pass", "5")], "y12")
        b.decision("6", "i", [("abstain", "13"), ("heat", "14")])
        b.outcome("13", bad=True), b.outcome("14")
        b.decision("5", "i", [("abstain", "11"), ("heat", "12")], "y45")
        b.outcome("11", bad=True), b.outcome("12")
        return b.document("climate_with_learning", labels={"1": "warming", "2": "cooling"})
    if pid is ParadigmId.AMBIGUITY_AVERSION:
        b.decision("v1", "i", [("ambiguous", "va"), ("risky", "vp")])
        b.ambiguity("va", ["v2", "v3"])
        b.outcome("v2", bad=True), b.outcome("v3")
        b.probability("vp", [("v4", p), ("v5", 1 - p)])
        b.outcome("v4", bad=True), b.outcome("v5")
        return b.document("ambiguity_aversion")
    if pid is ParadigmId.IAT_DECISION:
        b.decision("v", "i", [("a", "va"), ("b", "w")])
        b.ambiguity("va", ["v1", "v2"])
        b.outcome("v1", bad=True), b.outcome("v2")
        b.outcome("w")
        return b.document("iat_decision", labels={"v1": "v'", "v2": "v''"})
    if pid is ParadigmId.IAT_PROBABILITY:
        b.probability("v", [("va", p), ("w", 1 - p)])
        b.ambiguity("va", ["v1", "v2"])
        b.outcome("v1", bad=True), b.outcome("v2")
        b.outcome("w")
        return b.document("iat_probability", labels={"v1": "v'", "v2": "v''"})
    # two choices each leading to an ambiguity between a bad and a good outcome
    b.decision("vd", "i", [("left", "va"), ("right", "vb")])
    b.ambiguity("va", ["va_bad", "va_good"])
    b.outcome("va_bad", bad=True), b.outcome("va_good")
    b.ambiguity("vb", ["vb_bad", "vb_good"])
    b.outcome("vb_bad", bad=True), b.outcome("vb_good")
    return b.document("ambiguity_pair")


# ---------------------------------------------------------------------------
# voting methods
# ---------------------------------------------------------------------------


class MethodId(str, Enum):
    TWO_OPTION_MAJORITY = "two-option-majority"
    MULTI_OPTION_MAJORITY = "multi-option-majority"
    APPROVAL = "approval"
    RANDOM_DICTATOR = "random-dictator"
    CONSENSUS_OR_RANDOM_DICTATOR = "consensus-random-dictator"
    POLL_THEN_MAJORITY = "poll-then-majority"
    AMENDMENT_THEN_MAJORITY = "amendment-then-majority"
    SIMPLE_RUNOFF = "simple-runoff"
    MEDIAN_EMISSIONS_CAP = "median-emissions-cap"


TWO_ROUND = frozenset({MethodId.POLL_THEN_MAJORITY, MethodId.AMENDMENT_THEN_MAJORITY, MethodId.SIMPLE_RUNOFF})


class KnifeEdgeError(ValueError):
    """Parameters sit on a knife's edge that the closed forms do not cover."""


@dataclass(frozen=True)
class VotingParams:
    """Voter counts and group ballots.

    ``u``, ``a``, ``b`` are the group's relevant vote counts (their meaning
    depends on the method); ``round`` selects the round for forward values of
    two-round methods; ``votes`` are the group's caps for median voting.
    """

    N: int
    m: int
    k: int = 2
    u: int = 0
    a: int = 0
    b: int = 0
    round: int = 1
    votes: tuple[str, ...] = ()
    cap_menu: tuple[str, ...] = ("c0", "mid", "c1")
    f: tuple[Fraction, ...] = (F(0), F(1, 2), F(1))

    def __post_init__(self):
        if self.N < 1 or self.N % 2 == 0:
            raise ValueError(f"N must be a positive odd number, got {self.N}")
        if not 1 <= self.m <= self.N:
            raise ValueError(f"group size must be in 1..N, got {self.m}")
        for name in ("u", "a", "b"):
            if not 0 <= getattr(self, name) <= self.m:
                raise ValueError(f"{name} must be in 0..m")
        if self.k < 2:
            raise ValueError("need at least two acceptable options")
        f = tuple(F(x) for x in self.f)
        object.__setattr__(self, "f", f)
        if len(f) != len(self.cap_menu) or len(f) < 2:
            raise ValueError("f needs one value per cap")
        if f[0] != 0 or f[-1] != 1 or any(x > y for x, y in zip(f, f[1:])):
            raise ValueError("f must be weakly increasing from 0 to 1")
        for c in self.votes:
            if c not in self.cap_menu:
                raise ValueError(f"unknown cap {c!r}")

    @property
    def m_other(self) -> int:
        return self.N - self.m


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative ints summing to ``total`` (lexicographic)."""
    for cut in itertools.combinations(range(total + parts - 1), parts - 1):
        prev, out = -1, []
        for c in cut:
            out.append(c - prev - 1)
            prev = c
        out.append(total + parts - 1 - prev - 1)
        yield tuple(out)


def _p_top(counts: Sequence[int]) -> Fraction:
    """Chance that option 0 wins when the winner is drawn among the most voted."""
    best = max(counts)
    tops = [i for i, c in enumerate(counts) if c == best]
    return F(1, len(tops)) if 0 in tops else F(0)


def _others(b: _Builder, node: str, infoset: str, choices: list[tuple[str, str]]) -> None:
    """Decision of the other voters, who do not observe the group's ballots of
    the current round (hence one information set across them)."""
    b.decision(node, OTHERS_AGENT, choices, infoset)


def _majority_round(b: _Builder, prefix: str, N: int, m: int, m_other: int,
                    others_set: str, root: str | None = None) -> str:
    """Two-option majority between U and one alternative, G first."""
    g = root or prefix + "g"
    b.decision(g, GROUP_AGENT, [(f"u{u}", f"{prefix}o_u{u}") for u in range(m + 1)])
    for u in range(m + 1):
        o = f"{prefix}o_u{u}"
        _others(b, o, others_set, [(f"v{v}", f"{prefix}x_u{u}_v{v}") for v in range(m_other + 1)])
        for v in range(m_other + 1):
            b.outcome(f"{prefix}x_u{u}_v{v}", bad=2 * (u + v) > N)
    return g


def _single_round_tree(b: _Builder, mine, theirs, label, leaf) -> None:
    """Group node over ``mine`` ballots, then the others' node over ``theirs``;
    ``leaf(node_id, c, d)`` adds the result subtree."""
    b.decision("g", GROUP_AGENT, [(label(c), "o_" + label(c)) for c in mine])
    for c in mine:
        o = "o_" + label(c)
        _others(b, o, "O_r1", [(label(d), f"x_{label(c)}__{label(d)}") for d in theirs])
        for d in theirs:
            leaf(f"x_{label(c)}__{label(d)}", c, d)


def build_voting_tree(method: MethodId | str, params: VotingParams) -> TreeDocument:
    """The tree of ``method`` for ``N`` voters of which ``m`` form the group."""
    method = MethodId(method)
    N, m, mo = params.N, params.m, params.m_other
    b = _Builder()
    name = f"{method.value}_N{N}_m{m}"

    if method is MethodId.TWO_OPTION_MAJORITY:
        _majority_round(b, "", N, m, mo, "O_r1")

    elif method is MethodId.RANDOM_DICTATOR:
        _single_round_tree(
            b, range(m + 1), range(mo + 1), lambda c: f"u{c}",
            lambda x, c, d: b.lottery(x, F(c + d, N)),
        )

    elif method is MethodId.MULTI_OPTION_MAJORITY:
        # ballot counts for U, A_1..A_k and abstention
        k = params.k
        _single_round_tree(
            b, list(_compositions(m, k + 2)), list(_compositions(mo, k + 2)),
            lambda c: "u%d_" % c[0] + "_".join("a%d" % x for x in c[1:-1]) + "_z%d" % c[-1],
            lambda x, c, d: b.lottery(x, _p_top([p + q for p, q in zip(c[:-1], d[:-1])])),
        )

    elif method is MethodId.APPROVAL:
        # approval counts for U, A_1..A_k
        k = params.k
        _single_round_tree(
            b, list(itertools.product(range(m + 1), repeat=k + 1)),
            list(itertools.product(range(mo + 1), repeat=k + 1)),
            lambda c: "u%d_" % c[0] + "_".join("a%d" % x for x in c[1:]),
            lambda x, c, d: b.lottery(x, _p_top([p + q for p, q in zip(c, d)])),
        )

    elif method is MethodId.CONSENSUS_OR_RANDOM_DICTATOR:
        # favourites only matter as "U or not"; consensus marks over U, A1, A2
        def options(n):
            return [(fav, cons) for fav in range(n + 1) for cons in _compositions(n, 3)]

        def leaf(x, c, d):
            total = [p + q for p, q in zip(c[1], d[1])]
            if N in total:
                b.outcome(x, bad=total[0] == N)
            else:
                b.lottery(x, F(c[0] + d[0], N))

        _single_round_tree(b, options(m), options(mo),
                           lambda c: "u%d_cu%d_c%d_c%d" % ((c[0],) + c[1]), leaf)

    elif method is MethodId.POLL_THEN_MAJORITY:
        def leaf(x, p, q):
            _majority_round(b, x + "_", N, m, mo, f"O_r2_q{q}", root=x)

        _single_round_tree(b, range(m + 1), range(mo + 1), lambda c: f"p{c}", leaf)

    elif method is MethodId.AMENDMENT_THEN_MAJORITY:
        # round 1: U against amendment A; round 2 (only if U survives): U against B
        def leaf(x, a, w):
            if 2 * (a + w) > N:
                b.outcome(x)
                return
            b.decision(x, GROUP_AGENT, [(f"b{y}", f"{x}_o_b{y}") for y in range(m + 1)])
            for y in range(m + 1):
                o = f"{x}_o_b{y}"
                _others(b, o, f"O_r2_a{w}", [(f"b{z}", f"{o}_y{z}") for z in range(mo + 1)])
                for z in range(mo + 1):
                    b.outcome(f"{o}_y{z}", bad=2 * (y + z) < N)

        _single_round_tree(b, range(m + 1), range(mo + 1), lambda c: f"a{c}", leaf)

    elif method is MethodId.SIMPLE_RUNOFF:
        def label(c):
            return f"u{c[0]}_a{c[1]}_b{c[2]}"

        def leaf(x, c, d):
            counts = [p + q for p, q in zip(c, d)]
            others_set = "O_r2_" + label(d)
            if max(counts) * 2 > N:
                b.outcome(x, bad=counts[0] * 2 > N)
                return
            low = min(counts)
            losers = [i for i, n in enumerate(counts) if n == low]
            if losers == [0]:
                b.outcome(x)
            elif 0 not in losers:
                _majority_round(b, x + "_", N, m, mo, others_set, root=x)
            else:
                share = F(1, len(losers))
                b.probability(x, [(x + "_out", share), (x + "_g", 1 - share)])
                b.outcome(x + "_out")
                _majority_round(b, x + "_", N, m, mo, others_set)

        _single_round_tree(b, list(_compositions(m, 3)), list(_compositions(mo, 3)), label, leaf)

    elif method is MethodId.MEDIAN_EMISSIONS_CAP:
        n = len(params.cap_menu)
        _single_round_tree(
            b, list(_compositions(m, n)), list(_compositions(mo, n)),
            lambda c: "_".join(f"n{x}" for x in c),
            lambda x, c, d: b.lottery(x, params.f[_median_index([p + q for p, q in zip(c, d)], N)]),
        )
    return b.document(name, root="g", agents=[GROUP_AGENT, OTHERS_AGENT])


def _median_index(counts: Sequence[int], N: int) -> int:
    """Menu position of the median of a ballot profile given as counts per cap."""
    need, seen = (N + 1) // 2, 0
    for i, c in enumerate(counts):
        seen += c
        if seen >= need:
            return i
    raise AssertionError("empty profile")  # pragma: no cover


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def _ind(cond: bool) -> Fraction:
    return F(1) if cond else F(0)


def _knife_edge(method: MethodId, p: VotingParams) -> bool:
    if method not in (MethodId.MULTI_OPTION_MAJORITY, MethodId.APPROVAL, MethodId.CONSENSUS_OR_RANDOM_DICTATOR):
        return False
    return abs(p.u - p.a) in (p.m_other, p.m - 1)


def _single_round(method: MethodId, variant: VariantId, direction: str, p: VotingParams) -> Fraction:
    N, m, mo, u, a = p.N, p.m, p.m_other, p.u, p.a
    half = F(N, 2)
    majority = _ind(m > half)
    if method is MethodId.TWO_OPTION_MAJORITY:
        if direction == "forward":
            return {"1": majority, "2": majority, "3": F(1), "4": F(1)}[variant.value]
        return {
            "0": _ind(u > half),
            "1": _ind(u > half),
            "2": _ind(u > m - half > 0),
            "3": _ind(u > max(m - half, 0)),
            "4": _ind(u > max(m - half, 0)),
        }[variant.value]
    if method is MethodId.MULTI_OPTION_MAJORITY:
        if direction == "forward":
            return {"1": majority, "2": majority, "3": F(1), "4": _ind(m >= half - 1)}[variant.value]
        return {
            "0": _ind(u > half),
            "1": _ind(u - a > mo),
            "2": _ind(a - u < mo < m),
            "3": _ind(a - u < min(mo, m - 1) or m < half - 1),
            "4": _ind(a - u < min(mo, m - 1)) * _ind(m >= half - 1),
        }[variant.value]
    if method is MethodId.APPROVAL:
        if direction == "forward":
            return {"1": majority, "2": majority, "3": F(1), "4": F(1)}[variant.value]
        return {
            "0": _ind(u > half),
            "1": _ind(u - a > mo),
            "2": _ind(a - u < mo < m),
            "3": _ind(a - u < min(mo, m - 1)),
            "4": _ind(a - u < min(mo, m - 1)),
        }[variant.value]
    if method is MethodId.RANDOM_DICTATOR:
        if direction == "forward":
            return F(m, N)
        return _ind(u == N) if variant is VariantId.V0 else F(u, N)
    if method is MethodId.CONSENSUS_OR_RANDOM_DICTATOR:
        if direction == "forward":
            return {"1": F(m, N), "2": F(m, N), "3": F(1), "4": F(m, N)}[variant.value]
        return {
            "0": _ind(u == N),
            "1": _ind(a < m) * F(u, N),
            "2": F(u, N),
            "3": F(u + mo, N),
            "4": F(u, N),
        }[variant.value]
    if method is MethodId.MEDIAN_EMISSIONS_CAP:
        if direction == "forward":
            return {"1": majority, "2": majority, "3": F(1), "4": F(1)}[variant.value]
        order = {c: i for i, c in enumerate(p.cap_menu)}
        votes = sorted(p.votes, key=order.__getitem__)
        if len(votes) != m:
            raise ValueError("median voting needs one cap per group member")

        def f_at(pos: int) -> Fraction:  # 1-based order statistic of G's votes
            return p.f[order[votes[pos - 1]]]

        pivot = m - (N - 1) // 2
        return {
            "0": majority * _ind(m > half and votes[pivot - 1] == p.cap_menu[-1]),
            "1": majority * (f_at(pivot) if m > half else F(0)),
            "2": majority * (f_at((N + 1) // 2) if m > half else F(0)),
            "3": f_at(min(m, (N + 1) // 2)),
            "4": f_at(min(m, (N + 1) // 2)),
        }[variant.value]
    raise ValueError(f"{method.value} is a two-round method")


def _round_values(method: MethodId, variant: VariantId, direction: str, p: VotingParams, rnd: int) -> Fraction:
    N, m = p.N, p.m
    half = F(N, 2)
    majority = _ind(m > half)
    if method is MethodId.POLL_THEN_MAJORITY:
        if rnd == 1:
            return F(0)
        return _single_round(MethodId.TWO_OPTION_MAJORITY, variant, direction, p)
    if method is MethodId.AMENDMENT_THEN_MAJORITY:
        if direction == "forward":
            if rnd == 1:
                return {"1": F(0), "2": F(0), "3": F(1), "4": F(1)}[variant.value]
            return {"1": majority, "2": majority, "3": F(1), "4": F(1)}[variant.value]
        a, b = p.a, p.b
        if rnd == 1:
            return {"0": F(0), "1": F(0), "2": F(0), "3": _ind(a < m < half), "4": _ind(a < m < half)}[variant.value]
        return {
            "0": _ind(b < m - half),
            "1": _ind(b < m - half),
            "2": _ind(b < half < m),
            "3": _ind(b < min(half, m)),
            "4": _ind(b < min(half, m)),
        }[variant.value]
    if method is MethodId.SIMPLE_RUNOFF:
        if direction == "forward":
            return {"1": majority, "2": majority, "3": F(1), "4": F(1)}[variant.value]
        if rnd == 1:
            ab = p.a + p.b
            return {
                "0": _ind(ab < half),
                "1": _ind(ab < half),
                "2": _ind(ab < half < m),
                "3": _ind(ab < max(m - F(N, 6), half)),
                "4": _ind(ab < max(m - F(N, 6), half)),
            }[variant.value]
        return _single_round(MethodId.TWO_OPTION_MAJORITY, variant, direction, p)
    raise ValueError(f"{method.value} is a single-round method")


def closed_form(method: MethodId | str, variant: VariantId | str, direction: str,
                params: VotingParams) -> Fraction | tuple[Fraction, Fraction]:
    """The tabulated value. Two-round methods give ``(round 1, round 2)``
    summands backward and the value for ``params.round`` forward."""
    method = MethodId(method)
    variant = VariantId.parse(variant)
    if variant is VariantId.NESS:
        raise ValueError("the table has no NESS column")
    if direction == "forward" and not variant.has_forward:
        raise ValueError(f"variant {variant.value} has no forward value")
    if direction not in ("forward", "backward"):
        raise ValueError(f"unknown direction {direction!r}")
    if direction == "backward" and _knife_edge(method, params):
        raise KnifeEdgeError(f"|u - a| = {abs(params.u - params.a)} is a knife's edge for m={params.m}, N={params.N}")
    if method in TWO_ROUND:
        if direction == "forward":
            return _round_values(method, variant, direction, params, params.round)
        return (
            _round_values(method, variant, direction, params, 1),
            _round_values(method, variant, direction, params, 2),
        )
    return _single_round(method, variant, direction, params)


# ---------------------------------------------------------------------------
# cross-check against tree evaluation
# ---------------------------------------------------------------------------

_NUM = re.compile(r"([a-z]+)(\d+)")


def _label_counts(label: str) -> list[tuple[str, int]]:
    return [(k, int(v)) for k, v in _NUM.findall(label)]


def _params_from_path(method: MethodId, N: int, m: int, k: int, labels: list[str],
                      base: VotingParams) -> VotingParams:
    """Translate the group's action labels along a history into table parameters."""
    first = _label_counts(labels[0])
    kw: dict = {}
    if method in (MethodId.TWO_OPTION_MAJORITY, MethodId.RANDOM_DICTATOR):
        kw["u"] = first[0][1]
    elif method in (MethodId.MULTI_OPTION_MAJORITY, MethodId.APPROVAL):
        kw["u"] = first[0][1]
        kw["a"] = max(v for key, v in first if key == "a")
    elif method is MethodId.CONSENSUS_OR_RANDOM_DICTATOR:
        kw["u"] = first[0][1]
        kw["a"] = max(v for key, v in first if key == "c")
    elif method is MethodId.POLL_THEN_MAJORITY:
        kw["u"] = _label_counts(labels[1])[0][1] if len(labels) > 1 else 0
    elif method is MethodId.AMENDMENT_THEN_MAJORITY:
        kw["a"] = first[0][1]
        kw["b"] = _label_counts(labels[1])[0][1] if len(labels) > 1 else m
    elif method is MethodId.SIMPLE_RUNOFF:
        d = dict(first)
        kw["a"], kw["b"] = d["a"], d["b"]
        kw["u"] = _label_counts(labels[1])[0][1] if len(labels) > 1 else 0
    elif method is MethodId.MEDIAN_EMISSIONS_CAP:
        counts = [v for _, v in first]
        kw["votes"] = tuple(c for c, n in zip(base.cap_menu, counts) for _ in range(n))
    return VotingParams(N, m, k, cap_menu=base.cap_menu, f=base.f, **kw)


@dataclass(frozen=True)
class Table2Row:
    method: MethodId
    variant: VariantId
    direction: str
    params: VotingParams
    node: str
    expected: Fraction
    computed: Fraction

    @property
    def match(self) -> bool:
        return self.expected == self.computed

    def describe(self) -> str:
        p = self.params
        detail = f"N={p.N} m={p.m} u={p.u} a={p.a} b={p.b}"
        if p.votes:
            detail += " votes=" + ",".join(p.votes)
        if self.direction == "forward" and self.method in TWO_ROUND:
            detail += f" round={p.round}"
        return (f"{self.method.value} v{self.variant.value} {self.direction} {detail} at {self.node}: "
                f"table {format_rational(self.expected)} tree {format_rational(self.computed)}")


@dataclass
class Table2Report:
    rows: list[Table2Row] = field(default_factory=list)
    skipped_knife_edge: int = 0
    skipped_tie: int = 0
    skipped_unparameterized: int = 0

    @property
    def mismatches(self) -> list[Table2Row]:
        return [r for r in self.rows if not r.match]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _group_history(tree: DecisionTree, v: str) -> list[tuple[str, str]]:
    out = []
    h = history(tree, v)
    for x, nxt in zip(h, h[1:]):
        k = tree.nodes[x]
        if isinstance(k, Decision) and k.agent == GROUP_AGENT:
            out.append((x, next(a for a, s in k.actions if s == nxt)))
    return out


def verify_table2(methods: Iterable[MethodId | str] | None = None,
                  variants: Iterable[VariantId | str] | None = None,
                  n_values: Iterable[int] = (3, 5),
                  base: VotingParams | None = None, tie_reachable: bool = True) -> Table2Report:
    """Evaluate every built voting tree and compare with :func:`closed_form`.

    Backward values are compared at every outcome where ``U`` was elected (the
    group's ballots are read off the history), forward values at every group
    decision node. With ``tie_reachable`` (the default) a ballot sequence is
    skipped when any scenario under it ends in a tie-breaking lottery, and a
    forward value when a tie lottery lies below the node; otherwise only
    outcomes actually decided by a tie lottery are skipped.
    """
    methods = [MethodId(x) for x in (methods or list(MethodId))]
    variants = [VariantId.parse(v) for v in (variants or ["0", "1", "2", "3", "4"])]
    variants = [v for v in variants if v is not VariantId.NESS]
    report = Table2Report()
    for method in methods:
        for N in n_values:
            for m in range(1, N + 1):
                proto = VotingParams(N, m, **({} if base is None else
                                              {"k": base.k, "cap_menu": base.cap_menu, "f": base.f}))
                doc = build_voting_tree(method, proto)
                _check_tree(method, doc, proto, variants, report, tie_reachable)
    return report


# methods whose probability nodes only ever resolve ties
_TIE_LOTTERIES = frozenset({MethodId.MULTI_OPTION_MAJORITY, MethodId.APPROVAL, MethodId.SIMPLE_RUNOFF})


def _check_tree(method, doc, proto, variants, report, tie_reachable) -> None:
    tree = doc.tree
    an = Analysis(tree, doc.event, {GROUP_AGENT})
    N, m, k = proto.N, proto.m, proto.k
    seen: set[tuple] = set()
    # the group's ballot sequences under which some scenario ends in a tie lottery
    tie_ballots: set[tuple] = set()
    tie_nodes: set[str] = set()
    if method in _TIE_LOTTERIES:
        for v in tree.outcomes:
            h = history(tree, v)
            if any(isinstance(tree.nodes[x], Probability) for x in h):
                tie_ballots.add(tuple(a for _, a in _group_history(tree, v)))
                tie_nodes.update(h)
    for v in tree.outcomes:
        if v not in doc.event:
            continue
        path = _group_history(tree, v)
        labels = [a for _, a in path]
        key = tuple(labels)
        if key in seen:
            continue
        if method is MethodId.CONSENSUS_OR_RANDOM_DICTATOR and _label_counts(labels[0])[1][1]:
            # consensus marks on U have no parameter in the closed form
            report.skipped_unparameterized += 1
            continue
        if method in _TIE_LOTTERIES and (
            any(key[:len(t)] == t for t in tie_ballots) if tie_reachable
            else any(isinstance(tree.nodes[x], Probability) for x in history(tree, v))
        ):
            report.skipped_tie += 1
            continue
        seen.add(key)
        params = _params_from_path(method, N, m, k, labels, proto)
        for variant in variants:
            try:
                expected = closed_form(method, variant, "backward", params)
            except KnifeEdgeError:
                report.skipped_knife_edge += 1
                continue
            if isinstance(expected, tuple):
                expected = sum(expected, F(0))
            computed = an.backward(variant, v).value
            report.rows.append(Table2Row(method, variant, "backward", params, v, expected, computed))
    for x in tree.decision_nodes:
        if tree.nodes[x].agent != GROUP_AGENT:
            continue
        if tie_reachable and x in tie_nodes:
            report.skipped_tie += 1
            continue
        depth = len(_group_history(tree, x)) + 1
        params = VotingParams(N, m, k, round=depth, cap_menu=proto.cap_menu, f=proto.f)
        for variant in variants:
            if not variant.has_forward:
                continue
            expected = closed_form(method, variant, "forward", params)
            computed = an.forward(variant, x).value
            report.rows.append(Table2Row(method, variant, "forward", params, x, expected, computed))
