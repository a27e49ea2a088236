"""Brute-force transcription of the responsibility definitions.

Deliberately naive: strategies and scenarios are full products over the
relevant information sets and uncertainty nodes, likelihoods are recomputed
from scratch for every pair, and nothing is cached. Only the raw node tables
of a tree are used, none of the library's traversal helpers.

Strategy and scenario products may assign nodes that end up unreachable.
That is harmless here: the likelihood only reads reachable choices, every
strategy (scenario) extends to at least one product element and every
product element restricts to a strategy (scenario), so all extrema agree.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from respcalc.tree_core import Ambiguity, Decision, Outcome, Probability

ZERO, ONE = Fraction(0), Fraction(1)


class Oracle:
    def __init__(self, tree, event, group):
        self.nodes = dict(tree.nodes)
        self.root = tree.root
        self.eps = frozenset(event)
        self.g = frozenset(group)
        self.parent = {}
        for v, k in self.nodes.items():
            for s in self._succ(v):
                self.parent[s] = v

    # -- raw structure -------------------------------------------------------
    def _succ(self, v):
        k = self.nodes[v]
        if isinstance(k, Decision):
            return [s for _, s in k.actions]
        if isinstance(k, Ambiguity):
            return list(k.successors)
        if isinstance(k, Probability):
            return [s for s, _ in k.branches]
        return []

    def key(self, v):
        k = self.nodes[v]
        return k.infoset if k.infoset is not None else "@" + v

    def mine(self, v):
        k = self.nodes[v]
        return isinstance(k, Decision) and k.agent in self.g

    def others(self, v):
        k = self.nodes[v]
        return isinstance(k, Ambiguity) or (isinstance(k, Decision) and k.agent not in self.g)

    def below(self, v):
        out = {v}
        for s in self._succ(v):
            out |= self.below(s)
        return out

    def history(self, v):
        out = [v]
        while out[-1] in self.parent:
            out.append(self.parent[out[-1]])
        return out[::-1]

    def equiv(self, v):
        # information equivalence counts only at the group's own decision nodes
        if not self.mine(v):
            return [v]
        return sorted(w for w in self.nodes if isinstance(self.nodes[w], Decision) and self.key(w) == self.key(v))

    def info_branch(self, v):
        out = set()
        for w in self.equiv(v):
            out |= self.below(w)
        return out

    def outcomes_below(self, v):
        return {w for w in self.below(v) if isinstance(self.nodes[w], Outcome)}

    # -- strategies and scenarios ---------------------------------------------
    def strategies(self, v):
        keys = {}
        for w in sorted(self.info_branch(v)):
            if self.mine(w):
                keys.setdefault(self.key(w), [a for a, _ in self.nodes[w].actions])
        names = sorted(keys)
        for combo in itertools.product(*(keys[n] for n in names)):
            yield dict(zip(names, combo))

    def scenarios(self, v, info_aware=True):
        for start in (self.equiv(v) if info_aware else [v]):
            region = sorted(self.below(start))
            axes = []
            for w in region:
                if isinstance(self.nodes[w], Ambiguity):
                    axes.append((("node", w), list(self.nodes[w].successors)))
            seen = {}
            for w in region:
                k = self.nodes[w]
                if isinstance(k, Decision) and k.agent not in self.g:
                    seen.setdefault(self.key(w), [a for a, _ in k.actions])
            axes.extend((("set", n), labels) for n, labels in sorted(seen.items()))
            for combo in itertools.product(*(opts for _, opts in axes)):
                yield start, {name: pick for (name, _), pick in zip(axes, combo)}

    def ell(self, v, sigma, zeta):
        k = self.nodes[v]
        if isinstance(k, Outcome):
            return ONE if v in self.eps else ZERO
        if isinstance(k, Probability):
            return sum((w * self.ell(s, sigma, zeta) for s, w in k.branches), ZERO)
        if isinstance(k, Ambiguity):
            return self.ell(zeta[("node", v)], sigma, zeta)
        label = sigma[self.key(v)] if self.mine(v) else zeta[("set", self.key(v))]
        return self.ell(dict(k.actions)[label], sigma, zeta)

    def child(self, v, a):
        return dict(self.nodes[v].actions)[a]

    # -- variant 1 -------------------------------------------------------------
    def gamma(self, v):
        return min(self.ell(s, sig, z) for sig in self.strategies(v) for s, z in self.scenarios(v, False))

    def d_gamma(self, v, a):
        return self.gamma(self.child(v, a)) - self.gamma(v)

    # -- variant 2 -------------------------------------------------------------
    def mu(self, v):
        return min(max(self.ell(s, sig, z) for s, z in self.scenarios(v)) for sig in self.strategies(v))

    def d_mu(self, v, a):
        return max(self.mu(self.child(w, a)) for w in self.equiv(v)) - self.mu(v)

    # -- variants 3 and 4 ------------------------------------------------------
    def omega(self, v, start, zeta):
        return min(self.ell(start, sig, zeta) for sig in self.strategies(v))

    def rho(self, v, a):
        best = None
        for s, z in self.scenarios(v):
            c = self.child(s, a)
            d = self.omega(c, c, z) - self.omega(v, s, z)
            best = d if best is None else max(best, d)
        return best

    def min_rho(self, v):
        return min(self.rho(v, a) for a, _ in self.nodes[v].actions)

    def influence(self, v):
        best = ZERO
        for s, z in self.scenarios(v):
            vals = [self.ell(s, sig, z) for sig in self.strategies(v)]
            best = max(best, max(vals) - min(vals))
        return best

    # -- benchmark and NESS ------------------------------------------------------
    def rb0(self, v_o):
        h = self.history(v_o)
        for p, v in zip(h, h[1:]):
            if self.mine(p) and self.outcomes_below(v) <= self.eps and not self.outcomes_below(p) <= self.eps:
                return ONE
        return ZERO

    def decisions(self, v_o):
        h = self.history(v_o)
        out = set()
        for v, nxt in zip(h, h[1:]):
            k = self.nodes[v]
            if isinstance(k, Decision):
                out.add((self.key(v), next(a for a, s in k.actions if s == nxt)))
        return out

    def ness(self, v_o):
        taken = sorted(self.decisions(v_o))
        outs = [w for w in self.nodes if isinstance(self.nodes[w], Outcome)]
        table = {w: self.decisions(w) for w in outs}

        def sufficient(ds):
            return all(w in self.eps for w in outs if set(ds) <= table[w])

        group_keys = {self.key(v) for v in self.nodes if self.mine(v)}
        for r in range(len(taken) + 1):
            for ds in itertools.combinations(taken, r):
                if not sufficient(ds):
                    continue
                for d in ds:
                    if d[0] in group_keys and not sufficient([e for e in ds if e != d]):
                        return ONE
        return ZERO

    # -- responsibility functions ------------------------------------------------
    def backward(self, variant, v_o):
        variant = str(variant)
        if variant == "0":
            return self.rb0(v_o)
        if variant == "ness":
            return self.ness(v_o)
        h = self.history(v_o)
        total = ZERO
        for v, nxt in zip(h, h[1:]):
            if not self.mine(v):
                continue
            a = next(lab for lab, s in self.nodes[v].actions if s == nxt)
            if variant == "1":
                total += self.d_gamma(v, a)
            elif variant == "2":
                total += self.d_mu(v, a)
            elif variant == "3":
                total += self.rho(v, a)
            else:
                total += self.rho(v, a) - self.min_rho(v)
        return total

    def forward(self, variant, v_d):
        variant = str(variant)
        labels = [a for a, _ in self.nodes[v_d].actions]
        if variant == "1":
            return max(self.d_gamma(v_d, a) for a in labels)
        if variant == "2":
            return max(self.d_mu(v_d, a) for a in labels)
        if variant == "3":
            return self.influence(v_d)
        return max(self.rho(v_d, a) for a in labels) - self.min_rho(v_d)


def oracle_trees(count: int = 200, max_nodes: int = 12, **config):
    """The first ``count`` generator trees (seeds 0, 1, ...) with at most ``max_nodes`` nodes."""
    from respcalc.axioms import GeneratorConfig, generate_random_tree

    seed = 0
    while count:
        doc = generate_random_tree(GeneratorConfig(seed=seed, **config))
        seed += 1
        if len(doc.tree.nodes) <= max_nodes:
            count -= 1
            yield doc


def compare_with_library(doc, max_group: int = 2):
    """Every backward and forward value on ``doc`` for every group of up to
    ``max_group`` agents. Returns the number of checks and the mismatches."""
    from respcalc.responsibility import Analysis

    tree, checks, bad = doc.tree, 0, []
    for r in range(1, max_group + 1):
        for g in itertools.combinations(sorted(tree.agents), r):
            lib, ref = Analysis(tree, doc.event, g), Oracle(tree, doc.event, g)
            for v in tree.outcomes:
                for var in ("0", "1", "2", "3", "4") + (("ness",) if v in doc.event else ()):
                    checks += 1
                    got, want = lib.backward(var, v).value, ref.backward(var, v)
                    if got != want:
                        bad.append(("backward", g, var, v, got, want))
            for v in tree.decision_nodes:
                if ref.mine(v):
                    for var in ("1", "2", "3", "4"):
                        checks += 1
                        got, want = lib.forward(var, v).value, ref.forward(var, v)
                        if got != want:
                            bad.append(("forward", g, var, v, got, want))
    return checks, bad
