"""Text format for decision trees and a Graphviz DOT emitter.

Grammar::

    document   := "tree" STRING "{" agentsDecl? nodeDecl+ eventDecl? "}"
    agentsDecl := "agents" ":" IDENT ("," IDENT)* ";"
    nodeDecl   := "node" IDENT kind ";"?
    kind       := "decision" "agent" "=" IDENT ("infoset" "=" IDENT)?
                      "{" ("act" IDENT "->" IDENT ";")+ "}"
                | "ambiguity" "{" ("->" IDENT ";")+ "}"
                | "probability" "{" (RATIONAL "->" IDENT ";")+ "}"
                | "outcome" ("bad")?
    eventDecl  := "event" "{" IDENT ("," IDENT)* "}"

The first declared node is the root and ``#`` starts a comment.
"""

from __future__ import annotations

import re
from importlib import resources
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .tree_core import (
    Ambiguity,
    Decision,
    DecisionTree,
    Event,
    NodeId,
    Outcome,
    Probability,
    ValidationError,
)

__all__ = [
    "TreeDocument",
    "ParseError",
    "parse",
    "serialize",
    "emit_dot",
    "format_rational",
    "corpus_names",
    "load_bundled",
]

_IDENT = re.compile(r"[A-Za-z0-9_]+\Z")
_RATIONAL = re.compile(r"(\d+)/(\d+)\Z|\d+\.\d+\Z|\d+\Z")
_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<arrow>->)
  | (?P<punct>[{}:;,=])
  | (?P<word>[A-Za-z0-9_./]+)
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    """Syntax or validation problem, located by 1-based line and column."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class TreeDocument:
    tree: DecisionTree
    event: Event
    name: str = "tree"
    node_labels: Mapping[NodeId, str] | None = field(default=None, compare=False)

    def __post_init__(self):
        self.event.check(self.tree)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


def _unquote(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s[1:-1])


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, tok: _Tok | None = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text or t.kind == "string":
            found = "end of input" if t.kind == "eof" else repr(t.text)
            raise self.fail(f"expected {text!r}, found {found}", t)
        return t

    def accept(self, text: str) -> bool:
        t = self.peek()
        if t.text == text and t.kind != "string":
            self.i += 1
            return True
        return False

    def ident(self) -> _Tok:
        t = self.next()
        if t.kind != "word" or not _IDENT.match(t.text):
            raise self.fail(f"expected identifier, found {t.text or 'end of input'!r}", t)
        return t

    def rational(self) -> Fraction:
        t = self.next()
        if t.kind != "word" or not _RATIONAL.match(t.text):
            raise self.fail(f"expected probability, found {t.text or 'end of input'!r}", t)
        try:
            return Fraction(t.text)
        except ZeroDivisionError:
            raise self.fail("zero denominator", t) from None

    def document(self) -> TreeDocument:
        self.expect("tree")
        name_tok = self.next()
        if name_tok.kind != "string":
            raise self.fail("expected quoted tree name", name_tok)
        self.expect("{")

        agents: list[str] | None = None
        if self.accept("agents"):
            self.expect(":")
            agents = [self.ident().text]
            while self.accept(","):
                agents.append(self.ident().text)
            self.expect(";")

        nodes: list[tuple[str, object]] = []
        where: dict[str, _Tok] = {}
        refs: list[_Tok] = []
        bad: set[str] = set()
        while self.peek().text == "node" and self.peek().kind == "word":
            self.next()
            nid = self.ident()
            if nid.text in where:
                raise self.fail(f"duplicate node {nid.text!r}", nid)
            where[nid.text] = nid
            kind, succ, is_bad = self.kind()
            refs.extend(succ)
            if is_bad:
                bad.add(nid.text)
            nodes.append((nid.text, kind))
            self.accept(";")
        if not nodes:
            raise self.fail("expected at least one node declaration")

        event_toks: list[_Tok] | None = None
        if self.accept("event"):
            self.expect("{")
            event_toks = [self.ident()]
            while self.accept(","):
                event_toks.append(self.ident())
            self.expect("}")
        self.expect("}")
        if self.peek().kind != "eof":
            raise self.fail("trailing input after document")

        for r in refs:
            if r.text not in where:
                raise self.fail(f"reference to undeclared node {r.text!r}", r)
        if event_toks is not None:
            for t in event_toks:
                if t.text not in where:
                    raise self.fail(f"event names undeclared node {t.text!r}", t)
                if not isinstance(dict(nodes)[t.text], Outcome):
                    raise self.fail(f"event member {t.text!r} is not an outcome node", t)
            bad = {t.text for t in event_toks}

        try:
            tree = DecisionTree.build(nodes, root=nodes[0][0], agents=agents)  # type: ignore[arg-type]
        except ValidationError as exc:
            first = exc.violations[0]
            nid = first.split(":", 1)[0]
            tok = where.get(nid)
            raise ParseError(
                "invalid tree: " + "; ".join(exc.violations),
                tok.line if tok else 0,
                tok.col if tok else 0,
            ) from exc
        return TreeDocument(tree, Event(bad), _unquote(name_tok.text))

    def kind(self):
        t = self.next()
        if t.text == "decision":
            self.expect("agent")
            self.expect("=")
            agent = self.ident().text
            infoset = None
            if self.accept("infoset"):
                self.expect("=")
                infoset = self.ident().text
            self.expect("{")
            actions, succ = [], []
            while self.accept("act"):
                label = self.ident().text
                self.expect("->")
                s = self.ident()
                self.expect(";")
                actions.append((label, s.text))
                succ.append(s)
            if not actions:
                raise self.fail("decision node needs at least one action")
            self.expect("}")
            return Decision(agent, tuple(actions), infoset), succ, False
        if t.text == "ambiguity":
            self.expect("{")
            succ = []
            while self.accept("->"):
                succ.append(self.ident())
                self.expect(";")
            if not succ:
                raise self.fail("ambiguity node needs at least one successor")
            self.expect("}")
            return Ambiguity(tuple(s.text for s in succ)), succ, False
        if t.text == "probability":
            self.expect("{")
            branches, succ = [], []
            while self.peek().kind == "word" and self.peek().text != "}":
                w = self.rational()
                self.expect("->")
                s = self.ident()
                self.expect(";")
                branches.append((s.text, w))
                succ.append(s)
            if not branches:
                raise self.fail("probability node needs at least one branch")
            self.expect("}")
            return Probability(tuple(branches)), succ, False
        if t.text == "outcome":
            return Outcome(), [], self.accept("bad")
        raise self.fail(f"unknown node kind {t.text!r}", t)


def parse(text: str) -> TreeDocument:
    """Parse DSL text into a validated :class:`TreeDocument`."""
    return _Parser(text).document()


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def serialize(doc: TreeDocument) -> str:
    """Canonical text: agents sorted, nodes in preorder, events marked inline."""
    tree = doc.tree
    lines = [f"tree {_quote(doc.name)} {{"]
    if tree.agents:
        lines.append("  agents: " + ", ".join(sorted(tree.agents)) + ";")
    for v in tree.order:
        k = tree.nodes[v]
        if isinstance(k, Decision):
            head = f"  node {v} decision agent={k.agent}"
            if k.infoset is not None:
                head += f" infoset={k.infoset}"
            lines.append(head + " {")
            lines.extend(f"    act {a} -> {s};" for a, s in k.actions)
            lines.append("  }")
        elif isinstance(k, Ambiguity):
            lines.append(f"  node {v} ambiguity {{")
            lines.extend(f"    -> {s};" for s in k.successors)
            lines.append("  }")
        elif isinstance(k, Probability):
            lines.append(f"  node {v} probability {{")
            lines.extend(f"    {format_rational(w)} -> {s};" for s, w in k.branches)
            lines.append("  }")
        else:
            lines.append(f"  node {v} outcome" + (" bad" if v in doc.event else "") + ";")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_dot(doc: TreeDocument) -> str:
    """Graphviz rendering: diamonds for decision and ambiguity nodes, boxes
    for probability nodes, circles for outcomes (grey when undesired) and
    dashed undirected edges between information-equivalent nodes."""
    tree = doc.tree
    labels = doc.node_labels or {}
    out = [f"digraph {_quote(doc.name)} {{", "  node [fontname=\"Helvetica\"];"]
    for v in tree.order:
        k = tree.nodes[v]
        text = labels.get(v, v)
        if isinstance(k, Decision):
            attrs = f'shape=diamond, label={_quote(text + chr(10) + k.agent)}'
        elif isinstance(k, Ambiguity):
            attrs = f"shape=diamond, style=dotted, label={_quote(text)}"
        elif isinstance(k, Probability):
            attrs = f"shape=box, label={_quote(text)}"
        else:
            attrs = f"shape=circle, label={_quote(text)}"
            if v in doc.event:
                attrs += ', style=filled, fillcolor="grey"'
        out.append(f"  {_quote(v)} [{attrs}];")
    for v in tree.order:
        k = tree.nodes[v]
        if isinstance(k, Decision):
            edges = [(s, a) for a, s in k.actions]
        elif isinstance(k, Probability):
            edges = [(s, format_rational(w)) for s, w in k.branches]
        else:
            edges = [(s, None) for s in k.successors]
        for s, lab in edges:
            extra = f" [label={_quote(lab)}]" if lab is not None else ""
            out.append(f"  {_quote(v)} -> {_quote(s)}{extra};")
    for members in tree.infosets.values():
        for a, b in zip(members, members[1:]):
            out.append(f"  {_quote(a)} -> {_quote(b)} [style=dashed, dir=none, constraint=false];")
    out.append("}")
    return "\n".join(out) + "\n"


def _corpus_root():
    return resources.files("respcalc") / "corpus"


def corpus_names() -> list[str]:
    """Relative paths of every bundled ``.tree`` file, sorted."""
    out = []

    def walk(node, prefix):
        for child in node.iterdir():
            if child.is_dir():
                walk(child, prefix + child.name + "/")
            elif child.name.endswith(".tree"):
                out.append(prefix + child.name)

    walk(_corpus_root(), "")
    return sorted(out)


def load_bundled(name: str) -> TreeDocument:
    """Parse a bundled tree by relative path; the ``.tree`` suffix is optional."""
    if not name.endswith(".tree"):
        name += ".tree"
    node = _corpus_root()
    for part in name.split("/"):
        node = node / part
    if not node.is_file():
        raise FileNotFoundError(f"no bundled tree named {name!r}")
    return parse(node.read_text(encoding="utf-8"))
