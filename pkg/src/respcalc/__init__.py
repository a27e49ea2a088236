"""Quantitative responsibility of agent groups in multi-agent decision trees.

The usual entry points::

    from respcalc import load_bundled, backward, forward

    doc = load_bundled("load_and_shoot")
    backward("3", doc.tree, doc.event, {"i"}, "v6")   # Fraction(1, 1)
"""

from .responsibility import VariantId, analysis, backward, evaluate, forward
from .tree_core import (
    Ambiguity,
    Decision,
    DecisionTree,
    Event,
    Group,
    Outcome,
    Probability,
    TreeError,
    ValidationError,
)
from .tree_io import ParseError, TreeDocument, corpus_names, emit_dot, load_bundled, parse, serialize

__all__ = [
    "Ambiguity",
    "Decision",
    "DecisionTree",
    "Event",
    "Group",
    "Outcome",
    "ParseError",
    "Probability",
    "TreeDocument",
    "TreeError",
    "ValidationError",
    "VariantId",
    "analysis",
    "backward",
    "corpus_names",
    "emit_dot",
    "evaluate",
    "forward",
    "load_bundled",
    "parse",
    "serialize",
]
