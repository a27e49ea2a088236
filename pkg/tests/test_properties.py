"""Prospect normalization and summand nonnegativity across the test corpora.

Nonnegativity is asserted for trees whose information sets only join
siblings, which covers every bundled tree and every generator tree. Trees
with information sets across branches can break it; see the two frozen
cases in test_responsibility.py.
"""

import pytest
from hypothesis import given, settings

from oracle import oracle_trees
from respcalc.tree_io import corpus_names, load_bundled
from sweeps import nonnegativity, normalization
from trees import tree_documents

GENERATOR_TREES = list(oracle_trees(200, max_nodes=20, max_depth=4))


@pytest.mark.parametrize("name", corpus_names())
def test_bundled_prospects_are_normalized(name):
    t = normalization(load_bundled(name))
    assert t.failures == []


@pytest.mark.parametrize("name", corpus_names())
def test_bundled_summands_are_nonnegative(name):
    t = nonnegativity(load_bundled(name))
    assert t.failures == []


@pytest.mark.parametrize("index", range(0, 200, 50))
def test_generator_trees_satisfy_both_invariants(index):
    for doc in GENERATOR_TREES[index:index + 50]:
        assert normalization(doc).failures == []
        assert nonnegativity(doc).failures == []


@settings(derandomize=True, max_examples=150)
@given(tree_documents(max_nodes=14, max_depth=4, siblings_only=True))
def test_sibling_information_sets_keep_summands_nonnegative(doc):
    assert nonnegativity(doc).failures == []


@settings(derandomize=True, max_examples=150)
@given(tree_documents(max_nodes=14, max_depth=4))
def test_prospects_are_normalized_with_any_information_sets(doc):
    assert normalization(doc).failures == []
