"""The library against the brute-force oracle in ``oracle.py``."""

import pytest
from hypothesis import given

from oracle import compare_with_library, oracle_trees
from respcalc.scenarios import ParadigmId, build_paradigmatic
from trees import tree_documents

GENERATOR_TREES = list(oracle_trees(200, max_nodes=12, max_depth=3))


def test_generator_sample_is_large_enough():
    assert len(GENERATOR_TREES) == 200
    assert all(len(d.tree.nodes) <= 12 for d in GENERATOR_TREES)


@pytest.mark.parametrize("index", range(0, 200, 20))
def test_generator_trees_match_oracle(index):
    total = 0
    for doc in GENERATOR_TREES[index:index + 20]:
        checks, bad = compare_with_library(doc)
        total += checks
        assert bad == []
    assert total > 0


@pytest.mark.parametrize("pid", [p for p in ParadigmId if p is not ParadigmId.CLIMATE_WITH_LEARNING])
def test_example_trees_match_oracle(pid):
    _, bad = compare_with_library(build_paradigmatic(pid, p="1/3", q="2/3"))
    assert bad == []


@given(tree_documents(max_nodes=12))
def test_drawn_trees_with_arbitrary_information_sets_match_oracle(doc):
    _, bad = compare_with_library(doc)
    assert bad == []
