import io
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from unigraph.density import density
from unigraph.graph import Graph, complete_graph, cycle_graph, disjoint_union
from unigraph.matroid import (
    bicircular_independent, decompose, multiply_edges, read_decomposition, write_decomposition,
)

from oracles import random_graph
from strategies import graphs


def check_decomposition(h: Graph, b: int):
    dec = decompose(h, b)
    assert dec.k == math.ceil(b * density(h).density)
    assert set(dec.assignment) == set(multiply_edges(h, b))
    per_edge = Counter((u, v) for (u, v, _c) in dec.assignment)
    assert all(per_edge[e] == b for e in h.edges)
    for i in range(dec.k):
        assert bicircular_independent(dec.part_edges(i), h.n)
    return dec


def test_independence_examples():
    two_triangles = disjoint_union(complete_graph(3), complete_graph(3))
    assert bicircular_independent([(u, v, 1) for u, v in two_triangles.edges], 6)
    theta = [(0, 2, 1), (2, 1, 1), (0, 3, 1), (3, 1, 1), (0, 4, 1), (4, 1, 1)]
    assert not bicircular_independent(theta, 5)
    assert not bicircular_independent([(0, 1, 1), (0, 1, 2)], 2)


def test_decompose_examples():
    dec = check_decomposition(complete_graph(3), 1)
    assert dec.k == 1
    dec = check_decomposition(complete_graph(4), 1)
    assert dec.k == 2 and sorted(len(dec.part_edges(i)) for i in range(2)) == [3, 3]
    assert check_decomposition(complete_graph(4), 2).k == 3


def test_decompose_rejects_sparse():
    with pytest.raises(ValueError, match="m\\(H\\) >= 1"):
        decompose(Graph(3, [(0, 1)]), 1)


@given(graphs(max_n=9, min_n=3), st.integers(1, 3))
def test_decomposition_contract(g, b):
    if g.edge_count and density(g).density >= 1:
        check_decomposition(g, b)


@pytest.mark.parametrize("seed", range(4))
def test_decomposition_on_random_graphs(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(45, 0.12 + 0.05 * seed, rng)
    for b in (1, 2, 3):
        check_decomposition(g, b)


def test_decomposition_is_deterministic():
    g = random_graph(30, 0.2, np.random.default_rng(7))
    assert decompose(g, 2) == decompose(g, 2)


def test_decomposition_file_roundtrip():
    dec = decompose(cycle_graph(6), 2)
    buf = io.StringIO()
    write_decomposition(dec, buf)
    buf.seek(0)
    assert read_decomposition(buf) == dec
