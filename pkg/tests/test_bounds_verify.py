import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from unigraph.bounds import check_counting_inequality, lower_bound
from unigraph.embedders import Embedding
from unigraph.graph import Graph, complete_graph, cycle_graph, disjoint_union
from unigraph.hosts import ProductVertex, build_unbounded
from unigraph.verify import embedding_problems, verify_embedding

K4 = complete_graph(4)
TRIANGLE = complete_graph(3)


def test_lower_bound_k4():
    rep = lower_bound(K4, 10**6)
    assert rep.m_F == Fraction(3, 2)
    assert rep.bound_exact == Fraction(10**8, 36)
    assert rep.alpha == Fraction(1, 36) and rep.max_degree == 4


@pytest.mark.parametrize("n", [3, 30, 300, 3 * 7**5])
def test_lower_bound_triangle(n):
    rep = lower_bound(TRIANGLE, n)
    assert rep.bound_exact == Fraction(n, 27)


def test_lower_bound_rejections():
    with pytest.raises(ValueError, match="not balanced"):
        lower_bound(disjoint_union(TRIANGLE, Graph(1)), 8)
    with pytest.raises(ValueError, match="divisible"):
        lower_bound(K4, 10)


@pytest.mark.parametrize("f", [TRIANGLE, K4, cycle_graph(5)])
def test_lower_bound_doubling(f):
    n = f.n * 1000
    ratio = lower_bound(f, 2 * n).bound / lower_bound(f, n).bound
    assert ratio == pytest.approx(2 ** (2 - 1 / float(lower_bound(f, n).m_F)), rel=1e-12)


def test_counting_inequality_k4():
    n = 10**4
    b = lower_bound(K4, n).bound
    assert check_counting_inequality(K4, n, int(b / 2)).sufficient is False
    assert check_counting_inequality(K4, n, math.ceil(b) - 1).sufficient is False
    assert check_counting_inequality(K4, n, n * n).sufficient is True


@pytest.mark.parametrize("f,n", [(TRIANGLE, 300), (TRIANGLE, 3000), (K4, 400), (K4, 4000), (cycle_graph(5), 500)])
def test_insufficient_just_below_bound(f, n):
    b = lower_bound(f, n).bound
    assert check_counting_inequality(f, n, math.ceil(b) - 1).sufficient is False


@given(st.integers(1, 10**7), st.integers(1, 10**7))
def test_lhs_monotone(m1, m2):
    lo, hi = sorted((m1, m2))
    a = check_counting_inequality(K4, 400, lo).counting_lhs_log
    b = check_counting_inequality(K4, 400, hi).counting_lhs_log
    assert a <= b


def test_verify_identity_into_host_containing_guest():
    host = build_unbounded(256, 2)
    # one blowup class is a clique of size 3m+3
    h = complete_graph(host.blowup_size)
    emb = Embedding(tuple(range(h.n)), host.descriptor_hash())
    assert verify_embedding(h, host, emb)


def test_verify_rejects_collisions_and_non_edges():
    host = build_unbounded(256, 2)
    h = Graph(2, [(0, 1)])
    assert not verify_embedding(h, host, Embedding((5, 5), ""))
    far = host.encode(ProductVertex((1, 1), 0))
    assert not verify_embedding(h, host, Embedding((0, far), ""))
    assert "non-edge" in embedding_problems(h, host, Embedding((0, far), ""))[0]


def test_verify_input_errors():
    host = build_unbounded(256, 2)
    h = Graph(2, [(0, 1)])
    with pytest.raises(ValueError, match="covers 1"):
        verify_embedding(h, host, Embedding((0,), ""))
    with pytest.raises(ValueError, match="outside"):
        verify_embedding(h, host, Embedding((0, host.vertex_count), ""))
