import io
import math

import numpy as np
import pytest

from unigraph.embedders import (
    Embedding, EmbeddingError, embed, embed_integer, embed_rational, embed_unbounded,
    read_embedding, write_embedding,
)
from unigraph.embedders.common import finalize_blowup_assignment, random_tree_hom
from unigraph.embedders.integer import (
    bucket_cap, embed_tree_constrained, forbidden_images,
)
from unigraph.embedders.rational import phase_acceptable, phase_bound
from unigraph.embedders.unbounded import bucket_bound_holds
from unigraph.expander import make_expander
from unigraph.generators import gen_bounded_degree, gen_lift, gen_union_unicyclic
from unigraph.graph import Graph, complete_graph, disjoint_union, path_graph
from unigraph.hosts import build_integer, build_rational, build_unbounded
from unigraph.verify import verify_embedding


def star(k):
    return Graph(k + 1, [(0, i) for i in range(1, k + 1)])


@pytest.fixture(scope="module")
def unbounded512():
    return build_unbounded(512, 2)


@pytest.fixture(scope="module")
def integer2000():
    return build_integer(2000, 2, 4)


@pytest.fixture(scope="module")
def rational4096():
    return build_rational(4096, 3, 2, 3)


@pytest.fixture(scope="module")
def expander1000():
    return make_expander(1000, 16, 0)


def test_unbounded_edgeless(unbounded512):
    h = Graph(512)
    emb = embed_unbounded(h, unbounded512)
    assert verify_embedding(h, unbounded512, emb)


def test_unbounded_triangles(unbounded512):
    h = disjoint_union(*[complete_graph(3)] * (512 // 3))
    emb = embed_unbounded(h, unbounded512)
    assert verify_embedding(h, unbounded512, emb)
    for i, size in enumerate(emb.phase_max, start=1):
        assert bucket_bound_holds(size, 512, unbounded512.m, i)


@pytest.mark.parametrize("seed", range(5))
def test_unbounded_random_guests(unbounded512, seed):
    h = gen_union_unicyclic(512, 2, seed)
    emb = embed_unbounded(h, unbounded512)
    assert verify_embedding(h, unbounded512, emb)
    assert len(emb.phase_max) == 2


def test_unbounded_rejects_dense_guest(unbounded512):
    with pytest.raises(EmbeddingError, match="density"):
        embed_unbounded(complete_graph(7), unbounded512)


def test_bucket_bound_exact():
    assert bucket_bound_holds(512 // 64 + 19, 512, 8, 2)
    assert not bucket_bound_holds(512 // 64 + 20, 512, 8, 2)


def test_random_tree_hom_examples():
    g = complete_graph(6)
    assert random_tree_hom(Graph(1), 0, 4, g, 0) == [4]
    img = random_tree_hom(path_graph(3), 0, 2, g, 1)
    assert g.has_edge(img[0], img[1]) and g.has_edge(img[1], img[2])
    img = random_tree_hom(star(5), 0, 3, g, 2)
    assert img[0] == 3 and all(g.has_edge(3, x) for x in img[1:])


def test_random_tree_hom_far_vertex_is_nearly_uniform():
    exp = make_expander(64, 8, 1)
    length = 40
    tree = path_graph(length + 1)
    hits = np.zeros(exp.m, dtype=np.int64)
    samples = 4000
    table = exp.neighbor_table()
    for s in range(samples):
        hits[random_tree_hom(tree, 0, 0, exp.graph, s, table)[length]] += 1
    p = 1 / exp.m + 1 / 4096**3
    assert hits.max() / samples <= p + 3 * math.sqrt(p * (1 - p) / samples)


def test_tree_constrained_single_vertex(expander1000):
    full = np.ones(expander1000.m, dtype=bool)
    img = embed_tree_constrained(Graph(1), expander1000, [full])
    assert len(img) == 1 and 0 <= img[0] < 1000


def test_tree_constrained_path(expander1000):
    g = expander1000
    r = g.m // (4 * g.t)
    tree = path_graph(r)
    full = np.ones(g.m, dtype=bool)
    img = embed_tree_constrained(tree, g, [full] * r, seed=3)
    assert len(set(img)) == r
    assert all(g.graph.has_edge(img[u], img[v]) for u, v in tree.edges)


def test_tree_constrained_respects_sets(expander1000):
    g = expander1000
    rng = np.random.default_rng(4)
    tree = Graph(12, [(int(rng.integers(v)), v) for v in range(1, 12)])
    masks = [rng.random(g.m) < 0.7 for _ in range(12)]
    img = embed_tree_constrained(tree, g, masks, seed=1)
    assert all(masks[v][x] for v, x in enumerate(img))
    assert all(g.graph.has_edge(img[u], img[v]) for u, v in tree.edges)


def test_tree_constrained_preconditions(expander1000):
    g = expander1000
    small = np.zeros(g.m, dtype=bool)
    small[:100] = True
    with pytest.raises(ValueError, match="below"):
        embed_tree_constrained(Graph(1), g, [small])
    with pytest.raises(ValueError, match="m/\\(3t\\)"):
        embed_tree_constrained(path_graph(30), g, [np.ones(g.m, dtype=bool)] * 30)


def test_forbidden_images_follow_full_buckets():
    m, cap = 5, 2
    counts = np.zeros(m * m, dtype=np.int64)
    counts[1 * m + 3] = 2
    counts[1 * m + 4] = 1
    counts[2 * m + 0] = 2
    assert forbidden_images(counts, 1, m, cap).tolist() == [False, False, False, True, False]
    assert forbidden_images(counts, 2, m, cap).tolist() == [True, False, False, False, False]
    assert not forbidden_images(counts, 0, m, cap).any()


def test_bucket_cap():
    assert bucket_cap(2000, 2, 1) == 44
    assert bucket_cap(2000, 2, 2) == 1
    assert bucket_cap(4096, 3, 1) == 256


def test_integer_edgeless(integer2000):
    h = Graph(2000)
    assert verify_embedding(h, integer2000, embed_integer(h, integer2000))


@pytest.mark.parametrize("seed", range(2))
def test_integer_random_guest(integer2000, seed):
    h = gen_bounded_degree(2000, 2, 4, seed)
    emb = embed_integer(h, integer2000, seed=seed)
    assert verify_embedding(h, integer2000, emb)
    for i, size in enumerate(emb.phase_max, start=1):
        assert size <= bucket_cap(2000, 2, i)


def test_integer_rejects_high_degree(integer2000):
    with pytest.raises(EmbeddingError, match="degree"):
        embed_integer(star(6), integer2000)


def test_rational_edgeless(rational4096):
    h = Graph(4096)
    assert verify_embedding(h, rational4096, embed_rational(h, rational4096))


def test_rational_k4_lift(rational4096):
    h = gen_lift(complete_graph(4), 4096, 0)
    emb = embed_rational(h, rational4096, seed=0)
    assert verify_embedding(h, rational4096, emb)
    for i, size in enumerate(emb.phase_max, start=1):
        assert size <= phase_bound(4096, 3, i)


def test_phase_acceptance_predicate():
    keys = np.array([0, 0, 1, 1, 2, 2, 2])
    classes = np.array([1, 2, 1, 1, 1, 0, 0])
    assert phase_acceptable(keys, classes, 2)
    inflated = np.append(keys, [1, 1])
    assert not phase_acceptable(inflated, np.append(classes, [1, 1]), 2)
    # class 0 is U_0 and never counts
    assert phase_acceptable(np.append(keys, [3, 3, 3]), np.append(classes, [0, 0, 0]), 2)


def test_finalize_blowup_assignment():
    assert finalize_blowup_assignment({(0,): [7]}, 3) == {7: 0}
    assert finalize_blowup_assignment({(1,): [4, 5, 6]}, 3) == {4: 0, 5: 1, 6: 2}
    with pytest.raises(EmbeddingError, match=r"\(2,\)"):
        finalize_blowup_assignment({(2,): [1, 2, 3, 4]}, 3)


def test_dispatcher_and_file_roundtrip(unbounded512):
    h = gen_union_unicyclic(300, 2, 9)
    emb = embed(h, unbounded512)
    buf = io.StringIO()
    write_embedding(emb, buf)
    buf.seek(0)
    back = read_embedding(buf)
    assert back == emb and back.host_hash == unbounded512.descriptor_hash()
    with pytest.raises(ValueError, match="misses"):
        read_embedding(io.StringIO("2 abc\n0 1\n"))
