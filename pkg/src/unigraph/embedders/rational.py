"""Embedding into the b-of-a expander-square product by random tree walks."""

from __future__ import annotations

import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from ..density import density
from ..graph import Graph
from ..hosts import UniversalHost, log2n
from ..matroid import part_count_for, partition_edges
from ..trees import forest_to_spanning_tree, pseudoforest_to_forest
from .common import Embedding, EmbeddingError, finalize_blowup_assignment, random_tree_hom

CHUNK = 512


def spanning_trees(h: Graph, a: int, b: int, D: int) -> list[Graph]:
    """``a`` spanning trees whose squares together cover every edge ``b`` times."""
    parts: list[Graph] = []
    if h.edge_count:
        parts = partition_edges(h, b, part_count_for(h, b)).part_graphs(h.n)
    if len(parts) > a:
        raise EmbeddingError(f"decomposition needs {len(parts)} parts, only {a} coordinates")
    parts += [Graph(h.n)] * (a - len(parts))
    return [forest_to_spanning_tree(pseudoforest_to_forest(p), max(D, 2)) for p in parts]


def _sparse(t: Graph) -> csr_matrix:
    e = np.array(t.edges, dtype=np.int64).reshape(-1, 2)
    return csr_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(t.n, t.n))


def auxiliary_graph(trees: list[Graph], radius: float) -> np.ndarray:
    """Boolean adjacency of pairs within tree distance ``radius`` in some tree."""
    n = trees[0].n
    near = np.zeros((n, n), dtype=bool)
    for t in trees:
        mat = _sparse(t)
        for lo in range(0, n, CHUNK):
            idx = np.arange(lo, min(n, lo + CHUNK))
            dist = dijkstra(mat, directed=False, indices=idx, unweighted=True, limit=radius)
            near[idx] |= dist <= radius
    np.fill_diagonal(near, False)
    return near


def equitable_classes(aux: np.ndarray, vertices: list[int], colours: int) -> list[int]:
    """Proper colouring of ``aux`` on ``vertices`` into ``colours`` classes, sizes balanced greedily.

    Returns a class index in ``1..colours`` per vertex of the graph (0 for
    vertices not coloured).
    """
    n = aux.shape[0]
    colour = np.zeros(n, dtype=np.int64)
    sizes = np.zeros(colours + 1, dtype=np.int64)
    sizes[0] = np.iinfo(np.int64).max
    for v in vertices:
        used = np.zeros(colours + 1, dtype=bool)
        used[colour[aux[v]]] = True
        used[0] = True
        free = np.flatnonzero(~used)
        c = int(free[np.argmin(sizes[free])])
        colour[v] = c
        sizes[c] += 1
    # balancing: move vertices from the largest class to the smallest when legal
    for _ in range(len(vertices)):
        big = int(np.argmax(sizes[1:])) + 1
        small = int(np.argmin(sizes[1:])) + 1
        if sizes[big] - sizes[small] <= 1:
            break
        movable = [v for v in np.flatnonzero(colour == big).tolist() if not (colour[aux[v]] == small).any()]
        if not movable:
            break
        colour[movable[0]] = small
        sizes[big] -= 1
        sizes[small] += 1
    return colour.tolist()


def phase_bound(n: int, a: int, i: int) -> float:
    """``max(2 n^((a-i)/a), 4 log2 n)``."""
    return max(2 * n ** ((a - i) / a), 4 * log2n(n))


def worst_bucket(keys: np.ndarray, classes: np.ndarray) -> tuple[int, int, int]:
    """Largest ``|S_v^j|`` over classes ``j >= 1``: ``(size, key, j)``."""
    sel = classes > 0
    if not sel.any():
        return 0, -1, -1
    pairs = np.stack([keys[sel], classes[sel]], axis=1)
    uniq, counts = np.unique(pairs, axis=0, return_counts=True)
    k = int(np.argmax(counts))
    return int(counts[k]), int(uniq[k, 0]), int(uniq[k, 1])


def phase_acceptable(keys: np.ndarray, classes: np.ndarray, bound: float) -> bool:
    return worst_bucket(keys, classes)[0] <= bound


def embed_rational(h: Graph, host: UniversalHost, seed=0, retry_cap: int = 50) -> Embedding:
    if host.family != "rational":
        raise ValueError(f"embed_rational needs a rational host, got {host.family}")
    n, a, b, m = host.n, host.dim, host.threshold, host.m
    g = host.expander
    if h.n > n:
        raise EmbeddingError(f"guest has {h.n} vertices, host is built for {n}")
    if h.n == 0:
        return Embedding((), host.descriptor_hash())
    if h.max_degree() > host.D:
        raise EmbeddingError(f"guest max degree {h.max_degree()} exceeds D={host.D}")
    if h.edge_count and density(h).density > host.density:
        raise EmbeddingError(f"guest density {density(h).density} exceeds {host.density}")

    trees = spanning_trees(h, a, b, host.D)
    root = 0
    aux = auxiliary_graph(trees, 16 * math.sqrt(log2n(n)))
    delta = int(aux.sum(axis=1).max())
    u0 = {root} | set(np.flatnonzero(aux[root]).tolist())
    rest = [v for v in range(h.n) if v not in u0]
    classes = np.array(equitable_classes(aux, rest, delta + 1), dtype=np.int64)

    table = g.neighbor_table()
    prefix = np.zeros(h.n, dtype=np.int64)
    phase_max = []
    phase_seeds = np.random.SeedSequence(seed).spawn(a)
    for i in range(1, a + 1):
        bound = phase_bound(n, a, i)
        draws = phase_seeds[i - 1].spawn(retry_cap)
        for attempt, child in enumerate(draws):
            rng = np.random.default_rng(child)
            start = int(rng.integers(m))
            img = np.array(random_tree_hom(trees[i - 1], root, start, g.graph, rng, table))
            keys = prefix * m + img
            size, key, j = worst_bucket(keys, classes)
            if size <= bound:
                break
        else:
            coords = tuple(int(c) for c in np.unravel_index(key, (m,) * i))
            raise EmbeddingError(
                f"phase {i}: {retry_cap} draws all broke the bucket bound {bound:.1f}; "
                f"last worst S_v^j has v={coords}, j={j}, size {size}"
            )
        prefix = keys
        phase_max.append(size)

    capacity = len(u0) + (delta + 1) * 4 * log2n(n)
    buckets: dict[int, list[int]] = {}
    for v in range(h.n):
        buckets.setdefault(int(prefix[v]), []).append(v)
    largest = max(len(s) for s in buckets.values())
    if largest > capacity:
        raise AssertionError(f"final class of size {largest} exceeds |U_0| + (D(A)+1) 4 log n")
    slots = finalize_blowup_assignment(buckets, host.blowup_size)
    mapping = tuple(int(prefix[v]) * host.blowup_size + slots[v] for v in range(h.n))
    return Embedding(mapping, host.descriptor_hash(), tuple(phase_max))
