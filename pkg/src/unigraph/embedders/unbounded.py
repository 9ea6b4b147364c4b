"""Embedding into the agreement-product host (no degree bound)."""

from __future__ import annotations

import numpy as np

from ..density import density
from ..discrepancy import assign_parts
from ..graph import Graph
from ..hosts import UniversalHost
from ..matroid import part_count_for, partition_edges
from ..trees import cleanup
from .common import Embedding, EmbeddingError, finalize_blowup_assignment


def bucket_bound_holds(size: int, n: int, m: int, i: int) -> bool:
    """``size <= n / m^i + 2m + 3``, in exact arithmetic."""
    return size * m**i <= n + (2 * m + 3) * m**i


def embed_unbounded(h: Graph, host: UniversalHost) -> Embedding:
    if host.family != "unbounded":
        raise ValueError(f"embed_unbounded needs an unbounded host, got {host.family}")
    n, d, m = host.n, host.dim, host.m
    if h.n > n:
        raise EmbeddingError(f"guest has {h.n} vertices, host is built for {n}")
    if h.n == 0:
        return Embedding((), host.descriptor_hash())
    if h.edge_count and density(h).density > d:
        raise EmbeddingError(f"guest density {density(h).density} exceeds d={d}")

    k = part_count_for(h, 1)
    parts = partition_edges(h, 1, k).part_graphs(h.n) if h.edge_count else []
    parts += [Graph(h.n)] * (d - len(parts))
    plan = cleanup(parts, threshold=m, cap=m)
    removed = sorted(plan.removed)
    if len(removed) > host.apex_size:
        raise EmbeddingError(f"{len(removed)} separator vertices exceed {host.apex_size} apexes")

    alive = np.ones(h.n, dtype=bool)
    alive[removed] = False
    prefix = np.zeros(h.n, dtype=np.int64)
    phase_max = []
    for i in range(1, d + 1):
        comps = plan.components(i - 1)
        vectors = []
        for comp in comps:
            vec: dict[int, int] = {}
            for v in comp:
                p = int(prefix[v])
                vec[p] = vec.get(p, 0) + 1
            vectors.append(vec)
        labels = assign_parts(vectors, m, m)
        for comp, lab in zip(comps, labels):
            for v in comp:
                prefix[v] = prefix[v] * m + lab
        biggest = int(np.bincount(prefix[alive], minlength=1).max()) if alive.any() else 0
        if not bucket_bound_holds(biggest, n, m, i):
            raise AssertionError(f"phase {i}: bucket of size {biggest} breaks n/m^i + 2m + 3")
        phase_max.append(biggest)

    buckets: dict[int, list[int]] = {}
    for v in np.flatnonzero(alive).tolist():
        buckets.setdefault(int(prefix[v]), []).append(v)
    slots = finalize_blowup_assignment(buckets, host.blowup_size)
    mapping = [0] * h.n
    for v, s in slots.items():
        mapping[v] = int(prefix[v]) * host.blowup_size + s
    for a, v in enumerate(removed):
        mapping[v] = host.apex_start + a
    return Embedding(tuple(mapping), host.descriptor_hash(), tuple(phase_max))
