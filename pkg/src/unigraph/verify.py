"""Independent embedding check against the host edge rule."""

from __future__ import annotations

from .embedders.common import Embedding
from .graph import Graph
from .hosts import UniversalHost


def embedding_problems(h: Graph, host: UniversalHost, emb: Embedding, limit: int = 10) -> list[str]:
    """Human-readable reasons the embedding is invalid; empty when it is valid."""
    if len(emb.mapping) != h.n:
        raise ValueError(f"embedding covers {len(emb.mapping)} vertices, guest has {h.n}")
    for v, x in enumerate(emb.mapping):
        if not 0 <= x < host.vertex_count:
            raise ValueError(f"guest vertex {v} maps to {x}, outside [0, {host.vertex_count})")
    problems = []
    seen: dict[int, int] = {}
    for v, x in enumerate(emb.mapping):
        if x in seen:
            problems.append(f"guest vertices {seen[x]} and {v} share host vertex {x}")
        else:
            seen[x] = v
    for u, v in h.edges:
        if len(problems) >= limit:
            break
        if not host.has_edge(emb.mapping[u], emb.mapping[v]):
            problems.append(f"edge ({u}, {v}) maps to non-edge ({emb.mapping[u]}, {emb.mapping[v]})")
    return problems[:limit]


def verify_embedding(h: Graph, host: UniversalHost, emb: Embedding) -> bool:
    """True iff the map is injective and every guest edge lands on a host edge."""
    return not embedding_problems(h, host, emb, limit=1)
