"""Embedding engines, one per host family."""

from __future__ import annotations

from ..graph import Graph
from ..hosts import UniversalHost
from .common import Embedding, EmbeddingError, read_embedding, write_embedding
from .integer import embed_integer
from .rational import embed_rational
from .unbounded import embed_unbounded


def embed(h: Graph, host: UniversalHost, seed=0, retries: int | None = None) -> Embedding:
    """Run the embedder matching ``host.family``.

    ``retries`` is the whole-run retry count for integer hosts and the
    per-phase retry cap for rational hosts; the unbounded embedder is
    deterministic and ignores both.
    """
    if host.family == "unbounded":
        return embed_unbounded(h, host)
    if host.family == "integer":
        return embed_integer(h, host, seed=seed, retries=retries or 5)
    if host.family == "rational":
        return embed_rational(h, host, seed=seed, retry_cap=retries or 50)
    raise ValueError(f"unknown host family {host.family!r}")


__all__ = [
    "Embedding", "EmbeddingError", "embed", "embed_integer", "embed_rational",
    "embed_unbounded", "read_embedding", "write_embedding",
]
