"""Sparse universal graphs for bounded-density families, with embedders and a verifier."""

from .bounds import check_counting_inequality, lower_bound
from .density import density, is_balanced
from .embedders import Embedding, EmbeddingError, embed
from .graph import Graph, GraphError
from .hosts import ConstructionParams, UniversalHost, build_host, load_host, save_host
from .verify import verify_embedding

__version__ = "0.1.0"

__all__ = [
    "ConstructionParams", "Embedding", "EmbeddingError", "Graph", "GraphError", "UniversalHost",
    "build_host", "check_counting_inequality", "density", "embed", "is_balanced", "load_host",
    "lower_bound", "save_host", "verify_embedding",
]
