"""Types and primitives shared by the three embedding engines."""

from __future__ import annotations

from collections import deque
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from ..graph import Graph


class EmbeddingError(RuntimeError):
    """The embedder could not produce an embedding for this guest."""


@dataclass(frozen=True)
class Embedding:
    """Host vertex id for every guest vertex, tagged with the host descriptor hash."""

    mapping: tuple[int, ...]
    host_hash: str
    phase_max: tuple[int, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.mapping)

    def __getitem__(self, h: int) -> int:
        return self.mapping[h]


def write_embedding(emb: Embedding, stream: TextIO) -> None:
    stream.write(f"{len(emb.mapping)} {emb.host_hash}\n")
    for h, g in enumerate(emb.mapping):
        stream.write(f"{h} {g}\n")


def read_embedding(stream: TextIO) -> Embedding:
    lines = [ln.strip() for ln in stream if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty embedding file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"bad embedding header {lines[0]!r}")
    n = int(head[0])
    mapping: list[int | None] = [None] * n
    for ln in lines[1:]:
        h, g = map(int, ln.split())
        if not 0 <= h < n:
            raise ValueError(f"guest vertex {h} out of range for n={n}")
        mapping[h] = g
    missing = [h for h, g in enumerate(mapping) if g is None]
    if missing:
        raise ValueError(f"embedding misses guest vertex {missing[0]}")
    return Embedding(tuple(mapping), head[1])


def finalize_blowup_assignment(
    buckets: Mapping[object, Sequence[int]], capacity: int
) -> dict[int, int]:
    """Slot ``0..len-1`` for the members of every bucket, in listed order."""
    slots = {}
    for key, members in buckets.items():
        if len(members) > capacity:
            raise EmbeddingError(
                f"bucket {key!r} holds {len(members)} vertices, capacity is {capacity}"
            )
        for s, h in enumerate(members):
            slots[h] = s
    return slots


def bfs_order(t: Graph, root: int) -> tuple[list[int], list[int]]:
    """Vertices of ``root``'s component in BFS order, with parents (-1 at the root)."""
    parent = [-2] * t.n
    parent[root] = -1
    order = [root]
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in t.neighbors(x):
            if parent[y] == -2:
                parent[y] = x
                order.append(y)
                queue.append(y)
    return order, parent


def neighbor_table(g: Graph) -> np.ndarray:
    degrees = {g.degree(v) for v in range(g.n)}
    if len(degrees) != 1:
        raise ValueError("neighbour tables need a regular graph")
    return np.array([g.neighbors(v) for v in range(g.n)], dtype=np.int64).reshape(g.n, -1)


def random_tree_hom(
    t: Graph, root: int, start: int, g: Graph, seed, table: np.ndarray | None = None
) -> list[int]:
    """Random homomorphism of the tree ``t`` into ``g`` with ``root -> start``.

    Each non-root vertex goes to a uniform random neighbour of its parent's
    image.  Vertices outside ``root``'s component are left at -1.
    """
    if not t.is_forest():
        raise ValueError("random_tree_hom needs a tree")
    rng = np.random.default_rng(seed)
    order, parent = bfs_order(t, root)
    img = np.full(t.n, -1, dtype=np.int64)
    img[root] = start
    if len(order) == 1:
        return img.tolist()
    if table is None and len({g.degree(v) for v in range(g.n)}) == 1:
        table = neighbor_table(g)
    if table is not None:
        # BFS levels: all vertices of a level draw at once
        depth = np.zeros(t.n, dtype=np.int64)
        for v in order[1:]:
            depth[v] = depth[parent[v]] + 1
        verts = np.array(order[1:], dtype=np.int64)
        pars = np.array([parent[v] for v in order[1:]], dtype=np.int64)
        levels = depth[verts]
        deg = table.shape[1]
        for lvl in range(1, int(levels.max()) + 1):
            sel = levels == lvl
            img[verts[sel]] = table[img[pars[sel]], rng.integers(deg, size=int(sel.sum()))]
        return img.tolist()
    for v in order[1:]:
        nb = g.neighbors(int(img[parent[v]]))
        img[v] = nb[int(rng.integers(len(nb)))]
    return img.tolist()
