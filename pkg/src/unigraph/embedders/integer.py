"""Embedding into the expander product host with an integer density bound."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..density import density
from ..expander import CertifiedExpander
from ..graph import Graph, induced
from ..hosts import UniversalHost
from ..matroid import part_count_for, partition_edges
from ..trees import cleanup, pseudoforest_to_forest
from .common import Embedding, EmbeddingError, bfs_order

DEFAULT_EPS = 0.5
DEFAULT_BETA = 0.75


class TreeEmbeddingError(EmbeddingError):
    pass


@dataclass
class SafeState:
    """Requests granted so far in the doubled bipartite graph ``V(G) x {1, 2}``.

    A request joins ``(v, 1)`` to ``(w, 2)`` for a ``G``-edge ``vw``; every
    side-2 vertex serves at most one request and side-1 loads stay within
    ``load_cap``.
    """

    load_cap: int
    edges: list[tuple[int, int]] = field(default_factory=list)
    loads: dict[int, int] = field(default_factory=dict)
    taken: set[int] = field(default_factory=set)

    def can_extend(self, v: int, w: int) -> bool:
        return w not in self.taken and self.loads.get(v, 0) < self.load_cap

    def extend(self, v: int, w: int) -> None:
        if not self.can_extend(v, w):
            raise AssertionError(f"request ({v}, {w}) is not a safe extension")
        self.edges.append((v, w))
        self.loads[v] = self.loads.get(v, 0) + 1
        self.taken.add(w)


def _filtration(
    order: list[int], children: list[list[int]], allowed: list[np.ndarray],
    table: np.ndarray, need: int,
) -> dict[int, np.ndarray]:
    """``A_v``: allowed images with at least ``need`` neighbours in ``A_c`` for every child ``c``."""
    sets: dict[int, np.ndarray] = {}
    for v in reversed(order):
        a = allowed[v].copy()
        for c in children[v]:
            a &= sets[c][table].sum(axis=1) >= need
        if not a.any():
            raise TreeEmbeddingError(
                f"filtration set of tree vertex {v} is empty "
                f"({len(children[v])} children, need {need} good neighbours)"
            )
        sets[v] = a
    return sets


def _match(kids: list[int], options: list[list[int]], rng: np.random.Generator) -> dict[int, int] | None:
    """Distinct image for every child (Kuhn's augmenting paths); ``None`` if impossible."""
    owner: dict[int, int] = {}

    def augment(k: int, seen: set[int]) -> bool:
        for w in options[k]:
            if w in seen:
                continue
            seen.add(w)
            if w not in owner or augment(owner[w], seen):
                owner[w] = k
                return True
        return False

    for k in range(len(kids)):
        rng.shuffle(options[k])
        if not augment(k, set()):
            return None
    return {kids[k]: w for w, k in owner.items()}


def embed_tree_constrained(
    tree: Graph,
    g: CertifiedExpander,
    allowed: list[np.ndarray] | list[set[int]],
    eps: float = DEFAULT_EPS,
    beta: float = DEFAULT_BETA,
    seed=0,
    attempts: int = 8,
) -> list[int]:
    """Injective ``phi`` with tree edges on ``G``-edges and ``phi(v)`` allowed for ``v``.

    ``allowed[v]`` is a boolean mask over ``V(G)`` (or a vertex set).
    """
    m, t = g.m, g.t
    r = tree.n
    if r == 0:
        return []
    if r > m / (3 * t):
        raise ValueError(f"tree has {r} vertices, above m/(3t) = {m / (3 * t):.2f}")
    if not tree.is_forest() or len(tree.components()) != 1:
        raise ValueError("embed_tree_constrained needs a tree")
    masks = []
    for v, s in enumerate(allowed):
        if not isinstance(s, np.ndarray):
            mask = np.zeros(m, dtype=bool)
            mask[list(s)] = True
            s = mask
        if s.sum() < (1 - eps) * m:
            raise ValueError(f"tree vertex {v} may use {int(s.sum())} of {m} vertices, below (1-eps)m")
        masks.append(s)
    table = g.neighbor_table()
    need = max(1, math.ceil((1 - beta) * t))
    load_cap = max(1, math.floor(2 * beta * t))
    rng = np.random.default_rng(seed)
    roots = [0] + rng.permutation(np.arange(1, r)).tolist()
    last_error = None
    for root in roots[:attempts]:
        order, parent = bfs_order(tree, root)
        children: list[list[int]] = [[] for _ in range(r)]
        for v in order[1:]:
            children[parent[v]].append(v)
        try:
            sets = _filtration(order, children, masks, table, need)
        except TreeEmbeddingError as exc:
            last_error = exc
            continue
        img = [-1] * r
        state = SafeState(load_cap)
        start = np.flatnonzero(sets[root])
        img[root] = int(start[rng.integers(start.size)])
        state.taken.add(img[root])  # the root's own side-2 copy is never a target
        ok = True
        for v in order:
            kids = children[v]
            if not kids:
                continue
            if len(kids) > load_cap:
                raise TreeEmbeddingError(f"vertex {v} has {len(kids)} children, load cap {load_cap}")
            options = [
                [int(w) for w in table[img[v]] if sets[c][w] and w not in state.taken]
                for c in kids
            ]
            chosen = _match(kids, options, rng)
            if chosen is None:
                ok = False
                last_error = TreeEmbeddingError(f"no safe extension below tree vertex {v}")
                break
            for c in kids:
                state.extend(img[v], chosen[c])
                img[c] = chosen[c]
        if ok:
            return img
    raise last_error or TreeEmbeddingError("tree embedding failed")


def bucket_cap(n: int, d: int, i: int) -> int:
    """``floor(n^((d-i)/d))`` in exact integer arithmetic."""
    target = n ** (d - i)
    c = int(round(target ** (1 / d)))
    while c**d > target:
        c -= 1
    while (c + 1) ** d <= target:
        c += 1
    return c


def forbidden_images(counts: np.ndarray, prefix: int, m: int, cap: int) -> np.ndarray:
    """Mask of ``v`` whose bucket ``(prefix, v)`` is already full."""
    return counts[prefix * m:(prefix + 1) * m] >= cap


def embed_integer(
    h: Graph, host: UniversalHost, seed=0, retries: int = 5,
    eps: float = DEFAULT_EPS, beta: float = DEFAULT_BETA,
) -> Embedding:
    if host.family != "integer":
        raise ValueError(f"embed_integer needs an integer host, got {host.family}")
    n, d, m = host.n, host.dim, host.m
    g = host.expander
    if h.n > n:
        raise EmbeddingError(f"guest has {h.n} vertices, host is built for {n}")
    if h.n == 0:
        return Embedding((), host.descriptor_hash())
    if h.max_degree() > host.D:
        raise EmbeddingError(f"guest max degree {h.max_degree()} exceeds D={host.D}")
    if h.edge_count and density(h).density > d:
        raise EmbeddingError(f"guest density {density(h).density} exceeds d={d}")
    cap_size = m // (3 * g.t)
    if cap_size < 1:
        raise EmbeddingError(f"m={m} is too small for trees of size m/(3t) with t={g.t}")

    k = part_count_for(h, 1)
    parts = partition_edges(h, 1, k).part_graphs(h.n) if h.edge_count else []
    parts += [Graph(h.n)] * (d - len(parts))
    plan = cleanup(parts, threshold=cap_size + 1, cap=cap_size)
    removed = sorted(plan.removed)
    if len(removed) > host.apex_size:
        raise EmbeddingError(f"{len(removed)} separator vertices exceed {host.apex_size} apexes")

    seeds = np.random.SeedSequence(seed).spawn(retries)
    last = None
    for child in seeds:
        try:
            prefix, phase_max = _phases(h, plan, host, np.random.default_rng(child), eps, beta)
        except TreeEmbeddingError as exc:
            last = exc
            continue
        mapping = [0] * h.n
        alive = [v for v in range(h.n) if v not in plan.removed]
        for v in alive:
            mapping[v] = int(prefix[v])
        for a, v in enumerate(removed):
            mapping[v] = host.apex_start + a
        return Embedding(tuple(mapping), host.descriptor_hash(), phase_max)
    raise EmbeddingError(f"tree embedding failed after {retries} attempts: {last}")


def _phases(h, plan, host, rng, eps, beta):
    n, d, m = host.n, host.dim, host.m
    g = host.expander
    prefix = np.zeros(h.n, dtype=np.int64)
    alive = np.ones(h.n, dtype=bool)
    alive[sorted(plan.removed)] = False
    phase_max = []
    for i in range(1, d + 1):
        cap = bucket_cap(n, d, i)
        counts = np.zeros(m**i, dtype=np.int64)
        residual = plan.residual_parts[i - 1]
        comps = sorted(plan.components(i - 1), key=len, reverse=True)
        new_prefix = prefix.copy()
        for comp in comps:
            tree = pseudoforest_to_forest(induced(residual, comp))
            allowed = [~forbidden_images(counts, int(prefix[v]), m, cap) for v in comp]
            img = embed_tree_constrained(
                tree, g, allowed, eps, beta, seed=int(rng.integers(2**32)))
            for v, x in zip(comp, img):
                key = int(prefix[v]) * m + x
                counts[key] += 1
                new_prefix[v] = key
        prefix = new_prefix
        biggest = int(counts.max()) if alive.any() else 0
        if biggest > cap:
            raise AssertionError(f"phase {i}: bucket of size {biggest} exceeds n^((d-i)/d) = {cap}")
        phase_max.append(biggest)
    return prefix, tuple(phase_max)
