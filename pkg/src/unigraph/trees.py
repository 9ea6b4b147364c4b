"""Tree and forest surgery shared by the embedders."""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .graph import Graph, GraphError


def _component_edges(g: Graph, comp: Sequence[int]) -> int:
    return sum(g.degree(v) for v in comp) // 2


def cycle_vertices(g: Graph, comp: Sequence[int]) -> list[int]:
    """Vertices of the 2-core of a component (its cycle when unicyclic)."""
    inside = set(comp)
    deg = {v: g.degree(v) for v in comp}
    stack = [v for v in comp if deg[v] <= 1]
    removed = set()
    while stack:
        v = stack.pop()
        if v in removed:
            continue
        removed.add(v)
        for w in g.neighbors(v):
            if w in inside and w not in removed:
                deg[w] -= 1
                if deg[w] == 1:
                    stack.append(w)
    return sorted(v for v in comp if v not in removed)


def _ordered_cycle(g: Graph, comp: Sequence[int]) -> list[int]:
    core = set(cycle_vertices(g, comp))
    if not core:
        return []
    start = min(core)
    cyc = [start]
    prev, cur = start, min(w for w in g.neighbors(start) if w in core)
    while cur != start:
        cyc.append(cur)
        nxt = [w for w in g.neighbors(cur) if w in core and w != prev]
        prev, cur = cur, nxt[0]
    return cyc


def cycle_hitting_set(parts: Sequence[Graph], size_threshold: int) -> set[int]:
    """One cycle vertex (the smallest) from every cyclic component of size >= threshold."""
    chosen: set[int] = set()
    for p, g in enumerate(parts):
        for comp in g.components():
            e = _component_edges(g, comp)
            if e > len(comp):
                raise GraphError(
                    f"part {p}: component of vertex {comp[0]} has {e} edges on "
                    f"{len(comp)} vertices, more than one cycle"
                )
            if e == len(comp) and len(comp) >= size_threshold:
                chosen.add(cycle_vertices(g, comp)[0])
    return chosen


def split_forest_to_size(f: Graph, cap: int) -> set[int]:
    """Cut set ``R`` leaving components of at most ``cap`` vertices.

    Each tree is rooted at its smallest vertex and processed in post-order; a
    vertex is cut once its pending subtree weight exceeds ``cap``.  Every cut
    accounts for more than ``cap`` vertices, so ``|R| <= v(F) / (cap + 1)``.
    """
    if cap < 1:
        raise ValueError(f"component cap must be >= 1, got {cap}")
    if not f.is_forest():
        raise GraphError("split_forest needs an acyclic graph")
    cut: set[int] = set()
    pending = [0] * f.n
    seen = [False] * f.n
    for root in range(f.n):
        if seen[root]:
            continue
        seen[root] = True
        order = [root]
        parent = {root: -1}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in f.neighbors(x):
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    order.append(y)
                    stack.append(y)
        for x in reversed(order):
            pending[x] += 1
            if pending[x] > cap:
                cut.add(x)
                pending[x] = 0
            elif parent[x] != -1:
                pending[parent[x]] += pending[x]
    return cut


def split_forest(f: Graph, r: int) -> set[int]:
    """At most ``r`` vertices whose removal leaves components of size <= ceil(v(F)/r)."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if f.n == 0:
        if not f.is_forest():
            raise GraphError("split_forest needs an acyclic graph")
        return set()
    return split_forest_to_size(f, math.ceil(f.n / r))


def remove_vertices(g: Graph, removed: Iterable[int]) -> Graph:
    """Same vertex ids, with every edge touching ``removed`` dropped."""
    gone = set(removed)
    return Graph(g.n, [(u, v) for u, v in g.edges if u not in gone and v not in gone])


@dataclass(frozen=True)
class CleanupPlan:
    removed: frozenset[int]
    residual_parts: tuple[Graph, ...]

    def components(self, part: int) -> list[list[int]]:
        """Components of a residual part, removed vertices excluded."""
        return [
            c for c in self.residual_parts[part].components()
            if len(c) > 1 or c[0] not in self.removed
        ]


def cleanup(parts: Sequence[Graph], threshold: int, cap: int) -> CleanupPlan:
    """Break every part into components of at most ``cap`` vertices.

    Cyclic components with at least ``threshold`` vertices lose one cycle
    vertex; the forest formed by the large components is then cut to ``cap``.
    Components below ``threshold`` pass through unchanged, so ``threshold``
    must not exceed ``cap + 1``.
    """
    if threshold > cap + 1:
        raise ValueError("small components above the cap would survive cleanup")
    hit = cycle_hitting_set(parts, threshold)
    removed = set(hit)
    for g in parts:
        big = [c for c in g.components() if len(c) >= threshold]
        inside = {v for c in big for v in c}
        forest = Graph(g.n, [
            (u, v) for u, v in g.edges
            if u in inside and v in inside and u not in hit and v not in hit
        ])
        removed |= split_forest_to_size(forest, cap)
    residual = tuple(remove_vertices(g, removed) for g in parts)
    return CleanupPlan(frozenset(removed), residual)


def unicyclic_to_tree(h: Graph) -> Graph:
    """Tree on the same vertices with ``H`` inside its square and no larger degrees.

    The cycle ``v1 .. vk`` (``v1`` its smallest vertex, ``v2`` the smaller
    cycle neighbour of ``v1``) is replaced by the path
    ``v1 vk v2 v(k-1) v3 ...``.
    """
    comps = h.components()
    if len(comps) > 1:
        raise GraphError("unicyclic_to_tree needs a connected graph")
    return pseudoforest_to_forest(h)


def pseudoforest_to_forest(h: Graph) -> Graph:
    """Apply the cycle unfolding to every component; forests come back unchanged."""
    removed_edges: set[tuple[int, int]] = set()
    added: list[tuple[int, int]] = []
    for comp in h.components():
        e = _component_edges(h, comp)
        if e > len(comp):
            raise GraphError(
                f"component of vertex {comp[0]} has {e} edges on {len(comp)} vertices"
            )
        if e < len(comp):
            continue
        cyc = _ordered_cycle(h, comp)
        k = len(cyc)
        for i in range(k):
            a, b = cyc[i], cyc[(i + 1) % k]
            removed_edges.add((a, b) if a < b else (b, a))
        zig = []
        lo, hi = 0, k - 1
        while lo <= hi:
            zig.append(cyc[lo])
            if lo != hi:
                zig.append(cyc[hi])
            lo += 1
            hi -= 1
        added.extend(zip(zig, zig[1:]))
    if not removed_edges:
        return h
    kept = [e for e in h.edges if e not in removed_edges]
    return Graph(h.n, kept + added)


def forest_to_spanning_tree(f: Graph, d_cap: int) -> Graph:
    """Chain the components of a forest into one spanning tree.

    Component ``c`` is entered at its smallest leaf and left from its
    largest leaf, so degrees rise to at most two.
    """
    if f.n < 1:
        raise GraphError("forest_to_spanning_tree needs at least one vertex")
    if not f.is_forest():
        raise GraphError("forest_to_spanning_tree needs an acyclic graph")
    comps = f.components()
    if len(comps) == 1:
        return f
    if d_cap < 2:
        raise GraphError(f"joining {len(comps)} components needs degree cap >= 2, got {d_cap}")
    links = []
    prev_exit = None
    for comp in comps:
        leaves = [v for v in comp if f.degree(v) <= 1]
        entry, exit_ = leaves[0], leaves[-1]
        if prev_exit is not None:
            links.append((prev_exit, entry))
        prev_exit = exit_
    return Graph(f.n, list(f.edges) + links)
