"""Partition of a multiplied edge set into pseudoforests with simple components.

The independent sets of the underlying matroid are edge multisets in which
every connected component is simple and carries at most one cycle.  Covering
``H^(b)`` by ``ceil(b * m(H))`` of them is done with the classical matroid
partition algorithm: new elements are inserted along shortest augmenting paths
in the exchange graph.
"""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import TextIO

from .density import density
from .graph import Graph

MultiEdge = tuple[int, int, int]  # (u, v, copy) with u < v and copy in 1..b


class UnionFind:
    """Disjoint sets with per-class vertex and edge counters."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.edges = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def add_edge(self, u: int, v: int) -> int:
        """Record edge ``uv`` and return the root of its class."""
        ru, rv = self.find(u), self.find(v)
        if ru != rv:
            if self.size[ru] < self.size[rv]:
                ru, rv = rv, ru
            self.parent[rv] = ru
            self.size[ru] += self.size[rv]
            self.edges[ru] += self.edges[rv]
        self.edges[ru] += 1
        return ru


def bicircular_independent(edges: Iterable[MultiEdge], n: int) -> bool:
    """True iff every component is simple and has no more edges than vertices."""
    uf = UnionFind(n)
    seen_pairs = set()
    for u, v, _copy in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"endpoint out of range in ({u}, {v}) for n={n}")
        pair = (u, v) if u < v else (v, u)
        if pair in seen_pairs:
            return False
        seen_pairs.add(pair)
        root = uf.add_edge(u, v)
        if uf.edges[root] > uf.size[root]:
            return False
    return True


@dataclass(frozen=True)
class Decomposition:
    """Assignment of every ``(u, v, copy)`` of ``H^(b)`` to a part in ``range(k)``."""

    b: int
    k: int
    assignment: dict[MultiEdge, int]

    def part_edges(self, i: int) -> list[MultiEdge]:
        return sorted(e for e, p in self.assignment.items() if p == i)

    def part_graphs(self, n: int) -> list[Graph]:
        buckets: list[list[tuple[int, int]]] = [[] for _ in range(self.k)]
        for (u, v, _c), p in self.assignment.items():
            buckets[p].append((u, v))
        return [Graph(n, es) for es in buckets]


class _Pseudoforest:
    """One part of the partition as a dynamic rooted pseudoforest.

    Every component is stored as a spanning tree of parent pointers.  A
    cyclic component is rooted at an endpoint ``x`` of its extra edge
    ``(x, y)`` so that the cycle is the extra edge plus the tree path from
    ``y`` up to the root.
    """

    def __init__(self, n: int, ends: Sequence[tuple[int, int]]):
        self.ends = ends
        self.parent = [-1] * n
        self.pedge = [-1] * n
        self.on_cycle = [False] * n
        self.closing: dict[int, tuple[int, int]] = {}  # root -> (element, y)
        self.pairs: dict[tuple[int, int], int] = {}

    def _climb(self, x: int) -> list[int]:
        path = [x]
        parent = self.parent
        while parent[x] != -1:
            x = parent[x]
            path.append(x)
        return path

    def _cycle_elements(self, root: int) -> list[int]:
        elem, y = self.closing[root]
        out = [elem]
        while y != root:
            out.append(self.pedge[y])
            y = self.parent[y]
        return out

    def _up_to_cycle(self, x: int, out: set[int]) -> None:
        while not self.on_cycle[x]:
            out.add(self.pedge[x])
            x = self.parent[x]

    def accepts(self, e: int) -> bool:
        """True iff adding ``e`` keeps this part independent."""
        u, v = self.ends[e]
        if (u, v) in self.pairs:
            return False
        ru, rv = self._climb(u)[-1], self._climb(v)[-1]
        if ru != rv:
            return ru not in self.closing or rv not in self.closing
        return ru not in self.closing

    def circuit(self, e: int) -> list[int] | None:
        """Elements of the circuit created by adding ``e``; ``None`` if independent."""
        u, v = self.ends[e]
        same = self.pairs.get((u, v))
        if same is not None:
            return [same]
        pu = self._climb(u)
        pv = self._climb(v)
        ru, rv = pu[-1], pv[-1]
        if ru != rv:
            if ru not in self.closing or rv not in self.closing:
                return None
            out = set(self._cycle_elements(ru))
            out.update(self._cycle_elements(rv))
            self._up_to_cycle(u, out)
            self._up_to_cycle(v, out)
            return sorted(out)
        if ru not in self.closing:
            return None
        on_u = {x: i for i, x in enumerate(pu)}
        out = set(self._cycle_elements(ru))
        x = v
        while x not in on_u:
            out.add(self.pedge[x])
            x = self.parent[x]
        lca = x
        for y in pu[: on_u[lca]]:
            out.add(self.pedge[y])
        self._up_to_cycle(lca, out)
        return sorted(out)

    def _reroot(self, x: int) -> None:
        path = self._climb(x)
        old_edges = [self.pedge[p] for p in path[:-1]]
        for i in range(len(path) - 1, 0, -1):
            self.parent[path[i]] = path[i - 1]
            self.pedge[path[i]] = old_edges[i - 1]
        self.parent[x] = -1
        self.pedge[x] = -1

    def add(self, e: int) -> None:
        u, v = self.ends[e]
        ru, rv = self._climb(u)[-1], self._climb(v)[-1]
        if ru != rv:
            if rv in self.closing:
                self._reroot(u)
                self.parent[u], self.pedge[u] = v, e
            else:
                self._reroot(v)
                self.parent[v], self.pedge[v] = u, e
        else:
            if ru in self.closing:
                raise AssertionError("adding an edge would create a second cycle")
            self._reroot(u)
            self.closing[u] = (e, v)
            for x in self._climb(v):
                self.on_cycle[x] = True
        self.pairs[(u, v)] = e

    def remove(self, e: int) -> None:
        u, v = self.ends[e]
        del self.pairs[(u, v)]
        root = self._climb(u)[-1]
        closing = self.closing.get(root)
        if closing is not None and closing[0] == e:
            for x in self._climb(closing[1]):
                self.on_cycle[x] = False
            del self.closing[root]
            return
        child = u if self.pedge[u] == e else v
        if self.pedge[child] != e:
            raise AssertionError("element is not a tree edge of this part")
        if closing is not None and self.on_cycle[child]:
            elem, y = closing
            for x in self._climb(y):
                self.on_cycle[x] = False
            del self.closing[root]
            self.parent[child] = self.pedge[child] = -1
            self._reroot(y)
            self.parent[y], self.pedge[y] = root, elem
        else:
            self.parent[child] = self.pedge[child] = -1


def partition_multiedges(n: int, elements: Sequence[MultiEdge], k: int) -> list[int]:
    """Assign each element to one of ``k`` independent parts.

    Elements are inserted in the given order; each insertion follows a
    shortest augmenting path (breadth-first over the exchange graph, parts
    and circuit elements scanned in increasing order).  Raises ``ValueError``
    when no augmenting path exists, i.e. ``k`` parts do not suffice.
    """
    ends = [(u, v) for u, v, _ in elements]
    parts = [_Pseudoforest(n, ends) for _ in range(k)]
    owner = [-1] * len(elements)
    sizes = [0] * k

    def find_sink(y: int):
        for i in range(k):
            if owner[y] != i and parts[i].accepts(y):
                return (y, i)
        return None

    for x in range(len(elements)):
        prev: dict[int, int] = {x: -1}
        unseen = sizes[:]
        queue = deque([x])
        sink = find_sink(x)
        while queue and sink is None:
            y = queue.popleft()
            for i in range(k):
                # a part whose elements are all discovered adds no new edges
                if owner[y] == i or unseen[i] == 0:
                    continue
                for z in parts[i].circuit(y):
                    if z not in prev:
                        prev[z] = y
                        unseen[i] -= 1
                        sink = find_sink(z)
                        if sink is not None:
                            break
                        queue.append(z)
                if sink is not None:
                    break
        if sink is None:
            raise ValueError(
                f"no augmenting path for element {elements[x]}: {k} parts do not suffice"
            )
        moves = []
        y, target = sink
        while y != -1:
            moves.append((y, target))
            target = owner[y]
            y = prev[y]
        for y, _ in moves:
            if owner[y] != -1:
                parts[owner[y]].remove(y)
                sizes[owner[y]] -= 1
        for y, target in moves:
            parts[target].add(y)
            owner[y] = target
            sizes[target] += 1
    return owner


def multiply_edges(h: Graph, b: int) -> list[MultiEdge]:
    """The edge multiset ``H^(b)`` in lexicographic ``(u, v, copy)`` order."""
    return [(u, v, c) for u, v in h.edges for c in range(1, b + 1)]


def partition_edges(h: Graph, b: int, k: int) -> Decomposition:
    elements = multiply_edges(h, b)
    owner = partition_multiedges(h.n, elements, k)
    return Decomposition(b, k, dict(zip(elements, owner)))


def decompose(h: Graph, b: int) -> Decomposition:
    """Split ``H^(b)`` into ``ceil(b * m(H))`` parts of simple unicyclic components.

    Requires ``m(H) >= 1``.
    """
    if b < 1:
        raise ValueError(f"b must be >= 1, got {b}")
    if h.n == 0:
        raise ValueError("decompose needs a graph with m(H) >= 1; got the empty graph")
    m = density(h).density
    if m < 1:
        raise ValueError(f"decompose needs m(H) >= 1, got m(H) = {m}")
    return balance(h.n, partition_edges(h, b, math.ceil(b * m)))


class _PartIndex:
    """Component counts of one part, for O(1) "can this edge join" queries."""

    def __init__(self, n: int, edges: Iterable[MultiEdge]):
        self.uf = UnionFind(n)
        self.pairs = set()
        for u, v, _c in edges:
            self.uf.add_edge(u, v)
            self.pairs.add((u, v))

    def accepts(self, u: int, v: int) -> bool:
        if (u, v) in self.pairs:
            return False
        ru, rv = self.uf.find(u), self.uf.find(v)
        uf = self.uf
        if ru == rv:
            return uf.edges[ru] < uf.size[ru]
        return uf.edges[ru] + uf.edges[rv] < uf.size[ru] + uf.size[rv]


def balance(n: int, dec: Decomposition) -> Decomposition:
    """Move edges from fuller to emptier parts while that keeps both independent.

    Stops when part sizes differ by at most one or no single move helps.
    """
    assignment = dict(dec.assignment)
    members: list[list[MultiEdge]] = [[] for _ in range(dec.k)]
    for e, p in sorted(assignment.items()):
        members[p].append(e)
    while True:
        sizes = [len(m) for m in members]
        if max(sizes, default=0) - min(sizes, default=0) <= 1:
            break
        moved = False
        for small in sorted(range(dec.k), key=lambda p: (sizes[p], p)):
            index = _PartIndex(n, members[small])
            for big in sorted(range(dec.k), key=lambda p: (-sizes[p], p)):
                if sizes[big] - sizes[small] <= 1:
                    break
                for e in members[big]:
                    if index.accepts(e[0], e[1]):
                        members[big].remove(e)
                        members[small].append(e)
                        assignment[e] = small
                        moved = True
                        break
                if moved:
                    break
            if moved:
                break
        if not moved:
            break
    return Decomposition(dec.b, dec.k, assignment)


def part_count_for(h: Graph, b: int) -> int:
    """Parts used by the embedders: ``ceil(b * m(H))``, at least ``b`` for sparse ``H``."""
    if h.edge_count == 0:
        return b
    return max(b, math.ceil(b * density(h).density))


def write_decomposition(dec: Decomposition, stream: TextIO) -> None:
    stream.write(f"{dec.b} {dec.k}\n")
    for (u, v, c), p in sorted(dec.assignment.items()):
        stream.write(f"{u} {v} {c} {p}\n")


def read_decomposition(stream: TextIO) -> Decomposition:
    lines = (ln.strip() for ln in stream)
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    b, k = map(int, lines[0].split())
    assignment = {}
    for ln in lines[1:]:
        u, v, c, p = map(int, ln.split())
        assignment[(u, v, c)] = p
    return Decomposition(b, k, assignment)
