"""Simple undirected graphs over contiguous integer vertex ids."""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence
from fractions import Fraction
from typing import TextIO

Edge = tuple[int, int]

# Exact densities use the stdlib rational type.
Rational = Fraction


class GraphError(ValueError):
    """Raised for malformed graph input."""


class Graph:
    """Immutable simple undirected graph on vertices ``0 .. n-1``.

    Edges are stored as sorted pairs ``(u, v)`` with ``u < v``; adjacency is
    derived once at construction and exposed as sorted tuples.
    """

    __slots__ = ("_n", "_edges", "_adj", "_edge_set")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 0:
            raise GraphError(f"vertex count must be nonnegative, got {n}")
        normalized = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at ({u}, {v})")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"endpoint out of range in ({u}, {v}) for n={n}")
            normalized.add((u, v) if u < v else (v, u))
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in normalized:
            adj[u].append(v)
            adj[v].append(u)
        self._n = n
        self._edges = tuple(sorted(normalized))
        self._edge_set = frozenset(normalized)
        self._adj = tuple(tuple(sorted(a)) for a in adj)

    @property
    def n(self) -> int:
        return self._n

    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_set

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex lists, ordered by smallest vertex."""
        seen = [False] * self._n
        out = []
        for s in range(self._n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self._adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        stack.append(y)
            comp.sort()
            out.append(comp)
        return out

    def is_forest(self) -> bool:
        return all(
            sum(len(self._adj[v]) for v in comp) // 2 == len(comp) - 1
            for comp in self.components()
        )

    def distances_from(self, source: int, limit: int | None = None) -> dict[int, int]:
        """BFS distances from ``source``, optionally truncated at ``limit``."""
        dist = {source: 0}
        queue = deque([source])
        while queue:
            x = queue.popleft()
            dx = dist[x]
            if limit is not None and dx >= limit:
                continue
            for y in self._adj[x]:
                if y not in dist:
                    dist[y] = dx + 1
                    queue.append(y)
        return dist

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, e={len(self._edges)})"


def from_edge_list(n: int, pairs: Sequence[Edge]) -> Graph:
    """Build a graph from ``pairs``, collapsing duplicates.

    >>> from_edge_list(4, [(0, 1), (1, 0)]).edge_count
    1
    """
    return Graph(n, pairs)


def square(g: Graph) -> Graph:
    """Graph on the same vertices joining every pair at distance 1 or 2."""
    edges = set(g.edges)
    for x in range(g.n):
        nb = g.neighbors(x)
        for i, a in enumerate(nb):
            for c in nb[i + 1:]:
                edges.add((a, c))
    return Graph(g.n, edges)


def blowup(g: Graph, b: int) -> Graph:
    """Replace every vertex by a ``b``-clique and fully join adjacent classes.

    Vertex ``u * b + s`` is slot ``s`` of the class of ``u``.
    """
    if b < 1:
        raise GraphError(f"blowup factor must be >= 1, got {b}")
    edges = []
    for u in range(g.n):
        base = u * b
        for s in range(b):
            for s2 in range(s + 1, b):
                edges.append((base + s, base + s2))
    for u, v in g.edges:
        for s in range(b):
            for s2 in range(b):
                edges.append((u * b + s, v * b + s2))
    return Graph(g.n * b, edges)


def induced(g: Graph, vertices: Iterable[int]) -> Graph:
    """Induced subgraph on ``vertices``, relabelled in increasing order."""
    vs = sorted(set(vertices))
    for v in vs:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} out of range for n={g.n}")
    index = {v: i for i, v in enumerate(vs)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    return Graph(len(vs), edges)


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Graph(offset, edges)


def complete_graph(n: int) -> Graph:
    return Graph(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


# -- text format ------------------------------------------------------------

def _content_lines(stream: TextIO):
    for raw in stream:
        line = raw.strip()
        if line and not line.startswith("#"):
            yield line


def read_graph(stream: TextIO) -> Graph:
    """Parse ``n m`` followed by ``m`` lines ``u v``; ``#`` lines are comments."""
    g, _ = read_graph_with_trailer(stream)
    return g


def read_graph_with_trailer(stream: TextIO) -> tuple[Graph, list[str]]:
    """Like :func:`read_graph` but also return any lines after the edge block."""
    lines = _content_lines(stream)
    try:
        header = next(lines).split()
    except StopIteration:
        raise GraphError("empty graph file") from None
    if len(header) != 2:
        raise GraphError(f"bad header line: {' '.join(header)!r}")
    n, m = int(header[0]), int(header[1])
    edges = []
    for _ in range(m):
        try:
            parts = next(lines).split()
        except StopIteration:
            raise GraphError(f"expected {m} edges, file ended after {len(edges)}") from None
        if len(parts) != 2:
            raise GraphError(f"bad edge line: {' '.join(parts)!r}")
        edges.append((int(parts[0]), int(parts[1])))
    g = Graph(n, edges)
    if g.edge_count != m:
        raise GraphError(f"header declares {m} edges but {g.edge_count} are distinct")
    return g, list(lines)


def write_graph(g: Graph, stream: TextIO, trailer: Iterable[str] = ()) -> None:
    stream.write(f"{g.n} {g.edge_count}\n")
    for u, v in g.edges:
        stream.write(f"{u} {v}\n")
    for line in trailer:
        stream.write(line.rstrip("\n") + "\n")


def load_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return read_graph(fh)


def save_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_graph(g, fh)
