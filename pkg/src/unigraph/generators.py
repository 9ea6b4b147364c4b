"""Guest graph generators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import networkx as nx
import numpy as np

from .density import density
from .graph import Graph, complete_graph


def gen_union_unicyclic(n: int, d: int, seed) -> Graph:
    """Union of ``d`` random functional graphs; density at most ``d``.

    Every vertex picks one uniform out-neighbour per layer (never itself), so
    any vertex set spans at most ``d`` edges per member.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if n < 2:
        return Graph(max(n, 0))
    rng = np.random.default_rng(seed)
    edges = []
    src = np.arange(n)
    for _ in range(d):
        dst = rng.integers(n - 1, size=n)
        dst += dst >= src  # skip self
        edges.extend(zip(src.tolist(), dst.tolist()))
    return Graph(n, edges)


@dataclass(frozen=True)
class LiftMatchings:
    base: Graph
    n: int
    matchings: dict[tuple[int, int], tuple[int, ...]]

    @property
    def class_size(self) -> int:
        return self.n // self.base.n

    def graph(self) -> Graph:
        q = self.class_size
        edges = []
        for (u, w), perm in self.matchings.items():
            edges.extend((u * q + j, w * q + p) for j, p in enumerate(perm))
        return Graph(self.n, edges)


def lift_matchings(f: Graph, n: int, seed) -> LiftMatchings:
    if f.n == 0 or n % f.n:
        raise ValueError(f"n={n} is not divisible by v(F)={f.n}")
    q = n // f.n
    rng = np.random.default_rng(seed)
    return LiftMatchings(f, n, {e: tuple(rng.permutation(q).tolist()) for e in f.edges})


def gen_lift(f: Graph, n: int, seed) -> Graph:
    """Random lift: class ``u`` is ``u*q .. u*q+q-1``; each base edge becomes a random perfect matching."""
    return lift_matchings(f, n, seed).graph()


def _candidates(v: int, e: int):
    """Graphs with ``v`` vertices and ``e`` edges, atlas order for ``v <= 7``."""
    if v <= 7:
        for g in nx.graph_atlas_g():
            if g.number_of_nodes() == v and g.number_of_edges() == e:
                yield Graph(v, g.edges())
        return
    # one more vertex on top of every 7-vertex atlas graph
    for g in nx.graph_atlas_g():
        if g.number_of_nodes() != v - 1:
            continue
        extra = e - g.number_of_edges()
        if not 0 <= extra <= v - 1:
            continue
        for nbrs in combinations(range(v - 1), extra):
            yield Graph(v, list(g.edges()) + [(x, v - 1) for x in nbrs])


def find_balanced(a: int, b: int, max_v: int) -> Graph:
    """Smallest balanced graph with ``e/v = a/b`` and at most ``max_v`` vertices."""
    if not a >= b >= 1:
        raise ValueError(f"need a >= b >= 1, got a={a}, b={b}")
    if max_v > 8:
        raise ValueError("exhaustive search is limited to 8 vertices")
    ratio = Fraction(a, b)
    if ratio.denominator == 1 and 2 * ratio.numerator + 1 <= max_v:
        return complete_graph(2 * ratio.numerator + 1)
    for v in range(1, max_v + 1):
        e = ratio * v
        if e.denominator != 1 or e > math.comb(v, 2):
            continue
        for g in _candidates(v, int(e)):
            if density(g).density == ratio:
                return g
    raise ValueError(f"no balanced graph with density {ratio} on at most {max_v} vertices")


def gen_bounded_degree(n: int, d: int, D: int, seed, tries: int = 30) -> Graph:
    """Union of ``d`` functional layers with every degree capped at ``D``.

    A vertex whose draws keep hitting saturated or already adjacent vertices
    gives up on that layer, so the result may have fewer than ``d*n`` edges.
    """
    if d < 1 or D < 2:
        raise ValueError(f"need d >= 1 and D >= 2, got d={d}, D={D}")
    if n < 2:
        return Graph(max(n, 0))
    rng = np.random.default_rng(seed)
    deg = [0] * n
    adj: list[set[int]] = [set() for _ in range(n)]
    for _ in range(d):
        for v in rng.permutation(n).tolist():
            if deg[v] >= D:
                continue
            for w in rng.integers(n, size=tries).tolist():
                if w != v and deg[w] < D and w not in adj[v]:
                    adj[v].add(w)
                    adj[w].add(v)
                    deg[v] += 1
                    deg[w] += 1
                    break
    return Graph(n, ((v, w) for v in range(n) for w in adj[v] if v < w))
