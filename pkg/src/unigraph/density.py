"""Exact maximum subgraph density ``m(H) = max e(H')/v(H')``."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .graph import Graph, GraphError

EXHAUSTIVE_LIMIT = 20


@dataclass(frozen=True)
class DensityReport:
    density: Fraction
    witness: tuple[int, ...]


def density(h: Graph, method: str = "auto") -> DensityReport:
    """Return ``m(h)`` exactly together with a maximizing vertex set.

    ``method`` is ``"exhaustive"`` (all vertex subsets, at most
    ``EXHAUSTIVE_LIMIT`` vertices), ``"flow"`` (parametric min cut) or
    ``"auto"``, which picks exhaustive for small graphs.
    """
    if h.n == 0:
        raise GraphError("density of the empty graph is undefined")
    if h.edge_count == 0:
        return DensityReport(Fraction(0), (0,))
    if method == "auto":
        method = "exhaustive" if h.n <= EXHAUSTIVE_LIMIT else "flow"
    if method == "exhaustive":
        return _density_exhaustive(h)
    if method == "flow":
        return _density_flow(h)
    raise ValueError(f"unknown method {method!r}")


def is_balanced(f: Graph) -> bool:
    """True iff the whole graph attains its own maximum density."""
    return density(f).density == Fraction(f.edge_count, f.n)


def _density_exhaustive(h: Graph) -> DensityReport:
    n = h.n
    if n > EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive density limited to {EXHAUSTIVE_LIMIT} vertices, got {n}")
    counts = np.zeros(1 << n, dtype=np.int64)
    for v in range(n):
        lower = 0
        for w in h.neighbors(v):
            if w < v:
                lower |= 1 << w
        block = np.arange(1 << v, dtype=np.uint64)
        counts[1 << v: 1 << (v + 1)] = counts[: 1 << v] + np.bitwise_count(block & np.uint64(lower))
    sizes = np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)
    ratios = np.full(1 << n, -1.0)
    ratios[1:] = counts[1:] / sizes[1:]
    # distinct ratios with denominators <= 20 are far apart in float
    best = int(np.argmax(ratios))
    witness = tuple(v for v in range(n) if best >> v & 1)
    return DensityReport(Fraction(int(counts[best]), int(sizes[best])), witness)


def _densest_at(h: Graph, p: int, q: int) -> tuple[int, list[int]]:
    """Maximize ``q*e(S) - p*|S|`` by one min cut; return the value and ``S``."""
    n = h.n
    s, t = n, n + 1
    rows, cols, caps = [], [], []
    for v in range(n):
        deg = h.degree(v)
        if deg:
            rows.append(s); cols.append(v); caps.append(q * deg)
        rows.append(v); cols.append(t); caps.append(2 * p)
    for u, v in h.edges:
        rows += [u, v]; cols += [v, u]; caps += [q, q]
    cap = csr_matrix(
        (np.array(caps, dtype=np.int32), (np.array(rows), np.array(cols))),
        shape=(n + 2, n + 2),
    )
    result = maximum_flow(cap, s, t)
    value = q * h.edge_count - result.flow_value // 2
    if value <= 0:
        return value, []
    residual = (cap - result.flow).tocsr()
    residual.eliminate_zeros()
    indptr, indices, data = residual.indptr, residual.indices, residual.data
    seen = np.zeros(n + 2, dtype=bool)
    seen[s] = True
    queue = deque([s])
    while queue:
        x = queue.popleft()
        for k in range(indptr[x], indptr[x + 1]):
            y = indices[k]
            if data[k] > 0 and not seen[y]:
                seen[y] = True
                queue.append(y)
    return value, [v for v in range(n) if seen[v]]


def _edges_inside(h: Graph, vertices) -> int:
    inside = set(vertices)
    return sum(1 for u, v in h.edges if u in inside and v in inside)


def _density_flow(h: Graph) -> DensityReport:
    # Dinkelbach iteration: each min cut either certifies optimality of the
    # current ratio or yields a strictly denser vertex set.
    witness = [v for v in range(h.n) if h.degree(v)]
    ratio = Fraction(_edges_inside(h, witness), len(witness))
    while True:
        value, better = _densest_at(h, ratio.numerator, ratio.denominator)
        if value <= 0:
            return DensityReport(ratio, tuple(witness))
        new_ratio = Fraction(_edges_inside(h, better), len(better))
        if new_ratio <= ratio:
            raise AssertionError("min cut returned a set that is not denser")
        ratio, witness = new_ratio, better
