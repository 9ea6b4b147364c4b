"""Random regular graphs with a certified second eigenvalue."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.linalg import eigsh

from .graph import Graph, GraphError, read_graph_with_trailer, write_graph

REJECTION_ROUNDS = 50
DENSE_EIG_LIMIT = 2500
DEFAULT_TOL = 1e-6


class ExpanderError(ValueError):
    """No candidate passed the spectral test."""


def _check_params(m: int, t: int) -> None:
    if t < 0 or m < 1:
        raise ValueError(f"need m >= 1 and t >= 0, got m={m}, t={t}")
    if t >= m:
        raise ValueError(f"degree t={t} must be below the vertex count m={m}")
    if m * t % 2:
        raise ValueError(f"m*t must be even, got m={m}, t={t}")


def random_regular(m: int, t: int, seed: int | np.random.SeedSequence) -> Graph:
    """Simple ``t``-regular graph on ``m`` vertices from the pairing model.

    Up to ``REJECTION_ROUNDS`` pairings are drawn and rejected on loops or
    repeated pairs; after that the last pairing is repaired by random edge
    swaps.  Degrees above ``(m - 1) / 2`` are drawn as complements.
    """
    _check_params(m, t)
    if 2 * t > m - 1:
        # dense case: draw the sparse complement instead
        co = random_regular(m, m - 1 - t, seed)
        return Graph(m, ((u, v) for u in range(m) for v in range(u + 1, m) if not co.has_edge(u, v)))
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(m), t)
    pairs = None
    for _ in range(REJECTION_ROUNDS):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        lo, hi = pairs.min(axis=1), pairs.max(axis=1)
        keys = lo * m + hi
        if not np.any(lo == hi) and np.unique(keys).size == keys.size:
            return Graph(m, zip(lo.tolist(), hi.tolist()))
    return Graph(m, _repair(pairs.tolist(), m, rng))


def _repair(pairs: list[list[int]], m: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    def key(a: int, b: int) -> tuple[int, int]:
        return (a, b) if a < b else (b, a)

    count: dict[tuple[int, int], int] = {}
    for a, b in pairs:
        k = key(a, b)
        count[k] = count.get(k, 0) + 1

    def bad(i: int) -> bool:
        a, b = pairs[i]
        return a == b or count[key(a, b)] > 1

    todo = [i for i in range(len(pairs)) if bad(i)]
    budget = 1000 * len(pairs) + 1000
    while todo:
        if budget == 0:
            raise GraphError("edge-swap repair did not converge")
        budget -= 1
        i = todo[-1]
        if not bad(i):
            todo.pop()
            continue
        j = int(rng.integers(len(pairs)))
        if j == i:
            continue
        a, b = pairs[i]
        c, d = pairs[j]
        if rng.random() < 0.5:
            c, d = d, c
        new1, new2 = key(a, c), key(b, d)
        if a == c or b == d or new1 == new2 or count.get(new1, 0) or count.get(new2, 0):
            continue
        for k in (key(a, b), key(c, d)):
            count[k] -= 1
        count[new1] = 1
        count[new2] = 1
        pairs[i], pairs[j] = [a, c], [b, d]
        if bad(j):
            todo.append(j)
    return [key(a, b) for a, b in pairs]


def _regular_degree(g: Graph) -> int:
    degrees = {g.degree(v) for v in range(g.n)}
    if len(degrees) != 1:
        raise GraphError(f"graph is not regular: degrees {sorted(degrees)[:5]}")
    return degrees.pop()


def adjacency_matrix(g: Graph) -> csr_matrix:
    e = np.array(g.edges, dtype=np.int64).reshape(-1, 2)
    rows = np.concatenate([e[:, 0], e[:, 1]])
    cols = np.concatenate([e[:, 1], e[:, 0]])
    return csr_matrix((np.ones(rows.size), (rows, cols)), shape=(g.n, g.n))


def second_eigenvalue(g: Graph, tol: float = DEFAULT_TOL) -> float:
    """Second largest absolute adjacency eigenvalue of a regular graph."""
    _regular_degree(g)
    if g.n < 2:
        return 0.0
    a = adjacency_matrix(g)
    if g.n <= DENSE_EIG_LIMIT:
        values = np.linalg.eigvalsh(a.toarray())
    else:
        values = eigsh(a, k=2, which="LM", tol=tol / 10, return_eigenvectors=False)
    mags = np.sort(np.abs(values))[::-1]
    return float(mags[1])


@dataclass(frozen=True)
class CertifiedExpander:
    graph: Graph
    t: int
    lambda_hat: float
    tol: float
    seed: int

    @property
    def m(self) -> int:
        return self.graph.n

    @property
    def lambda_bound(self) -> float:
        return self.lambda_hat + self.tol

    def neighbor_table(self) -> np.ndarray:
        """``m x t`` array of sorted neighbours."""
        return np.array([self.graph.neighbors(v) for v in range(self.m)], dtype=np.int64)


def candidate_seeds(seed: int, retries: int) -> list[int]:
    """Child seeds tried by :func:`make_expander`, in order."""
    children = np.random.SeedSequence(seed).spawn(retries)
    return [int(c.generate_state(1, dtype=np.uint32)[0]) for c in children]


def make_expander(
    m: int, t: int, seed: int, retries: int = 20, tol: float = DEFAULT_TOL
) -> CertifiedExpander:
    """First candidate with ``lambda + tol <= 3 sqrt(t)`` among ``retries`` seeds."""
    _check_params(m, t)
    threshold = 3 * math.sqrt(t)
    best = math.inf
    for child in candidate_seeds(seed, retries):
        g = random_regular(m, t, child)
        lam = second_eigenvalue(g, tol)
        if lam + tol <= threshold:
            return CertifiedExpander(g, t, lam, tol, child)
        best = min(best, lam)
    raise ExpanderError(
        f"no ({m}, {t}) candidate in {retries} tries met lambda <= {threshold:.4f}; best {best:.4f}"
    )


def walk_endpoint_counts(
    exp: CertifiedExpander, start: int, steps: int, samples: int, seed: int
) -> np.ndarray:
    """Histogram over ``V(G)`` of endpoints of ``samples`` random walks."""
    rng = np.random.default_rng(seed)
    table = exp.neighbor_table()
    pos = np.full(samples, start, dtype=np.int64)
    for _ in range(steps):
        pos = table[pos, rng.integers(exp.t, size=samples)]
    return np.bincount(pos, minlength=exp.m)


def walk_bound(exp: CertifiedExpander, steps: int) -> float:
    """Upper bound ``1/m + (lambda/t)^steps`` on any endpoint probability."""
    return 1 / exp.m + (exp.lambda_bound / exp.t) ** steps


def write_expander(exp: CertifiedExpander, stream: TextIO) -> None:
    write_graph(exp.graph, stream, [f"lambda {exp.lambda_hat!r} tol {exp.tol!r} seed {exp.seed}"])


def read_expander(stream: TextIO) -> CertifiedExpander:
    g, trailer = read_graph_with_trailer(stream)
    if len(trailer) != 1:
        raise GraphError("expander file needs one trailer line 'lambda <v> tol <v> seed <v>'")
    fields = trailer[0].split()
    if len(fields) != 6 or fields[0::2] != ["lambda", "tol", "seed"]:
        raise GraphError(f"bad expander trailer: {trailer[0]!r}")
    return CertifiedExpander(g, _regular_degree(g), float(fields[1]), float(fields[3]), int(fields[5]))


def save_expander(exp: CertifiedExpander, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_expander(exp, fh)


def load_expander(path) -> CertifiedExpander:
    with open(path, encoding="utf-8") as fh:
        return read_expander(fh)


def square_relation(g: Graph) -> np.ndarray:
    """Boolean ``n x n`` matrix of pairs at distance at most two, diagonal included."""
    a = adjacency_matrix(g)
    near = (a + a @ a).toarray() > 0
    np.fill_diagonal(near, True)
    return near
