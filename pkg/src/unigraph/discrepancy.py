"""Iterated rounding of fractional splits with bounded sup-norm error.

``halve`` rounds ``x_i = q`` to a 0/1 vector keeping every coordinate sum
within (strictly) less than one of ``q`` times the total, for vectors of
l1-norm at most one.  ``partition_pow2`` and ``partition_parts`` apply it
recursively to split a family into ``m`` balanced collections.
"""

from __future__ import annotations

import math
from collections.abc import Hashable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import flint
import numpy as np

SparseVector = Mapping[Hashable, "Fraction | int"]


@dataclass(frozen=True)
class VectorFamily:
    dim: int
    vectors: tuple[tuple[Fraction, ...], ...]

    def __init__(self, dim: int, vectors: Sequence[Sequence]):
        if dim < 1:
            raise ValueError(f"dimension must be positive, got {dim}")
        rows = []
        for idx, vec in enumerate(vectors):
            row = tuple(Fraction(c) for c in vec)
            if len(row) != dim:
                raise ValueError(f"vector {idx} has length {len(row)}, expected {dim}")
            if sum(abs(c) for c in row) > 1:
                raise ValueError(f"vector {idx} has l1-norm above 1")
            rows.append(row)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "vectors", tuple(rows))

    def __len__(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class SplitResult:
    parts: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class RoundingResult:
    chosen: frozenset[int]
    phases: int


def _null_direction(rows: list[list[int]], ncols: int) -> list[int]:
    """Nonzero integer vector in the kernel of ``rows`` (more columns than rows)."""
    if not rows:
        d = [0] * ncols
        d[-1] = 1
        return d
    mat = flint.fmpz_mat(len(rows), ncols, [c for row in rows for c in row])
    basis, nullity = mat.nullspace()
    col = nullity - 1  # basis vector of the last free column
    d = [int(basis[i, col]) for i in range(ncols)]
    g = math.gcd(*d)
    return [c // g for c in d] if g > 1 else d


def rounding_walk(
    vectors: Sequence[SparseVector],
    scale: Fraction | int,
    q: Fraction,
    check_invariant: bool = False,
) -> RoundingResult:
    """Round ``x = q`` to a 0/1 vector along lines of the active equalities.

    ``vectors`` are sparse rational vectors with l1-norm at most ``scale``; a
    coordinate is active while its floating mass exceeds ``scale``.  The
    returned set ``I`` satisfies ``|sum_I v_j - q sum v_j| < scale`` for
    every coordinate ``j``.
    """
    q = Fraction(q)
    if not 0 <= q <= 1:
        raise ValueError(f"q must lie in [0, 1], got {q}")
    t = len(vectors)
    # Work in flint rationals; column i of the constraint matrix is scaled by
    # its own denominator and the kernel direction rescaled per variable.
    fq = flint.fmpq
    limit = fq(Fraction(scale).numerator, Fraction(scale).denominator)
    qq = fq(q.numerator, q.denominator)
    rat_vectors = []
    col_scale = []
    int_vectors = []
    for vec in vectors:
        rv = {}
        for j, c in vec.items():
            if c:
                c = Fraction(c)
                rv[j] = fq(c.numerator, c.denominator)
        if sum(map(abs, rv.values()), fq(0)) > limit:
            raise ValueError(f"vector {len(rat_vectors)} has l1-norm above {scale}")
        den = math.lcm(1, *(c.q for c in rv.values()))
        rat_vectors.append(rv)
        col_scale.append(den)
        int_vectors.append({j: int(c * den) for j, c in rv.items()})
    if q in (0, 1) or t == 0:
        return RoundingResult(frozenset(range(t)) if q == 1 else frozenset(), 0)
    keys = sorted({j for rv in rat_vectors for j in rv}, key=repr)
    row_of = {j: r for r, j in enumerate(keys)}
    support = [{row_of[j] for j in iv} for iv in int_vectors]
    biggest = max((abs(c) for iv in int_vectors for c in iv.values()), default=0)
    dense = np.zeros((len(keys), t), dtype=np.int64 if biggest < 2**62 else object)
    for i, iv in enumerate(int_vectors):
        for j, c in iv.items():
            dense[row_of[j], i] = c

    zero, one = fq(0), fq(1)
    x = [qq] * t
    mass: dict[Hashable, flint.fmpq] = {}
    totals: dict[Hashable, flint.fmpq] = {}
    for rv in rat_vectors:
        for j, c in rv.items():
            mass[j] = mass.get(j, zero) + abs(c)
            totals[j] = totals.get(j, zero) + c
    active = {j for j, w in mass.items() if w > limit}
    floating = list(range(t))  # kept sorted
    phases = 0

    while active:
        # Grow a column set, sparsest floating variables first, until it
        # touches fewer active coordinates than it has columns; its kernel is
        # then nontrivial.  With r active coordinates at most r + 1 columns.
        active_rows = {row_of[j] for j in active}
        order = sorted(floating, key=lambda i: (len(support[i] & active_rows), i))
        touched: set[int] = set()
        cols = []
        for i in order:
            cols.append(i)
            touched |= support[i] & active_rows
            if len(cols) > len(touched):
                break
        else:
            raise AssertionError("more active coordinates than floating variables")
        rows_idx = sorted(touched)
        matrix = dense[np.ix_(rows_idx, cols)].tolist()
        direction = [
            d * col_scale[i] for i, d in zip(cols, _null_direction(matrix, len(cols)))
        ]
        step = None
        for i, di in zip(cols, direction):
            if di > 0:
                s = (one - x[i]) / di
            elif di < 0:
                s = x[i] / -di
            else:
                continue
            if step is None or s < step:
                step = s
        if step is None:
            raise AssertionError("null direction vanished")
        fixed = []
        for i, di in zip(cols, direction):
            if di:
                x[i] += step * di
                if x[i] == zero or x[i] == one:
                    fixed.append(i)
        fixed_set = set(fixed)
        floating = [i for i in floating if i not in fixed_set]
        for i in fixed:
            for j, c in rat_vectors[i].items():
                mass[j] -= abs(c)
                if j in active and mass[j] <= limit:
                    active.discard(j)
        phases += 1
        if check_invariant:
            for j in active:
                got = sum((x[i] * rat_vectors[i].get(j, zero) for i in range(t)), zero)
                if got != qq * totals[j]:
                    raise AssertionError(f"equality lost on coordinate {j!r} at phase {phases}")

    # No coordinate is active: each remaining floating variable moves by less
    # than one, against at most unit floating mass per coordinate.
    half = fq(1, 2)
    ties = 0
    for i in floating:
        if x[i] == half:
            x[i] = one if ties % 2 == 0 else zero
            ties += 1
        else:
            x[i] = one if x[i] > half else zero
    return RoundingResult(frozenset(i for i in range(t) if x[i] == 1), phases)


def _sparse_rows(family: VectorFamily) -> list[dict[int, Fraction]]:
    return [{j: c for j, c in enumerate(vec) if c} for vec in family.vectors]


def halve(family: VectorFamily, q: Fraction = Fraction(1, 2)) -> frozenset[int]:
    """Index set ``I`` with ``|sum_I v_ij - q * sum_i v_ij| < 1`` for all ``j``."""
    return rounding_walk(_sparse_rows(family), 1, Fraction(q)).chosen


def _is_power_of_two(m: int) -> bool:
    return m >= 1 and m & (m - 1) == 0


@lru_cache(maxsize=None)
def _split_plan(m: int) -> tuple[int, float]:
    """Best first split ``s`` of ``m`` parts and the resulting float bound."""
    if m == 1:
        return 0, 0.0
    best_s, best = m // 2, math.inf
    for s in range(m // 2, 0, -1):
        bound = max(_split_plan(s)[1] + 1 / s, _split_plan(m - s)[1] + 1 / (m - s))
        if bound < best - 1e-12:
            best_s, best = s, bound
    return best_s, best


def split_sizes(m: int) -> tuple[int, int]:
    """How ``partition_parts`` splits ``m`` parts in two; halves for powers of two."""
    if m < 2:
        raise ValueError("need at least two parts to split")
    if _is_power_of_two(m):
        return m // 2, m // 2
    s = _split_plan(m)[0]
    return s, m - s


@lru_cache(maxsize=None)
def deviation_bound(m: int) -> Fraction:
    """Exact sup-norm bound guaranteed by ``partition_parts`` for ``m`` parts.

    Equals ``sum_{i<k} 2^-i`` when ``m = 2^k``.
    """
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if m == 1:
        return Fraction(0)
    s, r = split_sizes(m)
    return max(deviation_bound(s) + Fraction(1, s), deviation_bound(r) + Fraction(1, r))


def assign_parts(vectors: Sequence[SparseVector], scale: Fraction | int, m: int) -> list[int]:
    """Part index in ``range(m)`` for every vector, by recursive rounding.

    Each part's coordinate sums stay within ``deviation_bound(m) * scale``
    of ``1/m`` of the total.
    """
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    out = [0] * len(vectors)

    def rec(indices: list[int], parts: int, offset: int) -> None:
        if parts == 1 or not indices:
            for i in indices:
                out[i] = offset
            return
        s, r = split_sizes(parts)
        chosen = rounding_walk([vectors[i] for i in indices], scale, Fraction(s, parts)).chosen
        first = [i for k, i in enumerate(indices) if k in chosen]
        second = [i for k, i in enumerate(indices) if k not in chosen]
        rec(first, s, offset)
        rec(second, r, offset + s)

    rec(list(range(len(vectors))), m, 0)
    return out


def _as_split(assignment: list[int], m: int) -> SplitResult:
    parts: list[list[int]] = [[] for _ in range(m)]
    for i, p in enumerate(assignment):
        parts[p].append(i)
    return SplitResult(tuple(tuple(p) for p in parts))


def partition_pow2(family: VectorFamily, m: int) -> SplitResult:
    """Split into ``m = 2^k`` parts by repeated halving with ``q = 1/2``."""
    if m < 2 or not _is_power_of_two(m):
        raise ValueError(f"m must be a power of two >= 2, got {m}")
    return _as_split(assign_parts(_sparse_rows(family), 1, m), m)


def partition_parts(family: VectorFamily, m: int) -> SplitResult:
    """Split into any number ``m >= 1`` of parts; see :func:`deviation_bound`."""
    return _as_split(assign_parts(_sparse_rows(family), 1, m), m)
