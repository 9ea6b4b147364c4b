"""Counting lower bound for hosts containing every lift of a balanced graph."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .density import density, is_balanced
from .graph import Graph


@dataclass(frozen=True)
class BoundReport:
    F: Graph
    n: int
    m_F: Fraction
    bound: float
    bound_exact: Fraction | None = None
    M: int | None = None
    counting_lhs_log: float | None = None
    counting_rhs_log: float | None = None

    @property
    def alpha(self) -> Fraction:
        """Constant in ``bound = alpha * n^(2 - 1/m(F))``."""
        return Fraction(1, 9 * self.F.n)

    @property
    def max_degree(self) -> int:
        """Degree bound satisfied by every lift of ``F``."""
        return self.F.n

    @property
    def sufficient(self) -> bool | None:
        """Whether ``M`` edges pass the necessary counting condition."""
        if self.M is None:
            return None
        return self.counting_lhs_log > self.counting_rhs_log


def exact_power(n: int, exponent: Fraction) -> Fraction | None:
    """``n ** exponent`` as a rational when it is one, else ``None``."""
    p, q = exponent.numerator, exponent.denominator
    root = round(n ** (1 / q))
    for r in (root - 1, root, root + 1):
        if r >= 0 and r**q == n:
            return Fraction(r) ** p
    return None


def _check_base(f: Graph, n: int) -> Fraction:
    if f.n == 0 or f.edge_count == 0:
        raise ValueError("the base graph needs at least one edge")
    if not is_balanced(f):
        raise ValueError(
            f"base graph is not balanced: e/v = {Fraction(f.edge_count, f.n)} "
            f"but m(F) = {density(f).density}"
        )
    if n % f.n:
        raise ValueError(f"n={n} is not divisible by v(F)={f.n}")
    return Fraction(f.edge_count, f.n)


def lower_bound(f: Graph, n: int) -> BoundReport:
    """``n^(2 - 1/m(F)) / (9 v(F))``, exact when ``n`` is a suitable perfect power."""
    m_f = _check_base(f, n)
    exponent = 2 - 1 / m_f
    exact = exact_power(n, exponent)
    if exact is not None:
        exact = exact / (9 * f.n)
        value = float(exact)
    else:
        value = n ** float(exponent) / (9 * f.n)
    return BoundReport(f, n, m_f, value, exact)


def log_binomial(a: int, k: int) -> float:
    if k < 0 or k > a:
        return -math.inf
    return math.lgamma(a + 1) - math.lgamma(k + 1) - math.lgamma(a - k + 1)


def check_counting_inequality(f: Graph, n: int, M: int) -> BoundReport:
    """Natural logs of ``C(M, ne/v) n!`` and ``(n / 3v)^(ne/v)``.

    A host with ``M`` edges can contain every lift only if the first exceeds
    the second.  The left side is ``-inf`` when ``M < ne/v``.
    """
    base = lower_bound(f, n)
    k = n * f.edge_count // f.n
    lhs = log_binomial(M, k) + math.lgamma(n + 1)
    rhs = k * math.log(n / (3 * f.n))
    return BoundReport(f, n, base.m_F, base.bound, base.bound_exact, M, lhs, rhs)


def conjectured_order(n: int, d: Fraction) -> float:
    """``n^(2 - 1/d)``: the edge count conjectured to suffice, up to a constant (open)."""
    return n ** (2 - 1 / float(d))
