"""The three universal host families and their vertex codec.

Every host is a blowup of a product graph on ``[m]^dim`` plus an apex set
joined to everything.  Two distinct tuples are adjacent when at least
``threshold`` coordinates are *near*; nearness is equality for the unbounded
family and "equal or within distance two in the expander" otherwise.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from .expander import CertifiedExpander, load_expander, make_expander, save_expander, square_relation
from .graph import Graph

FAMILIES = ("unbounded", "integer", "rational")
MATERIALIZE_LIMIT = 10**7


@dataclass(frozen=True)
class ConstructionParams:
    C_integer: float = 2.0
    C_rational: float = 2.0
    t_policy: str | int = "sqrt-log"
    t_integer: int = 6
    V_plus_factor: float | None = None  # None means 6 * t
    m_rule: str = "ceil"
    expander_retries: int = 20
    seed: int = 0

    def __post_init__(self):
        for name in ("C_integer", "C_rational", "t_integer", "expander_retries"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.V_plus_factor is not None and self.V_plus_factor <= 0:
            raise ValueError("V_plus_factor must be positive")
        if self.m_rule not in ("ceil", "pow2"):
            raise ValueError(f"unknown m_rule {self.m_rule!r}")


@dataclass(frozen=True)
class ProductVertex:
    coords: tuple[int, ...] | None = None
    slot: int = 0
    apex: int | None = None

    @property
    def is_apex(self) -> bool:
        return self.apex is not None


@dataclass(frozen=True, eq=False)
class UniversalHost:
    family: str
    n: int
    dim: int
    threshold: int
    m: int
    blowup_size: int
    apex_size: int
    params: ConstructionParams
    D: int | None = None
    expander: CertifiedExpander | None = None
    near: np.ndarray = field(default=None, repr=False)

    @property
    def d(self) -> int:
        """Coordinate count: ``d`` for the integer families, ``a`` for the rational one."""
        return self.dim

    @property
    def density(self) -> Fraction:
        return Fraction(self.dim, self.threshold) if self.family == "rational" else Fraction(self.dim)

    @property
    def tuple_count(self) -> int:
        return self.m**self.dim

    @property
    def vertex_count(self) -> int:
        return self.tuple_count * self.blowup_size + self.apex_size

    @property
    def apex_start(self) -> int:
        return self.tuple_count * self.blowup_size

    # -- codec -------------------------------------------------------------
    def tuple_index(self, coords) -> int:
        idx = 0
        for c in coords:
            if not 0 <= c < self.m:
                raise ValueError(f"coordinate {c} out of range for m={self.m}")
            idx = idx * self.m + int(c)
        return idx

    def tuple_coords(self, idx: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.dim):
            idx, r = divmod(idx, self.m)
            out.append(r)
        return tuple(reversed(out))

    def encode(self, v: ProductVertex) -> int:
        if v.is_apex:
            if not 0 <= v.apex < self.apex_size:
                raise ValueError(f"apex index {v.apex} out of range")
            return self.apex_start + v.apex
        if v.coords is None or len(v.coords) != self.dim:
            raise ValueError(f"need {self.dim} coordinates")
        if not 0 <= v.slot < self.blowup_size:
            raise ValueError(f"slot {v.slot} out of range for blowup {self.blowup_size}")
        return self.tuple_index(v.coords) * self.blowup_size + v.slot

    def decode(self, vid: int) -> ProductVertex:
        if not 0 <= vid < self.vertex_count:
            raise ValueError(f"host vertex id {vid} out of range [0, {self.vertex_count})")
        if vid >= self.apex_start:
            return ProductVertex(apex=vid - self.apex_start)
        t, slot = divmod(vid, self.blowup_size)
        return ProductVertex(self.tuple_coords(t), slot)

    # -- edges -------------------------------------------------------------
    def tuples_adjacent(self, cu, cv) -> bool:
        """Edge rule of the product graph for two distinct tuples."""
        hits = sum(bool(self.near[a, b]) for a, b in zip(cu, cv))
        return hits >= self.threshold

    def has_edge(self, x: int, y: int) -> bool:
        if x == y:
            return False
        vx, vy = self.decode(x), self.decode(y)
        if vx.is_apex or vy.is_apex:
            return True
        if vx.coords == vy.coords:
            return True  # blowup classes are cliques
        return self.tuples_adjacent(vx.coords, vy.coords)

    def near_pairs(self) -> int:
        """Ordered coordinate pairs ``(x, y)`` that count as near, diagonal included."""
        return int(np.count_nonzero(self.near))

    def product_edge_count(self) -> int:
        m, k, near = self.m, self.dim, self.near_pairs()
        far = m * m - near
        ordered = sum(math.comb(k, j) * near**j * far ** (k - j) for j in range(self.threshold, k + 1))
        return (ordered - m**k) // 2

    def edge_count(self) -> int:
        tuples, b, a = self.tuple_count, self.blowup_size, self.apex_size
        return (
            tuples * math.comb(b, 2)
            + self.product_edge_count() * b * b
            + math.comb(a, 2)
            + a * tuples * b
        )

    def materialize(self, limit: int = MATERIALIZE_LIMIT) -> Graph:
        total = self.edge_count()
        if total > limit:
            raise ValueError(f"host has {total} edges, above the materialization limit {limit}")
        coords = np.array([self.tuple_coords(i) for i in range(self.tuple_count)], dtype=np.int64)
        hits = np.zeros((self.tuple_count, self.tuple_count), dtype=np.int64)
        for j in range(self.dim):
            hits += self.near[np.ix_(coords[:, j], coords[:, j])]
        adjacent = hits >= self.threshold
        np.fill_diagonal(adjacent, False)
        b = self.blowup_size
        edges = []
        for ti in range(self.tuple_count):
            base = ti * b
            edges.extend((base + s, base + s2) for s in range(b) for s2 in range(s + 1, b))
        ui, wi = np.nonzero(np.triu(adjacent))
        for u, w in zip(ui.tolist(), wi.tolist()):
            edges.extend((u * b + s, w * b + s2) for s in range(b) for s2 in range(b))
        start = self.apex_start
        for p in range(self.apex_size):
            edges.extend((x, start + p) for x in range(start + p))
        return Graph(self.vertex_count, edges)

    # -- description -------------------------------------------------------
    def descriptor(self) -> dict:
        desc = {
            "family": self.family,
            "n": self.n,
            "m": self.m,
            "blowup_size": self.blowup_size,
            "apex_size": self.apex_size,
            "params": asdict(self.params),
        }
        if self.family == "rational":
            desc["a"], desc["b"] = self.dim, self.threshold
        else:
            desc["d"] = self.dim
        if self.D is not None:
            desc["D"] = self.D
        if self.expander is not None:
            desc["expander"] = {
                "t": self.expander.t,
                "seed": self.expander.seed,
                "lambda": self.expander.lambda_hat,
                "edges_sha256": hashlib.sha256(repr(self.expander.graph.edges).encode()).hexdigest(),
            }
        return desc

    def descriptor_hash(self) -> str:
        text = json.dumps(self.descriptor(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


# -- sizing helpers ------------------------------------------------------------

def ceil_root(n: int, k: int) -> int:
    """Smallest integer ``m`` with ``m**k >= n``."""
    if n <= 1:
        return max(n, 0)
    m = max(1, int(round(n ** (1 / k))))
    while m**k < n:
        m += 1
    while m > 1 and (m - 1) ** k >= n:
        m -= 1
    return m


def log2n(n: int) -> float:
    return math.log2(n) if n > 1 else 1.0


def _t_from_policy(policy: str | int, n: int) -> int:
    if isinstance(policy, int) or (isinstance(policy, str) and policy.isdigit()):
        return int(policy)
    if policy == "sqrt-log":
        return 2 ** math.ceil(math.sqrt(log2n(n)))
    raise ValueError(f"unknown t_policy {policy!r}")


def _apex_eye(m: int) -> np.ndarray:
    return np.eye(m, dtype=bool)


# -- builders --------------------------------------------------------------

def build_unbounded(n: int, d: int, params: ConstructionParams = ConstructionParams()) -> UniversalHost:
    """Agreement product on ``[m]^d``, ``(3m+3)``-blowup, ``ceil(2dn/m)`` apexes."""
    if d < 1 or n < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    if params.m_rule == "pow2":
        m = 1
        while m ** (d + 1) < n:
            m *= 2
    else:
        m = ceil_root(n, d + 1)
    if m < 4:
        raise ValueError(f"n={n} gives m={m} < 4; the construction needs m >= 4")
    return UniversalHost(
        family="unbounded", n=n, dim=d, threshold=1, m=m, blowup_size=3 * m + 3,
        apex_size=math.ceil(2 * d * n / m), params=params, near=_apex_eye(m),
    )


def build_integer(
    n: int, d: int, D: int, params: ConstructionParams = ConstructionParams(),
    expander: CertifiedExpander | None = None,
) -> UniversalHost:
    """Expander-square product on ``[m]^d`` with ``m = ceil(C n^(1/d))``, no blowup."""
    if d < 1 or D < 1 or n < 1:
        raise ValueError(f"need n, d, D >= 1, got n={n}, d={d}, D={D}")
    t = params.t_integer
    m = math.ceil(params.C_integer * n ** (1 / d) - 1e-9)
    if m * t % 2:
        m += 1
    if t >= m:
        raise ValueError(f"expander degree t={t} must be below m={m}")
    if expander is None:
        expander = make_expander(m, t, params.seed, params.expander_retries)
    elif (expander.m, expander.t) != (m, t):
        raise ValueError(f"expander is ({expander.m}, {expander.t}), need ({m}, {t})")
    factor = params.V_plus_factor if params.V_plus_factor is not None else 6 * t
    return UniversalHost(
        family="integer", n=n, dim=d, threshold=1, m=m, blowup_size=1,
        apex_size=math.ceil(factor * d * n / m), params=params, D=D,
        expander=expander, near=square_relation(expander.graph),
    )


def rational_t(n: int, m: int, params: ConstructionParams) -> int:
    """Expander degree for the rational family, capped below ``m`` when from the default policy."""
    t = _t_from_policy(params.t_policy, n)
    if params.t_policy == "sqrt-log" and t >= m:
        t = m - 1 if m % 2 == 0 else m - 2
    return t


def build_rational(
    n: int, a: int, b: int, D: int, params: ConstructionParams = ConstructionParams(),
    expander: CertifiedExpander | None = None,
) -> UniversalHost:
    """``b``-of-``a`` expander-square product on ``[m]^a`` with a small blowup."""
    if not a >= b >= 1 or D < 1 or n < 1:
        raise ValueError(f"need a >= b >= 1, D >= 1, n >= 1; got a={a}, b={b}, D={D}, n={n}")
    m = ceil_root(n, a)
    t = rational_t(n, m, params)
    if m * t % 2:
        m += 1
    if t >= m:
        raise ValueError(f"expander degree t={t} must be below m={m}")
    if t < 1:
        raise ValueError(f"expander degree must be positive, got {t}")
    if expander is None:
        expander = make_expander(m, t, params.seed, params.expander_retries)
    elif (expander.m, expander.t) != (m, t):
        raise ValueError(f"expander is ({expander.m}, {expander.t}), need ({m}, {t})")
    blowup = math.ceil(2 ** (params.C_rational * math.sqrt(log2n(n))))
    return UniversalHost(
        family="rational", n=n, dim=a, threshold=b, m=m, blowup_size=blowup,
        apex_size=0, params=params, D=D, expander=expander,
        near=square_relation(expander.graph),
    )


def build_host(family: str, n: int, d: Fraction | int, D: int | None = None,
               params: ConstructionParams = ConstructionParams()) -> UniversalHost:
    d = Fraction(d)
    if family == "unbounded":
        return build_unbounded(n, math.ceil(d), params)
    if D is None:
        raise ValueError(f"the {family} family needs a degree bound D")
    if family == "integer":
        if d.denominator != 1:
            raise ValueError(f"the integer family needs an integer density, got {d}")
        return build_integer(n, int(d), D, params)
    if family == "rational":
        return build_rational(n, d.numerator, d.denominator, D, params)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


# -- files -----------------------------------------------------------------

def expander_path(host_path) -> Path:
    return Path(f"{os.fspath(host_path)}.expander")


def save_host(host: UniversalHost, path) -> None:
    """JSON descriptor; the expander, if any, goes to ``<path>.expander``."""
    desc = host.descriptor()
    if host.expander is not None:
        save_expander(host.expander, expander_path(path))
        desc["expander"]["file"] = expander_path(path).name
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(desc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_host(path) -> UniversalHost:
    with open(path, encoding="utf-8") as fh:
        desc = json.load(fh)
    params = ConstructionParams(**desc["params"])
    family = desc["family"]
    expander = None
    if "expander" in desc:
        exp_file = Path(path).parent / desc["expander"].get("file", expander_path(path).name)
        expander = load_expander(exp_file)
    if family == "unbounded":
        host = build_unbounded(desc["n"], desc["d"], params)
    elif family == "integer":
        host = build_integer(desc["n"], desc["d"], desc["D"], params, expander)
    elif family == "rational":
        host = build_rational(desc["n"], desc["a"], desc["b"], desc["D"], params, expander)
    else:
        raise ValueError(f"unknown family {family!r} in {path}")
    for key in ("m", "blowup_size", "apex_size"):
        if getattr(host, key) != desc[key]:
            raise ValueError(f"host file {path}: {key} is {desc[key]}, rebuild gives {getattr(host, key)}")
    return host


def with_params(host: UniversalHost, **changes) -> ConstructionParams:
    return replace(host.params, **changes)
