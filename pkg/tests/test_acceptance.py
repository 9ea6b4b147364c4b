"""End-to-end acceptance criteria; each test records one PASS/FAIL line.

Run alone with ``python3 -m pytest tests/test_acceptance.py -v``; the lines
are repeated in the terminal summary.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from fractions import Fraction
from itertools import combinations

import networkx as nx
import numpy as np
import pytest

from unigraph.cli import fitted_exponent
from unigraph.density import density
from unigraph.discrepancy import VectorFamily, deviation_bound, halve, partition_pow2
from unigraph.embedders import EmbeddingError, embed_integer, embed_rational, embed_unbounded
from unigraph.embedders.integer import bucket_cap
from unigraph.embedders.rational import phase_bound
from unigraph.embedders.unbounded import bucket_bound_holds
from unigraph.expander import make_expander, walk_bound, walk_endpoint_counts
from unigraph.generators import gen_bounded_degree, gen_lift, gen_union_unicyclic
from unigraph.graph import Graph, complete_graph
from unigraph.hosts import build_integer, build_rational, build_unbounded
from unigraph.bounds import check_counting_inequality, lower_bound
from unigraph.matroid import bicircular_independent, decompose, multiply_edges
from unigraph.trees import remove_vertices, split_forest, unicyclic_to_tree
from unigraph.verify import verify_embedding

from acceptance_report import record
from oracles import brute_density, distance_pairs, part_deviation, random_family, random_forest, random_graph

pytestmark = pytest.mark.acceptance


def test_criterion_01_density_oracle():
    rng = np.random.default_rng(101)
    graphs = []
    for _ in range(500):
        n = int(rng.integers(1, 11))
        graphs.append(random_graph(n, float(rng.uniform(0.1, 0.9)), rng))
    t0 = time.perf_counter()
    ours = [density(g).density for g in graphs]
    elapsed = time.perf_counter() - t0
    agree = sum(a == brute_density(g) for a, g in zip(ours, graphs))
    ok = agree == 500 and elapsed < 60
    record(1, "density oracle equivalence", ok, f"{agree}/500 exact matches, density() took {elapsed:.2f}s")
    assert ok


def test_criterion_02_matroid_decomposition():
    rng = np.random.default_rng(202)
    good = tried = 0
    while tried < 300:
        n = int(rng.integers(3, 61))
        g = random_graph(n, float(rng.uniform(2.2 / n, min(1.0, 12 / n))), rng)
        if g.edge_count == 0 or density(g).density < 1:
            continue
        b = 1 + tried % 3
        tried += 1
        dec = decompose(g, b)
        per_edge = Counter((u, v) for u, v, _c in dec.assignment)
        ok = (
            dec.k == math.ceil(b * density(g).density)
            and set(dec.assignment) == set(multiply_edges(g, b))
            and all(per_edge[e] == b for e in g.edges)
            and all(bicircular_independent(dec.part_edges(i), n) for i in range(dec.k))
        )
        good += ok
    ok = good == 300
    record(2, "matroid decomposition", ok, f"{good}/300 decompositions pass count, cover and independence")
    assert ok


def test_criterion_03_discrepancy():
    rng = np.random.default_rng(303)
    good = 0
    worst_halve, worst_split = Fraction(0), Fraction(0)
    t0 = time.perf_counter()
    for _ in range(1000):
        t = int(rng.integers(1, 301))
        dim = int(rng.integers(1, 61))
        vecs = random_family(rng, t, dim, den=int(rng.integers(2, 30)), max_support=8)
        fam = VectorFamily(dim, vecs)
        chosen = halve(fam)
        dev_h = part_deviation(vecs, [sorted(chosen)], 2)
        m = 2 ** int(rng.integers(1, 5))
        split = partition_pow2(fam, m)
        dev_s = part_deviation(vecs, split.parts, m)
        worst_halve, worst_split = max(worst_halve, dev_h), max(worst_split, dev_s)
        good += dev_h < 1 and dev_s <= deviation_bound(m) < 2
    ok = good == 1000
    record(3, "halving and power-of-two splits", ok,
           f"{good}/1000 families; worst halve {float(worst_halve):.4f}, worst split "
           f"{float(worst_split):.4f}; {time.perf_counter() - t0:.0f}s")
    assert ok


def test_criterion_04_forest_split():
    rng = np.random.default_rng(404)
    good = 0
    for _ in range(500):
        n = int(rng.integers(1, 301))
        f = random_forest(n, rng, keep=float(rng.uniform(0.5, 1.0)))
        r = int(rng.integers(1, max(2, n // 2) + 1))
        removed = split_forest(f, r)
        rest = remove_vertices(f, removed)
        biggest = max((len(c) for c in rest.components() if not (len(c) == 1 and c[0] in removed)), default=0)
        good += len(removed) <= r and biggest <= math.ceil(n / r)
    ok = good == 500
    record(4, "forest splitting", ok, f"{good}/500 forests within |R| <= r and components <= ceil(n/r)")
    assert ok


def connected_unicyclic(max_n: int):
    for n in range(3, max_n + 1):
        found: dict[str, list[nx.Graph]] = {}
        for tree in nx.nonisomorphic_trees(n):
            for u, v in combinations(range(n), 2):
                if tree.has_edge(u, v):
                    continue
                g = tree.copy()
                g.add_edge(u, v)
                bucket = found.setdefault(nx.weisfeiler_lehman_graph_hash(g), [])
                if not any(nx.is_isomorphic(g, x) for x in bucket):
                    bucket.append(g)
        for bucket in found.values():
            for g in bucket:
                yield Graph(n, g.edges())


def test_criterion_05_unicyclic_unfolding():
    total = good = 0
    per_n = Counter()
    for h in connected_unicyclic(9):
        total += 1
        per_n[h.n] += 1
        t = unicyclic_to_tree(h)
        good += (
            t.is_forest() and len(t.components()) == 1
            and t.max_degree() <= h.max_degree()
            and set(h.edges) <= distance_pairs(t, 1, 2)
        )
    # connected unicyclic graphs on 3..9 vertices: 1, 2, 5, 13, 33, 89, 240
    complete = [per_n[n] for n in range(3, 10)] == [1, 2, 5, 13, 33, 89, 240]
    ok = good == total and complete
    record(5, "unicyclic unfolding", ok, f"{good}/{total} graphs on <= 9 vertices (enumeration complete: {complete})")
    assert ok


def test_criterion_06_unbounded_end_to_end():
    ns = [256, 512, 1024]
    edges, verified, slowest, fired = [], 0, 0.0, 0
    for n in ns:
        host = build_unbounded(n, 2)
        edges.append(host.edge_count())
        for s in range(50):
            h = gen_union_unicyclic(n, 2, 1000 * n + s)
            t0 = time.perf_counter()
            try:
                emb = embed_unbounded(h, host)
            except AssertionError:
                fired += 1
                continue
            slowest = max(slowest, time.perf_counter() - t0)
            ok_phases = all(bucket_bound_holds(sz, n, host.m, i) for i, sz in enumerate(emb.phase_max, 1))
            verified += verify_embedding(h, host, emb) and ok_phases
    exponent = fitted_exponent(ns, edges)
    ok = verified == 150 and fired == 0 and slowest < 30 and exponent <= 5 / 3 + 0.05
    record(6, "unbounded-density host", ok,
           f"{verified}/150 verified, bucket assertion fired {fired}x, slowest {slowest:.2f}s, "
           f"edge exponent {exponent:.3f} (limit {5 / 3 + 0.05:.3f})")
    assert ok


def test_criterion_07_expander_certification():
    certified, walk_ok, lams = 0, 0, []
    samples = 20000
    for trial in range(20):
        try:
            exp = make_expander(1000, 16, 7000 + trial, retries=20)
        except ValueError:
            continue
        lams.append(exp.lambda_hat)
        certified += exp.lambda_hat <= 12
        fine = True
        for steps in (2, 4, 8):
            counts = walk_endpoint_counts(exp, 0, steps, samples, seed=trial * 10 + steps)
            p = walk_bound(exp, steps)
            fine &= counts.max() / samples <= p + 3 * math.sqrt(p * (1 - p) / samples)
        walk_ok += fine
    ok = certified >= 19 and walk_ok == len(lams)
    record(7, "expander certification", ok,
           f"{certified}/20 with lambda <= 12 (max {max(lams, default=float('nan')):.3f}), "
           f"walk bound held on {walk_ok}/{len(lams)}")
    assert ok


def test_criterion_08_integer_end_to_end():
    host = build_integer(2000, 2, 4)
    success = verified = fired = 0
    for s in range(20):
        h = gen_bounded_degree(2000, 2, 4, 800 + s)
        try:
            emb = embed_integer(h, host, seed=s)
        except AssertionError:
            fired += 1
            continue
        except EmbeddingError:
            continue
        success += 1
        caps_ok = all(sz <= bucket_cap(2000, 2, i) for i, sz in enumerate(emb.phase_max, 1))
        verified += verify_embedding(h, host, emb) and caps_ok
    ok = success >= 18 and verified == success and fired == 0
    record(8, "bounded-degree integer-density host", ok,
           f"{success}/20 embedded, {verified} verified, bucket assertion fired {fired}x (m={host.m}, t={host.expander.t})")
    assert ok


def test_criterion_09_rational_end_to_end():
    host = build_rational(4096, 3, 2, 3)
    trials = 20
    success = verified = 0
    for s in range(trials):
        h = gen_lift(complete_graph(4), 4096, 900 + s)
        try:
            emb = embed_rational(h, host, seed=s, retry_cap=50)
        except EmbeddingError:
            continue
        success += 1
        within = all(sz <= phase_bound(4096, 3, i) for i, sz in enumerate(emb.phase_max, 1))
        verified += verify_embedding(h, host, emb) and within
    ok = success >= 0.8 * trials and verified == success
    record(9, "rational-density host on K4 lifts", ok,
           f"{success}/{trials} embedded within 50 draws per phase, {verified} verified with per-phase bounds")
    assert ok


def test_criterion_10_lower_bound():
    k4 = complete_graph(4)
    exact = lower_bound(k4, 10**6).bound_exact == Fraction(10**8, 36)
    n = 10**4
    b = lower_bound(k4, n).bound
    below = check_counting_inequality(k4, n, math.ceil(b) - 1).sufficient is False
    above = check_counting_inequality(k4, n, n * n).sufficient is True
    lifts = lift_ok = 0
    for f in (complete_graph(3), k4):
        for size in range(f.n, 61, f.n):
            for seed in range(3):
                lifts += 1
                lift_ok += density(gen_lift(f, size, seed)).density == density(f).density
    ok = exact and below and above and lift_ok == lifts
    record(10, "lower bound and lifts", ok,
           f"exact closed form {exact}, insufficient below bound {below}, sufficient at n^2 {above}, "
           f"lift densities {lift_ok}/{lifts}")
    assert ok
