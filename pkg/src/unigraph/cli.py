"""Command-line entry point: ``unigraph build|embed|verify|gen|bound|bench``."""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from .bounds import check_counting_inequality, conjectured_order, lower_bound
from .embedders import EmbeddingError, embed, read_embedding, write_embedding
from .generators import find_balanced, gen_bounded_degree, gen_lift, gen_union_unicyclic
from .graph import GraphError, load_graph, save_graph
from .hosts import FAMILIES, ConstructionParams, build_host, load_host, save_host
from .verify import embedding_problems

DEFAULT_DEGREE = {"integer": 4, "rational": 3}


def thread_cap() -> int:
    raw = os.environ.get("UNIGRAPH_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise SystemExit(f"UNIGRAPH_THREADS must be an integer, got {raw!r}")


def _density(text: str) -> Fraction:
    try:
        d = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad density {text!r}; expected A or A/B")
    if d <= 0:
        raise argparse.ArgumentTypeError("density must be positive")
    return d


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def cmd_build(args) -> int:
    params = ConstructionParams(seed=args.seed)
    host = build_host(args.family, args.n, args.d, args.D, params)
    save_host(host, args.out)
    print(f"{host.family} host: m={host.m} dim={host.dim} blowup={host.blowup_size} "
          f"apex={host.apex_size} vertices={host.vertex_count} edges={host.edge_count()}")
    if args.materialize:
        save_graph(host.materialize(), f"{args.out}.graph")
        print(f"materialized graph written to {args.out}.graph")
    return 0


def cmd_embed(args) -> int:
    host = load_host(args.host)
    h = load_graph(args.input)
    t0 = time.perf_counter()
    emb = embed(h, host, seed=args.seed, retries=args.retries)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        write_embedding(emb, fh)
    print(f"embedded {h.n} vertices in {time.perf_counter() - t0:.2f}s; phase maxima {list(emb.phase_max)}")
    return 0


def cmd_verify(args) -> int:
    host = load_host(args.host)
    h = load_graph(args.input)
    with open(args.embedding, encoding="utf-8") as fh:
        emb = read_embedding(fh)
    if emb.host_hash != host.descriptor_hash():
        print("warning: embedding was produced for a different host descriptor", file=sys.stderr)
    try:
        problems = embedding_problems(h, host, emb)
    except ValueError as exc:
        print(f"invalid: {exc}")
        return 1
    if problems:
        for p in problems:
            print(f"invalid: {p}")
        return 1
    print("valid")
    return 0


def cmd_gen(args) -> int:
    if args.kind == "unicyclic-union":
        g = gen_union_unicyclic(args.n, int(args.d or 1), args.seed)
    elif args.kind == "bounded-degree":
        g = gen_bounded_degree(args.n, int(args.d or 1), args.D or 4, args.seed)
    else:
        if not args.base:
            raise SystemExit("gen --kind lift needs --base F.graph")
        g = gen_lift(load_graph(args.base), args.n, args.seed)
    save_graph(g, args.out)
    print(f"{args.kind}: {g.n} vertices, {g.edge_count} edges")
    return 0


def cmd_bound(args) -> int:
    f = load_graph(args.base)
    rep = lower_bound(f, args.n)
    exact = f" (exactly {rep.bound_exact})" if rep.bound_exact is not None else ""
    print(f"m(F) = {rep.m_F}")
    print(f"alpha = {rep.alpha}, D = {rep.max_degree}")
    print(f"lower bound on host edges: {rep.bound:.6g}{exact}")
    print(f"conjectured sufficient order n^(2-1/m(F)) = {conjectured_order(args.n, rep.m_F):.6g} (open)")
    if args.M is not None:
        rep = check_counting_inequality(f, args.n, args.M)
        verdict = "passes" if rep.sufficient else "fails"
        print(f"M = {args.M}: log LHS = {rep.counting_lhs_log:.6g}, log RHS = {rep.counting_rhs_log:.6g}; "
              f"{verdict} the counting condition")
    return 0


def _bench_guest(family: str, n: int, d: Fraction, D: int, seed: int):
    if family == "unbounded":
        return gen_union_unicyclic(n, math.ceil(d), seed)
    if family == "integer":
        return gen_bounded_degree(n, int(d), D, seed)
    base = find_balanced(d.numerator, d.denominator, 8)
    return gen_lift(base, n, seed)


def _bench_one(job) -> tuple[bool, float]:
    family, host, n, d, D, seed = job
    h = _bench_guest(family, n, d, D, seed)
    t0 = time.perf_counter()
    try:
        emb = embed(h, host, seed=seed)
        ok = not embedding_problems(h, host, emb, limit=1)
    except EmbeddingError:
        ok = False
    return ok, time.perf_counter() - t0


def fitted_exponent(ns, es) -> float:
    """Least-squares slope of ``log e`` against ``log n``."""
    if len(ns) < 2:
        return float("nan")
    return float(np.polyfit(np.log(ns), np.log(es), 1)[0])


def cmd_bench(args) -> int:
    D = args.D or DEFAULT_DEGREE.get(args.family)
    params = ConstructionParams(seed=args.seed)
    seeds = np.random.SeedSequence(args.seed).generate_state(args.samples).tolist()
    rows = []
    workers = thread_cap()
    print("n\tedges\texponent\tsuccess\tmean_time_s")
    for n in args.n_list:
        host = build_host(args.family, n, args.d, D, params)
        jobs = [(args.family, host, n, args.d, D, s) for s in seeds]
        if workers > 1:
            with ProcessPoolExecutor(workers) as pool:
                results = list(pool.map(_bench_one, jobs))
        else:
            results = [_bench_one(j) for j in jobs]
        rows.append((n, host.edge_count()))
        exp = fitted_exponent([r[0] for r in rows], [r[1] for r in rows])
        rate = sum(ok for ok, _ in results) / max(1, len(results))
        mean = sum(dt for _, dt in results) / max(1, len(results))
        print(f"{n}\t{host.edge_count()}\t{exp:.4f}\t{rate:.3f}\t{mean:.3f}", flush=True)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unigraph", description="Sparse universal graphs and embedders.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a universal host")
    b.add_argument("--family", choices=FAMILIES, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--d", type=_density, required=True)
    b.add_argument("--D", type=int)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--materialize", action="store_true")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    e = sub.add_parser("embed", help="embed a guest graph into a host")
    e.add_argument("--host", required=True)
    e.add_argument("--input", required=True)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--retries", type=int)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_embed)

    v = sub.add_parser("verify", help="check an embedding against the host edge rule")
    v.add_argument("--host", required=True)
    v.add_argument("--input", required=True)
    v.add_argument("--embedding", required=True)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate a guest graph")
    g.add_argument("--kind", choices=("unicyclic-union", "lift", "bounded-degree"), required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", type=_density)
    g.add_argument("--D", type=int)
    g.add_argument("--base")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    bd = sub.add_parser("bound", help="lower bound for hosts containing all lifts of F")
    bd.add_argument("--base", required=True)
    bd.add_argument("--n", type=int, required=True)
    bd.add_argument("--M", type=int)
    bd.set_defaults(func=cmd_bound)

    bn = sub.add_parser("bench", help="host size and embedding success across n")
    bn.add_argument("--family", choices=FAMILIES, required=True)
    bn.add_argument("--d", type=_density, required=True)
    bn.add_argument("--D", type=int)
    bn.add_argument("--n-list", type=_int_list, required=True)
    bn.add_argument("--samples", type=int, default=5)
    bn.add_argument("--seed", type=int, default=0)
    bn.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, EmbeddingError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
