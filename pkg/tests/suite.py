"""Seeded random corpora shared by the acceptance and property tests.

Every corpus is deterministic and computed once per session.  Each entry is a
plain dict of measured facts so the acceptance tests only aggregate.
"""
from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import replace
from functools import lru_cache

from kplanar import algo
from kplanar.errors import GenerationFailed, KPlanarError
from kplanar.gen import GenConfig, gen_random_kplane
from kplanar.geometry import brute_force_crossings
from kplanar.ingest import ingest_geometric
from kplanar.lens import SHARED, find_lens, lens_rank_key, oracle_lenses
from kplanar.model import (
    build_initial_state,
    materialize_planarization,
    measures,
    network_problems,
    pair_crossing_counts,
    total_crossings,
    validate_state,
)

CORPUS_A_SIZE = 1000
CORPUS_B_SIZE = 1000
SCALING_NS = (50, 100, 200, 400)
SCALING_SEEDS = 3
OPS_DRAWINGS = 300


def _skewed(i: int, lo: int, hi: int) -> int:
    """Deterministic size in [lo, hi], skewed towards lo."""
    u = (i * 0.6180339887498949) % 1.0
    return lo + int((hi - lo) * u * u)


def density(n: int, k: int) -> int:
    return int(n * min(2.0, 0.9 + 0.25 * k))


def corpus_a_configs():
    for i in range(CORPUS_A_SIZE):
        k = 1 + i % 6
        n = _skewed(i, 6, 100)
        yield GenConfig(n, density(n, k), k, seed=100_000 + i)


def corpus_b_configs():
    for i in range(CORPUS_B_SIZE):
        n = _skewed(i, 8, 200)
        gadgets = 0
        if i % 3 == 0 and n >= 30:
            gadgets = min(1 + n // 60, n // 20)
        m = max(int(n * (1.4 + 0.2 * (i % 4))), 10 * gadgets)
        yield GenConfig(n, m, 4, seed=200_000 + i, gadgets=gadgets)


def generate(cfg: GenConfig):
    """Drawing for cfg; lowers m by 10% steps when the target is too dense to realize."""
    while True:
        try:
            return cfg, gen_random_kplane(cfg)
        except GenerationFailed:
            if cfg.m <= 1:
                raise
            cfg = replace(cfg, m=max(int(cfg.m * 0.9), 1), max_attempts=0)


def materialized_simple(state) -> bool:
    """Simplicity read off the materialized planarization, independent of the disk census."""
    net = materialize_planarization(state)
    if network_problems(net):
        return False
    ends = net.graph.edges
    seen = Counter()
    for node in net.nodes:
        if node.edges is None:
            continue
        a, b = node.edges
        if a == b or set(ends[a]) & set(ends[b]):
            return False
        seen[a, b] += 1
    return all(c == 1 for c in seen.values())


def lens_oracle_ok(state) -> tuple[int, int]:
    """(checked pairs, pairs where find_lens is not an oracle lens)."""
    oracle = oracle_lenses(state)
    checked = bad = 0
    for a, b in state.multi_pairs():
        ln = find_lens(state, a, b)
        checked += 1
        if ln is None or lens_rank_key(state, ln) not in oracle:
            bad += 1
    return checked, bad


def run_a(cfg: GenConfig) -> dict:
    cfg, gd = generate(cfg)
    st = build_initial_state(ingest_geometric(gd))
    bf = brute_force_crossings(gd)
    rec = {"n": cfg.n, "m": cfg.m, "k": cfg.k, "seed": cfg.seed}
    rec["ingest_ok"] = dict(pair_crossing_counts(st)) == {p: c for p, c in bf.items() if p[0] != p[1]} and all(
        p[0] != p[1] for p in bf
    )
    rec["lens_pairs"], rec["lens_bad"] = lens_oracle_ok(st)
    rec["max_x_before"] = measures(st).max_crossings
    t0 = time.perf_counter()
    try:
        out, trace = algo.algorithm1(st.copy(), cfg.k)
    except KPlanarError as exc:
        rec["error"] = f"{type(exc).__name__}: {exc}"
        return rec
    rec["seconds"] = time.perf_counter() - t0
    rec["iterations"] = len(trace.steps)
    rec["simple"] = materialized_simple(out)
    rec["valid"] = validate_state(out).ok
    rec["max_x"] = measures(out).max_crossings
    rec["f_bound"] = algo.f_bound(cfg.k)
    prev = (sum(len(r) for r in st.routes.values()), total_crossings(st))
    monotone = True
    max_len = 0
    for step in trace.steps:
        cur = (step.total_length_after, step.total_crossings_after)
        monotone &= cur < prev
        prev = cur
        max_len = max(max_len, step.max_length_after)
    rec["monotone"] = monotone
    rec["max_length"] = max_len
    if cfg.k <= 3:
        small, _ = algo.simplify_small_k(st.copy(), cfg.k)
        rec["small_k_max_x"] = measures(small).max_crossings
        rec["small_k_simple"] = materialized_simple(small)
    diag = algo.neighborhood_diagnostics(out, cfg.k)
    rec["n_gamma_max"] = max((d.n_gamma for d in diag.rows), default=0)
    rec["n_gamma_bound"] = 4 * 3 ** (cfg.k - 1)
    rec["n_ok"] = diag.n_ok
    return rec


def run_b(cfg: GenConfig) -> dict:
    cfg, gd = generate(cfg)
    st = build_initial_state(ingest_geometric(gd))
    rec = {"n": cfg.n, "m": cfg.m, "gadgets": cfg.gadgets, "seed": cfg.seed}
    rec["lens_pairs"], rec["lens_bad"] = lens_oracle_ok(st)
    t0 = time.perf_counter()
    try:
        out, trace = algo.algorithm2(st.copy())
    except KPlanarError as exc:
        rec["error"] = f"{type(exc).__name__}: {exc}"
        return rec
    rec["seconds"] = time.perf_counter() - t0
    rec["ops"] = len(trace.phase1) + len(trace.phase2) + len(trace.phase3)
    rec["phase_ops"] = Counter(f"{ph}:{r.op}" for ph, recs in (("1", trace.phase1), ("2", trace.phase2), ("3", trace.phase3)) for r in recs)
    p1 = algo.phase1_report(trace.d1)
    rec["p1_four_plane"] = p1["max_crossings"] <= 4
    rec["p1_only_13"] = set(p1["classes"]) <= {"one-three"}
    rec["p1_common"] = p1["max_common_points"] <= 2
    rep = algo.phase2_report(trace.d2, trace.log)
    rec["p2"] = rep
    rec["p2_ok"] = rep.ok
    rec["simple"] = materialized_simple(out)
    rec["valid"] = validate_state(out).ok
    rec["max_x"] = measures(out).max_crossings
    rec["no_lens"] = not oracle_lenses(out)
    return rec


@lru_cache(maxsize=None)
def corpus_a() -> tuple:
    return tuple(run_a(cfg) for cfg in corpus_a_configs())


@lru_cache(maxsize=None)
def corpus_b() -> tuple:
    return tuple(run_b(cfg) for cfg in corpus_b_configs())


@lru_cache(maxsize=None)
def scaling() -> tuple:
    """(n, operations, seconds) for Algorithm 2 on 4-plane drawings of growing size."""
    rows = []
    for n in SCALING_NS:
        for s in range(SCALING_SEEDS):
            cfg = GenConfig(n, 2 * n, 4, seed=300_000 + 10 * n + s, gadgets=n // 50)
            cfg, gd = generate(cfg)
            st = build_initial_state(ingest_geometric(gd))
            t0 = time.perf_counter()
            out, trace = algo.algorithm2(st)
            secs = time.perf_counter() - t0
            rows.append((n, len(trace.phase1) + len(trace.phase2) + len(trace.phase3), secs))
    return tuple(rows)


def loglog_slope(xs, ys) -> float:
    lx = [math.log(x) for x in xs]
    ly = [math.log(y) for y in ys]
    mx, my = sum(lx) / len(lx), sum(ly) / len(ly)
    return sum((a - mx) * (b - my) for a, b in zip(lx, ly)) / sum((a - mx) ** 2 for a in lx)


def ops_configs():
    for i in range(OPS_DRAWINGS):
        k = 1 + i % 6
        n = 8 + i % 30
        gadgets = 1 if i % 5 == 4 and n >= 20 else 0
        yield GenConfig(n, max(density(n, k), 10 * gadgets), max(k, 4) if gadgets else k, seed=400_000 + i, gadgets=gadgets)


def _lens_pairs(state) -> Counter:
    return Counter((key[0], key[1]) for key in oracle_lenses(state))


def _max_common(state) -> int:
    ends = state.network.graph.edges
    return max(
        (c + len(set(ends[a]) & set(ends[b])) for (a, b), c in pair_crossing_counts(state).items()),
        default=0,
    )


@lru_cache(maxsize=None)
def operation_contracts() -> Counter:
    """Apply every applicable surgery to every lens of the random drawings and tally contract checks."""
    from kplanar import ops
    from kplanar.lens import QUASI_ZERO, ZERO

    stats = Counter()
    for cfg in ops_configs():
        cfg, gd = generate(cfg)
        st = build_initial_state(ingest_geometric(gd))
        t0 = total_crossings(st)
        pc0 = pair_crossing_counts(st)
        le2 = _max_common(st) <= 2
        lp0 = _lens_pairs(st) if le2 else None
        for ln in algo.all_lenses(st):
            s = ops.swap(st.copy(), ln)
            stats["swap"] += 1
            stats["swap_decrease"] += total_crossings(s) <= t0 - 1
            stats["swap_valid"] += validate_state(s, euler=False).ok
            if ln.kind == "independent":
                x_e = len(st.crossings_of(ln.e))
                expect = x_e - 2 + (ln.x_f - ln.x_e)
                exch = ops.swap(st.copy(), ln, remove_loops=False)
                stats["swap_indep"] += 1
                stats["swap_exchange_exact"] += len(exch.crossings_of(ln.e)) == expect
                got = len(s.crossings_of(ln.e))
                stats["swap_full_exact"] += got == expect
                stats["swap_full_at_most"] += got <= expect
            if ln.cls.tag == ZERO:
                applied = [("zero", ops.reroute(st.copy(), ln))]
            elif ln.cls.tag == QUASI_ZERO:
                c = ln.cls
                applied = [("quasi", ops.quasi_zero_reroute(st.copy(), ln, c.h, c.gamma, c.s))]
            else:
                applied = []
            for tag, s2 in applied:
                stats[tag] += 1
                stats[tag + "_valid"] += validate_state(s2, euler=False).ok
                pc1 = pair_crossing_counts(s2)
                stats[tag + "_no_pair_increase"] += all(c <= pc0.get(p, 0) for p, c in pc1.items())
                if le2:
                    stats[tag + "_le2"] += 1
                    lp1 = _lens_pairs(s2)
                    stats[tag + "_le2_no_new_lens"] += all(c <= lp0.get(p, 0) for p, c in lp1.items())
    return stats


__all__ = [
    "GOLDEN_FIXTURES",
    "golden",
    "SHARED",
    "corpus_a",
    "corpus_b",
    "loglog_slope",
    "materialized_simple",
    "operation_contracts",
    "scaling",
]


GOLDEN_FIXTURES = ("F1", "F2", "F3", "F4")


def golden(name: str) -> dict:
    """End-to-end record for a fixture: both algorithms' traces and final measures."""
    from kplanar import fixtures

    st = build_initial_state(ingest_geometric(fixtures.ALL[name]()))
    k = max(1, measures(st).max_crossings)
    s1, t1 = algo.algorithm1(st.copy(), k)
    s2, t2 = algo.algorithm2(st.copy())
    m1, m2 = measures(s1), measures(s2)
    return {
        "fixture": name,
        "k": k,
        "initial": {"total_crossings": total_crossings(st), "crossings": {str(e): x for e, x in sorted(measures(st).crossings.items())}},
        "algo1": t1.to_json(),
        "algo1_final": {"total_crossings": m1.total_crossings, "max_crossings": m1.max_crossings},
        "algo2": t2.to_json(),
        "algo2_final": {"total_crossings": m2.total_crossings, "max_crossings": m2.max_crossings},
    }
