"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

The lines are printed in the terminal summary (see conftest.py) and also when
this file is run directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import math
import random
import time
from collections import Counter
from functools import lru_cache
from itertools import combinations
from pathlib import Path

import networkx as nx
import pytest

import oracles
from oracles import atlas, automorphism_count, census_oracle, from_nx, pairwise_classes, to_nx
from tinygraph.bounds import chernoff_bound, crossover_report, dense_count_beta, not_tiny_probability
from tinygraph.canon import canonical_certificate, certificate_of_rows, deserialize
from tinygraph.census import (census_induced, census_subgraphs, compose_disconnected,
                              connected_census)
from tinygraph.classes import ladder
from tinygraph.experiments import run_experiment
from tinygraph.generate import unlabeled_graphs
from tinygraph.graph import Graph, complete_graph, cycle_graph, disjoint_union, path_graph, star_graph
from tinygraph.random_models import child_seed, iter_pairs, sample_gnp, transfer_factor
from tinygraph.tinyness import SdParams, check_sd_membership, tau

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
RESULTS: dict[int, tuple[bool, str]] = {}

# frozen from the exhaustive generator and re-derived below by an independent oracle
SPARSE_CONNECTED = {1: 1, 2: 1, 3: 2, 4: 5, 5: 17, 6: 60, 7: 218, 8: 834}
# pilot-frozen outcomes for the committed configs
FROZEN_VIOLATION_FREQUENCY = 0.0
FROZEN_DIVERSITY_MIN = 450
FROZEN_DIVERSITY_OBSERVED = 500


def record(num: int, ok: bool, detail: str) -> None:
    RESULTS[num] = (ok, detail)
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


@lru_cache(maxsize=None)
def report(name: str, workers: int = 1) -> str:
    return run_experiment((CONFIGS / name).read_bytes(), workers)[0]


# 1 ---------------------------------------------------------------------------

def _labeled_class_sizes(n: int) -> Counter:
    """Certificate -> number of labeled graphs on n vertices, via a Gray-code walk over edge sets."""
    pairs = list(iter_pairs(n))
    rows = [0] * n
    sizes = Counter({certificate_of_rows(rows): 1})
    for i in range(1, 1 << len(pairs)):
        a, b = pairs[(i & -i).bit_length() - 1]
        rows[a] ^= 1 << b
        rows[b] ^= 1 << a
        sizes[certificate_of_rows(rows)] += 1
    return sizes


def test_criterion_1_canonization_soundness():
    start = time.perf_counter()
    problems = []
    found = {}
    for n in range(1, 8):
        sizes = _labeled_class_sizes(n)
        assert sum(sizes.values()) == 2 ** (n * (n - 1) // 2)
        reps = atlas(n)
        # pairwise VF2 over the certificate classes' canonical forms
        oracle_classes = pairwise_classes([deserialize(c) for c in sizes])
        expected = {}
        for h in reps:
            expected[canonical_certificate(from_nx(h))] = math.factorial(n) // automorphism_count(h)
        if not (len(sizes) == oracle_classes == len(reps) == len(expected)):
            problems.append(f"n={n}: {len(sizes)} certificates, oracle {oracle_classes}, atlas {len(reps)}")
        if dict(sizes) != expected:
            problems.append(f"n={n}: class sizes differ from n!/|Aut|")
        found[n] = len(sizes)
    # spot-check that random labeled graphs are isomorphic to their certificate's graph
    rng = random.Random(20)
    for _ in range(500):
        g = Graph.from_edges(7, [p for p in iter_pairs(7) if rng.random() < 0.5])
        if not nx.is_isomorphic(to_nx(g), to_nx(deserialize(canonical_certificate(g)))):
            problems.append("certificate graph not isomorphic to its input")
            break
    elapsed = time.perf_counter() - start
    ok = not problems and found[7] == 1044 and elapsed <= 300
    record(1, ok, f"classes n=1..7 {list(found.values())}, {elapsed:.0f}s (limit 300s)"
           + ("; " + "; ".join(problems) if problems else ""))


# 2 ---------------------------------------------------------------------------

def _census_instances():
    out = []
    for i in range(50):
        seed = child_seed(2, "acceptance-census", i)
        rng = random.Random(seed)
        n = rng.randint(4, 10)
        p = rng.choice([0.15, 0.25, 0.35, 0.5])
        out.append((sample_gnp(n, p, seed), min(n, 6)))
    return out


COMPOSE_CASES = [
    (complete_graph(3), complete_graph(3)),
    (path_graph(4), cycle_graph(3), complete_graph(2)),
    (cycle_graph(5), path_graph(3)),
    (star_graph(3), star_graph(3)),
    (complete_graph(4), path_graph(2), path_graph(2)),
    (cycle_graph(4), cycle_graph(4)),
    (path_graph(5), Graph.from_edges(1, [])),
    (complete_graph(3), path_graph(3), Graph.from_edges(2, [])),
    (cycle_graph(6), complete_graph(2)),
    (star_graph(4), cycle_graph(3)),
]


def test_criterion_2_census_oracle_equivalence():
    start = time.perf_counter()
    bad = []
    for idx, (g, k_max) in enumerate(_census_instances()):
        tables = {"induced": census_induced(g, k_max), "subgraph": census_subgraphs(g, k_max),
                  "connected-subgraph": connected_census(g, k_max, "connected-subgraph"),
                  "connected-induced": connected_census(g, k_max, "connected-induced")}
        for mode, table in tables.items():
            ref = census_oracle(g, k_max, mode)
            for k in range(1, k_max + 1):
                if table.count(k) != len(ref[k]):
                    bad.append(f"graph {idx} {mode} k={k}: {table.count(k)} vs {len(ref[k])}")
    for idx, parts in enumerate(COMPOSE_CASES):
        g = disjoint_union(*parts)
        k_top = min(g.n, 6)
        conn = connected_census(g, k_top, "connected-subgraph")
        sub = census_subgraphs(g, k_top)
        for k in range(1, k_top + 1):
            if compose_disconnected(conn, k) != sub.count(k):
                bad.append(f"compose case {idx} k={k}")
    record(2, not bad, f"50 graphs x 4 modes, 10 compose instances, {time.perf_counter() - start:.0f}s"
           + ("; " + "; ".join(bad[:5]) if bad else ""))


# 3 ---------------------------------------------------------------------------

def _sparse_connected_oracle(k: int) -> int:
    cap = math.floor(tau(k))
    if k <= 7:
        return sum(1 for h in atlas(k) if h.number_of_edges() <= cap and nx.is_connected(h))
    # grow from the non-isomorphic trees, one edge at a time, deduplicating with VF2
    level = list(nx.nonisomorphic_trees(k))
    total = len(level)
    for _ in range(k - 1, cap):
        buckets: dict[str, list[nx.Graph]] = {}
        nxt = []
        for h in level:
            for a, b in combinations(range(k), 2):
                if h.has_edge(a, b):
                    continue
                x = h.copy()
                x.add_edge(a, b)
                key = nx.weisfeiler_lehman_graph_hash(x)
                bucket = buckets.setdefault(key, [])
                if not any(nx.is_isomorphic(x, y) for y in bucket):
                    bucket.append(x)
                    nxt.append(x)
        level = nxt
        total += len(level)
    return total


def test_criterion_3_sparse_connected_counts():
    start = time.perf_counter()
    gen, orc = {}, {}
    for k in range(1, 9):
        gen[k] = len(unlabeled_graphs(k, math.floor(tau(k)), connected=True))
        orc[k] = _sparse_connected_oracle(k)
    ok = (gen == orc == SPARSE_CONNECTED and all(gen[k] < 100**k for k in gen)
          and time.perf_counter() - start <= 600)
    record(3, ok, f"counts {list(gen.values())}, oracle {list(orc.values())}, all < 100^k, "
                  f"{time.perf_counter() - start:.0f}s")


# 4 ---------------------------------------------------------------------------

def test_criterion_4_bound_calculators():
    checks = {
        "chernoff": abs(chernoff_bound(10, 5) - 0.68497) <= 1e-4
        and math.isclose(chernoff_bound(10, 5), oracles.chernoff(10, 5), rel_tol=1e-12),
        "transfer": abs(transfer_factor(10, 0.5) - 47.958) <= 1e-3
        and math.isclose(transfer_factor(10, 0.5), oracles.transfer(10, 0.5), rel_tol=1e-12),
        "beta": abs(dense_count_beta(1) / 5.236e6 - 1) <= 1e-3
        and math.isclose(dense_count_beta(1), oracles.beta(1), rel_tol=1e-12),
        "not_tiny": not_tiny_probability(10**6, 4).value == 0.4 == oracles.not_tiny(10**6, 4),
        "ladder": ladder(5).levels == [1, 3, 6, 12, 32, 287] == oracles.ladder_levels(5),
    }
    record(4, all(checks.values()), ", ".join(f"{k}={'ok' if v else 'bad'}" for k, v in checks.items()))


# 5 ---------------------------------------------------------------------------

def _monotone(xs):
    finite = [x for x in xs if x != float("-inf")]
    return all(a <= b for a, b in zip(finite, finite[1:])) and \
        xs[len(xs) - len(finite):] == finite


def test_criterion_5_crossover():
    parts, ok = [], True
    for s in (1, 2):
        rep = crossover_report(s)
        n = rep.crossover_n
        ver = rep.verification.get(str(n), {}) if n else {}
        good = (n is not None and ver.get("available_exceeds") is True
                and _monotone(rep.representable) and _monotone(rep.available))
        ok &= good
        parts.append(f"s={s}: n={n}, exact={ver.get('representable_exact')}")
    record(5, ok, "; ".join(parts))


# 6 ---------------------------------------------------------------------------

def _max_edges_all_k(g: Graph) -> list[int]:
    n = g.n
    e = [0] * (1 << n)
    best = [0] * (n + 1)
    for mask in range(1, 1 << n):
        low = mask & -mask
        v = low.bit_length() - 1
        rest = mask ^ low
        e[mask] = e[rest] + (g.rows[v] & rest).bit_count()
        size = mask.bit_count()
        if e[mask] > best[size]:
            best[size] = e[mask]
    return best


def test_criterion_6_tinyness_checker_soundness():
    k4 = check_sd_membership(complete_graph(4), SdParams(1, desk_k0=4))
    first = k4.outcome == "violated" and k4.edges == 6 and 6 > tau(4) > 5.885
    bad = []
    violated = holds = 0
    for i in range(200):
        seed = child_seed(6, "acceptance-fuzz", i)
        rng = random.Random(seed)
        n = rng.randint(3, 14)
        g = sample_gnp(n, rng.choice([0.2, 0.35, 0.5, 0.7]), seed)
        k0 = rng.randint(2, 6)
        v = check_sd_membership(g, SdParams(rng.choice([1, 2, 4]), desk_k0=k0))
        best = _max_edges_all_k(g)
        if v.outcome == "violated":
            violated += 1
            recount = sum((g.rows[a] >> b) & 1 for a, b in combinations(v.witness, 2))
            if not (recount == v.edges > tau(len(v.witness))):
                bad.append(f"case {i}: witness does not re-verify")
        elif v.outcome == "holds":
            holds += 1
            if any(best[k] > tau(k) for k in range(k0, n + 1)):
                bad.append(f"case {i}: holds contradicted")
        else:
            bad.append(f"case {i}: {v.outcome}")
    record(6, first and not bad,
           f"K4 edges={k4.edges} > 5.885; fuzz 200 cases: {violated} violated, {holds} holds"
           + ("; " + "; ".join(bad[:5]) if bad else ""))


# 7 ---------------------------------------------------------------------------

def test_criterion_7_tinyness_profile():
    start = time.perf_counter()
    res = json.loads(report("tinyness_profile.json"))["results"]
    elapsed = time.perf_counter() - start
    ok = (res["violation_frequency"] == FROZEN_VIOLATION_FREQUENCY
          and res["accepting_small_k_checks_pass"] and res["n"] == 60 and res["m"] == 30
          and len(res["replicates"]) == 20 and elapsed <= 900)
    record(7, ok, f"violation frequency {res['violation_frequency']} (frozen "
                  f"{FROZEN_VIOLATION_FREQUENCY}), small-k checks pass="
                  f"{res['accepting_small_k_checks_pass']}, {elapsed:.0f}s")


# 8 ---------------------------------------------------------------------------

def test_criterion_8_diversity():
    div = json.loads(report("diversity.json"))["results"]
    dense = [p for p in json.loads(report("threshold.json"))["results"]["points"] if p["pn"] == 20.0]
    distinct = dense[0]["diversity"]["distinct"] if dense else None
    ok = (div["distinct"] >= FROZEN_DIVERSITY_MIN and div["distinct"] == FROZEN_DIVERSITY_OBSERVED
          and div["n"] == 36 and div["k"] == 15 and distinct == 300)
    record(8, ok, f"n=36 k=15: {div['distinct']}/500 distinct (>= {FROZEN_DIVERSITY_MIN}); "
                  f"n=2000 k=200: {distinct}/300 distinct")


# 9 ---------------------------------------------------------------------------

def test_criterion_9_sparse_components():
    pts = [p for p in json.loads(report("threshold.json"))["results"]["points"] if p["pn"] == 0.5]
    p = pts[0]
    ok = p["trees_or_unicyclic"] and p["max_component"] <= 30 and p["max_cycle_rank"] <= 1
    record(9, ok, f"p=0.5/n: max component {p['max_component']}, max cycle rank "
                  f"{p['max_cycle_rank']}, {p['components']} components")


# 10 --------------------------------------------------------------------------

def test_criterion_10_determinism():
    names = sorted(x.name for x in CONFIGS.glob("*.json"))
    bad = []
    for name in names:
        raw = (CONFIGS / name).read_bytes()
        first = report(name)
        if run_experiment(raw)[0] != first:
            bad.append(f"{name}: rerun differs")
        if run_experiment(raw, workers=4) != run_experiment(raw, workers=1):
            bad.append(f"{name}: 4 workers differ from serial")
    record(10, not bad, f"{len(names)} configs rerun and run with 4 workers"
           + ("; " + "; ".join(bad) if bad else ""))


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
