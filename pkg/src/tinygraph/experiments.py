"""Configured, seed-deterministic experiment runs producing JSON reports and CSV sweeps.

A config is a JSON object ``{"experiment": kind, "seed": int, "params": {...}}``.
Reports embed the SHA-256 of the config bytes, the seeds actually used, the
package version and a plain-language statement of each claim under test.
Replicates derive their seeds with :func:`child_seed`, so a run with several
workers produces the same bytes as a serial run.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from typing import Any, Callable

from . import __version__, config
from .bounds import (crossover_report, fmt, induced_diversity_lower_bound,
                     isomorphic_pair_union_bound, not_tiny_probability, tiny_constant)
from .census import connected_census, sampled_induced_diversity
from .classes import (LevelSet, build_mon_closure_census, gamma_for, is_t_sparse, k_level, ladder,
                      sample_xd_graph)
from .graph import Graph, complete_graph, component_masks
from .parallel import ordered_map
from .random_models import child_seed, edges_for_degree, sample_gnm, sample_gnp
from .tinyness import certify_cyt_tiny, cycle_rank, fit_tinyness, ln2_cut

CSV_SCHEMA = "v1"

CLAIMS = {
    "tinyness-profile": ("a G(n, ceil(d(n-1)/2)) graph fails to be monotone (c, S_d, ln^2)-tiny "
                         "with probability below 200 sqrt(d/n)"),
    "threshold": ("below p = 1/n every component of G(n,p) is a tree or unicyclic w.h.p., so s(G) is "
                  "2^o(n); above C/n the induced k-subgraphs are pairwise non-isomorphic "
                  "often enough that i(G) grows exponentially"),
    "diversity": ("w.h.p. G(n, d/n) has i_k > (delta (n/k)^(delta/2))^k for "
                  "n/sqrt(d) <= k <= sqrt(delta) n"),
    "crossover": ("2^(u^2) C(C(u,n),k_n) collections fit in n^s-vertex universal graphs, fewer than "
                  "the (X/k_n)^k_n collections of k_n tiny graphs once n is large"),
    "ladder-class": ("the monotone closure of level sets of size at most gamma^(ln^2 l) on a ln^2-sparse "
                     "ladder of tiny graphs is a tiny class"),
}

KINDS = tuple(CLAIMS)


class ConfigError(ValueError):
    pass


def load_config(raw: bytes) -> tuple[dict, str]:
    """Parse config bytes; returns the object and the SHA-256 of the bytes."""
    try:
        cfg = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    kind = cfg.get("experiment")
    if kind not in KINDS:
        raise ConfigError(f"unknown experiment {kind!r}; expected one of {', '.join(KINDS)}")
    if not isinstance(cfg.get("seed", 0), int) or cfg.get("seed", 0) < 0:
        raise ConfigError("seed must be a non-negative integer")
    if not isinstance(cfg.get("params", {}), dict):
        raise ConfigError("params must be an object")
    return cfg, hashlib.sha256(raw).hexdigest()


def config_bytes(cfg: dict) -> bytes:
    return json.dumps(cfg, sort_keys=True).encode()


def _param(params: dict, key: str, default: Any = None, kind: Callable = None):
    if key not in params:
        if default is None:
            raise ConfigError(f"missing parameter {key!r}")
        return default
    val = params[key]
    if kind is not None:
        try:
            val = kind(val)
        except (TypeError, ValueError):
            raise ConfigError(f"parameter {key!r} has the wrong type") from None
    return val


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {CSV_SCHEMA}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


# tinyness profile -----------------------------------------------------------

def _tiny_replicate(task) -> dict:
    n, d, c, desk_k0, k_fit, budget, bnb_budget, seed = task
    g = sample_gnm(n, edges_for_degree(n, d), seed)
    v = certify_cyt_tiny(g, c, d, budget, desk_k0, bnb_budget)
    prof = fit_tinyness(connected_census(g, min(k_fit, n), "connected-subgraph", budget))
    cond1 = v.detail.get("cond1", {}).get("outcome")
    return {"seed": seed, "edges": g.edge_count, "outcome": v.outcome, "method": v.method,
            "k": v.k, "k_cap": v.detail.get("k_cap"),
            "coverage_complete": v.detail.get("coverage_complete", False),
            "condition": v.detail.get("condition"), "small_k_density": cond1,
            "c_min": prof.c_min, "c_min_k": prof.argmax_k}


def run_tinyness_profile(cfg: dict, workers: int = 1) -> tuple[dict, str]:
    p = cfg.get("params", {})
    n = _param(p, "n", kind=int)
    d = _param(p, "d", kind=float)
    reps = _param(p, "replicates", 20, int)
    c = float(p["c"]) if "c" in p else tiny_constant(d)
    desk_k0 = p.get("desk_k0")
    k_fit = _param(p, "k_fit", 6, int)
    budget = _param(p, "budget", config.CERTIFY_BUDGET, int)
    bnb_budget = _param(p, "bnb_budget", config.BNB_BUDGET, int)
    seed = cfg.get("seed", 0)
    seeds = [child_seed(seed, "tinyness-profile", i) for i in range(reps)]
    tasks = [(n, d, c, desk_k0, k_fit, budget, bnb_budget, s) for s in seeds]
    rows = ordered_map(_tiny_replicate, tasks, workers)
    violated = sum(r["outcome"] == "violated" for r in rows)
    freq = violated / reps if reps else 0.0
    bound = not_tiny_probability(n, d)
    accepting = [r for r in rows if r["outcome"] == "holds"]
    results = {
        "n": n, "d": d, "m": edges_for_degree(n, d), "c": c, "desk_k0": desk_k0,
        "t": ln2_cut(n), "replicates": rows, "violations": violated,
        "inconclusive": sum(r["outcome"] == "inconclusive" for r in rows),
        "violation_frequency": freq,
        "bound": {"value": bound.value, "informative": bound.informative, "raw": bound.raw,
                  "frequency_below_bound": freq <= bound.value if bound.informative else None},
        "accepting_small_k_checks_pass": all(r["small_k_density"] == "holds" for r in accepting),
    }
    header = ["replicate", "seed", "edges", "outcome", "k", "k_cap", "coverage_complete", "c_min"]
    table = [[i, r["seed"], r["edges"], r["outcome"], r["k"], r["k_cap"], r["coverage_complete"],
              r["c_min"]] for i, r in enumerate(rows)]
    return _wrap(cfg, seeds, results), _csv(header, table)


# threshold ------------------------------------------------------------------

def grid_points(spec) -> list[float]:
    """Explicit list, or ``{"start", "stop", "num"}`` with both endpoints included once."""
    if isinstance(spec, list):
        pts = [float(x) for x in spec]
    elif isinstance(spec, dict):
        a, b, num = float(spec["start"]), float(spec["stop"]), int(spec["num"])
        if num < 1:
            raise ConfigError("grid needs num >= 1")
        pts = [a] if num == 1 else [a + (b - a) * i / (num - 1) for i in range(num - 1)] + [b]
    else:
        raise ConfigError("grid must be a list or {start, stop, num}")
    out: list[float] = []
    for x in pts:
        if x not in out:
            out.append(x)
    return out


def _threshold_point(task) -> dict:
    n, pn, seed, k_small, dense_min, k_dense, samples, sample_seed = task
    g = sample_gnp(n, min(1.0, pn / n), seed)
    comps = component_masks(g.rows)
    ranks = [cycle_rank(g.rows, m) for m in comps]
    row: dict[str, Any] = {"pn": pn, "seed": seed, "edges": g.edge_count,
                           "max_component": max((m.bit_count() for m in comps), default=0),
                           "components": len(comps), "max_cycle_rank": max(ranks, default=0),
                           "trees_or_unicyclic": all(r <= 1 for r in ranks)}
    if pn < 1:
        table = connected_census(g, min(k_small, n), "connected-subgraph")
        row["small_k_census"] = {str(k): v for k, v in table.counts().items() if k >= 1}
    if pn >= dense_min:
        k = min(k_dense, n)
        div = sampled_induced_diversity(g, k, samples, sample_seed, max_n=None)
        row["diversity"] = {"k": k, "samples": samples, "distinct": div.distinct,
                            "growth": div.distinct ** (1.0 / k)}
    return row


def run_threshold(cfg: dict, workers: int = 1) -> tuple[dict, str]:
    p = cfg.get("params", {})
    n = _param(p, "n", kind=int)
    grid = grid_points(_param(p, "grid"))
    k_small = _param(p, "k_small", 4, int)
    dense_min = _param(p, "dense_min", 2.0, float)
    k_dense = _param(p, "k", 200, int)
    samples = _param(p, "samples", 300, int)
    seed = cfg.get("seed", 0)
    seeds = [child_seed(seed, "threshold", i) for i in range(len(grid))]
    sseeds = [child_seed(seed, "threshold-samples", i) for i in range(len(grid))]
    tasks = [(n, pn, s, k_small, dense_min, k_dense, samples, ss)
             for pn, s, ss in zip(grid, seeds, sseeds)]
    rows = ordered_map(_threshold_point, tasks, workers)
    results = {"n": n, "grid": grid, "points": rows}
    header = ["pn", "seed", "edges", "max_component", "max_cycle_rank", "trees_or_unicyclic",
              "distinct", "growth"]
    table = [[r["pn"], r["seed"], r["edges"], r["max_component"], r["max_cycle_rank"],
              r["trees_or_unicyclic"], r.get("diversity", {}).get("distinct", ""),
              r.get("diversity", {}).get("growth", "")] for r in rows]
    return _wrap(cfg, seeds + sseeds, results), _csv(header, table)


# diversity ------------------------------------------------------------------

def run_diversity(cfg: dict, workers: int = 1) -> tuple[dict, str]:
    p = cfg.get("params", {})
    n = _param(p, "n", kind=int)
    k = _param(p, "k", kind=int)
    samples = _param(p, "samples", kind=int)
    gseed = _param(p, "graph_seed", cfg.get("seed", 0), int)
    sseed = _param(p, "sample_seed", child_seed(cfg.get("seed", 0), "diversity", 0), int)
    override = p.get("graph")
    if override == "complete":
        g: Graph = complete_graph(n)
        d = None
    elif override is None:
        d = float(p["d"]) if "d" in p else float(_param(p, "p", kind=float)) * n
        g = sample_gnp(n, d / n, gseed)
    else:
        raise ConfigError(f"unknown graph override {override!r}")
    div = sampled_induced_diversity(g, k, samples, sseed, max_n=None)
    results: dict[str, Any] = {"n": n, "k": k, "samples": samples, "edges": g.edge_count,
                               "distinct": div.distinct, "lower_bound_i_k": div.lower_bound,
                               "graph": override or "gnp"}
    if d is not None:
        delta = _param(p, "delta", 0.04, float)
        bound = induced_diversity_lower_bound(n, d, k, delta)
        results["analytic"] = bound.to_json()
        if 0 < d < n:
            results["union_bound_term"] = isomorphic_pair_union_bound(n, d, k, delta).to_json()
        results["d"] = d
    else:
        results["analytic"] = None
    header = ["n", "k", "samples", "distinct", "analytic_log2", "vacuous"]
    a = results["analytic"] or {}
    table = [[n, k, samples, div.distinct, a.get("log2", ""), a.get("vacuous", "")]]
    return _wrap(cfg, [gseed, sseed], results), _csv(header, table)


# crossover ------------------------------------------------------------------

def run_crossover(cfg: dict, workers: int = 1) -> tuple[dict, str]:
    p = cfg.get("params", {})
    s_list = [int(s) for s in _param(p, "s", [1, 2])]
    n_min = _param(p, "n_min", 2, int)
    n_max = _param(p, "n_max", 10**7, int)
    reports = [crossover_report(s, n_min, n_max) for s in s_list]
    results = {"per_s": [r.to_json() for r in reports]}
    header = ["s", "n", "representable_log2", "representable_eq1_log2", "available_log2"]
    table = []
    for r in reports:
        for n, a, b, c in zip(r.ns, r.representable, r.representable_eq1, r.available):
            table.append([r.s, n, fmt(a), fmt(b), fmt(c)])
    return _wrap(cfg, [], results), _csv(header, table)


# ladder class ---------------------------------------------------------------

def run_ladder_class(cfg: dict, workers: int = 1) -> tuple[dict, str]:
    p = cfg.get("params", {})
    if "levels" in p:
        levels = sorted(int(x) for x in p["levels"])
    else:
        levels = ladder(_param(p, "i_max", kind=int)).levels
    per_level = _param(p, "graphs_per_level", 1, int)
    d = _param(p, "d", 1.0, float)
    s = _param(p, "s", 1, int)
    c = float(p["c"]) if "c" in p else tiny_constant(d)
    desk_k0 = p.get("desk_k0")
    n_max = _param(p, "n_max", 4, int)
    max_tries = _param(p, "max_tries", 20, int)
    budget = _param(p, "budget", config.CERTIFY_BUDGET, int)
    seed = cfg.get("seed", 0)
    if not levels:
        return _wrap(cfg, [], {"levels": [], "level_sets": [], "closure": None}), _csv(
            ["k", "count", "alpha_pow_k"], [])
    sparse, pair = is_t_sparse(levels)
    if "gamma" in p:
        gamma = float(p["gamma"])
    else:
        gamma = gamma_for(s, min((l for l in levels if l > 1), default=3))
    sets, info, seeds = [], [], []
    for li, lvl in enumerate(levels):
        graphs = []
        draws = []
        for j in range(per_level):
            sd = child_seed(seed, "ladder-class", li * 1_000_003 + j)
            seeds.append(sd)
            res = sample_xd_graph(lvl, d, c, sd, max_tries, desk_k0, budget)
            draws.append({"seed": sd, "accepted": res.accepted, "tries": res.tries})
            if res.graph is not None:
                graphs.append(res.graph)
        ls = LevelSet(lvl, graphs, k_level(lvl, s))
        sets.append(ls)
        info.append({"level": lvl, "members": len(graphs), "target": ls.target,
                     "shortfall": ls.shortfall, "within_gamma": ls.within_gamma(gamma),
                     "draws": draws})
    closure = build_mon_closure_census(sets, n_max, budget=config.CENSUS_BUDGET, workers=workers,
                                       gamma=gamma, c=c)
    alpha = closure.alpha
    reverified = all(cnt <= alpha**k for k, cnt in closure.counts.items())
    results = {"levels": levels, "t_sparse": sparse, "violating_pair": pair, "gamma": gamma, "c": c,
               "level_sets": info, "closure": closure.to_json(), "alpha_reverified": reverified}
    table = [[k, cnt, alpha**k] for k, cnt in sorted(closure.counts.items())]
    return _wrap(cfg, seeds, results), _csv(["k", "count", "alpha_pow_k"], table)


# dispatch -------------------------------------------------------------------

RUNNERS = {
    "tinyness-profile": run_tinyness_profile,
    "threshold": run_threshold,
    "diversity": run_diversity,
    "crossover": run_crossover,
    "ladder-class": run_ladder_class,
}


def _wrap(cfg: dict, seeds: list[int], results: dict) -> dict:
    return {"experiment": cfg["experiment"], "tool_version": __version__, "seeds": seeds,
            "claim": CLAIMS[cfg["experiment"]], "results": results}


def run_experiment(raw: bytes, workers: int = 1) -> tuple[str, str]:
    """Run the experiment described by config bytes; returns (report JSON text, CSV text)."""
    cfg, digest = load_config(raw)
    report, table = RUNNERS[cfg["experiment"]](cfg, workers)
    report["config_sha256"] = digest
    report["config"] = cfg
    return dumps(report), table


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def _clean(obj):
    if isinstance(obj, float):
        return fmt(obj) if math.isinf(obj) else obj
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(x) for x in obj]
    return obj
