"""Command-line entry point.

Exit status: 0 on success, 2 when a work budget refuses the request, 1 on any
other error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, config
from .bounds import (chernoff_bound, claim4_ratio_check, crossover_report, dense_count_beta,
                     dense_count_beta_log2, induced_diversity_lower_bound,
                     isomorphic_pair_union_bound, not_tiny_probability, small_dense_probability,
                     sparse_connected_count_and_bound)
from .census import census_induced, census_subgraphs, connected_census
from .classes import LevelSet, build_mon_closure_census, is_t_sparse, ladder, sample_xd_graph
from .errors import BudgetExceeded
from .experiments import dumps, run_experiment
from .graph import read_graph6, read_graph6_file, write_graph6_file
from .random_models import ModelSpec, child_seed
from .representability import is_representable, labels_from_universal
from .tinyness import certify_cyt_tiny

MODE_ALIASES = {
    "induced": "induced",
    "subgraph": "subgraph",
    "connected": "connected-subgraph",
    "connected-subgraph": "connected-subgraph",
    "connected-induced": "connected-induced",
}

BOUND_KINDS = ("chernoff", "sparse-count", "small-dense", "dense-count", "not-tiny",
               "diversity", "overlap", "crossover")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _one_graph(path: str):
    graphs = read_graph6_file(path)
    if len(graphs) != 1:
        raise ValueError(f"{path}: expected exactly one graph, found {len(graphs)}")
    return graphs[0]


def _threads(args) -> int:
    return args.threads if getattr(args, "threads", None) else config.default_threads()


def cmd_sample(args) -> None:
    spec = ModelSpec(args.model, args.n, p=args.p, m=args.m)
    write_graph6_file(args.out, [spec.sample(args.seed)])


def cmd_census(args) -> None:
    g = _one_graph(args.inp)
    mode = MODE_ALIASES[args.mode]
    workers = _threads(args)
    if mode == "induced":
        table = census_induced(g, args.kmax, args.budget, workers)
    elif mode == "subgraph":
        table = census_subgraphs(g, args.kmax, args.budget, workers)
    else:
        table = connected_census(g, args.kmax, mode, args.budget, workers)
    _emit(table.dumps() + "\n", args.out)


def cmd_tinyness(args) -> None:
    g = _one_graph(args.inp)
    v = certify_cyt_tiny(g, args.c, args.d, args.budget, args.desk_k0)
    _emit(dumps({"tool_version": __version__, "verdict": v.to_json()}), args.out)


def _kv(pairs: list[str]) -> dict:
    out = {}
    for item in pairs:
        if "=" not in item:
            raise ValueError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k] = json.loads(v) if v[:1] in "[{" else float(v) if any(ch in v for ch in ".eE") else int(v)
    return out


def cmd_bounds(args) -> None:
    p = _kv(args.params or [])
    w = args.which
    if w == "chernoff":
        res = {"value": chernoff_bound(p["mu"], p["t"]),
               "formula": "2 exp(-t^2 / (2 (mu + t/3)))"}
    elif w == "sparse-count":
        sc = sparse_connected_count_and_bound(int(p["k"]))
        res = {"exact": sc.exact, "bound": sc.bound.to_json(),
               "formula": "connected k-vertex graphs with <= k-1+k/ln k edges vs 100^k"}
    elif w == "small-dense":
        res = small_dense_probability(int(p["n"]), p["d"], int(p["t"])).to_json()
    elif w == "dense-count":
        res = {"beta": dense_count_beta(p["d"]), "log2_beta": dense_count_beta_log2(p["d"]),
               "zero_convention": p["d"] == 0, "formula": "2 (e^2 d)^(e^2 d)"}
    elif w == "not-tiny":
        nt = not_tiny_probability(int(p["n"]), p["d"])
        res = {"value": nt.value, "informative": nt.informative, "raw": nt.raw,
               "formula": "200 sqrt(d/n)"}
    elif w == "diversity":
        n, d, k, delta = int(p["n"]), p["d"], int(p["k"]), p["delta"]
        res = induced_diversity_lower_bound(n, d, k, delta).to_json()
        if 0 < d < n:
            res["union_bound_term"] = isomorphic_pair_union_bound(n, d, k, delta).to_json()
    elif w == "overlap":
        res = claim4_ratio_check(int(p["n"]), int(p["k"]), p["delta"]).to_json()
    else:
        res = crossover_report(int(p.get("s", 1)), int(p.get("n_min", 2)),
                               int(p.get("n_max", 10**7))).to_json()
    _emit(dumps({"which": w, "params": p, "tool_version": __version__, "result": res}), args.out)


def cmd_ladder(args) -> None:
    spec = ladder(args.imax)
    ok, pair = is_t_sparse(spec.levels)
    out = spec.to_json()
    out.update(t_sparse=ok, violating_pair=[str(x) for x in pair] if pair else None)
    _emit(dumps(out), args.out)


def cmd_build_class(args) -> None:
    raw = Path(args.config).read_bytes()
    cfg = json.loads(raw)
    base = Path(args.config).parent
    d = float(cfg.get("d", 1))
    c = float(cfg["c"]) if "c" in cfg else None
    sets = []
    draws = []
    for spec in cfg.get("levels", []):
        lvl = int(spec["level"])
        graphs = []
        if "file" in spec:
            graphs += read_graph6_file(base / spec["file"])
        graphs += [read_graph6(x) for x in spec.get("graph6", [])]
        if "sampler" in spec:
            from .bounds import tiny_constant
            smp = spec["sampler"]
            cc = c if c is not None else tiny_constant(d)
            for j in range(int(smp.get("count", 1))):
                sd = child_seed(int(cfg.get("seed", 0)), "build-class", lvl * 1_000_003 + j)
                res = sample_xd_graph(lvl, float(smp.get("d", d)), cc, sd,
                                      int(smp.get("max_tries", 20)), smp.get("desk_k0"))
                draws.append({"level": lvl, "seed": sd, "accepted": res.accepted, "tries": res.tries})
                if res.graph is not None:
                    graphs.append(res.graph)
        sets.append(LevelSet(lvl, graphs))
    levels = sorted(ls.level for ls in sets)
    ok, pair = is_t_sparse(levels) if levels else (True, None)
    gamma = cfg.get("gamma")
    closure = build_mon_closure_census(sets, int(cfg.get("n_max", 4)),
                                       int(cfg.get("budget", config.CENSUS_BUDGET)), _threads(args),
                                       gamma=gamma, c=c)
    report = {"tool_version": __version__, "levels": levels, "t_sparse": ok,
              "violating_pair": pair, "draws": draws, "closure": closure.to_json(),
              "gamma_hypothesis": {str(ls.level): ls.within_gamma(gamma) for ls in sets} if gamma else None}
    _emit(dumps(report), args.out)


def cmd_represent(args) -> None:
    u = _one_graph(args.universal)
    fam = read_graph6_file(args.family)
    rep = is_representable(u, fam)
    _emit(dumps({"representable": rep.ok, "failing_index": rep.failing, "family_size": len(fam)}),
          args.out)


def cmd_label(args) -> None:
    u = _one_graph(args.universal)
    g = _one_graph(args.graph)
    _emit(dumps(labels_from_universal(u, g).to_json()), args.out)


def cmd_experiment(args) -> None:
    raw = Path(args.config).read_bytes()
    report, table = run_experiment(raw, _threads(args))
    _emit(report, args.out)
    if args.csv:
        Path(args.csv).write_text(table)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tinygraph", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="draw G(n,p) or G(n,m) to a graph6 file")
    s.add_argument("--model", choices=["gnp", "gnm"], required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=float)
    s.add_argument("--m", type=int)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_sample)

    s = sub.add_parser("census", help="exact subgraph census of one graph")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--mode", choices=sorted(MODE_ALIASES), default="induced")
    s.add_argument("--kmax", type=int, required=True)
    s.add_argument("--budget", type=int, default=config.CENSUS_BUDGET)
    s.add_argument("--threads", type=int)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_census)

    s = sub.add_parser("tinyness", help="certify monotone (c, S_d, ln^2)-tininess")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--d", type=float, required=True)
    s.add_argument("--desk-k0", type=int)
    s.add_argument("--budget", type=int, default=config.CERTIFY_BUDGET)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_tinyness)

    s = sub.add_parser("bounds", help="evaluate one closed-form bound")
    s.add_argument("--which", choices=BOUND_KINDS, required=True)
    s.add_argument("--params", nargs="*", metavar="KEY=VALUE")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_bounds)

    s = sub.add_parser("ladder", help="print the level ladder and its sparseness")
    s.add_argument("--imax", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_ladder)

    s = sub.add_parser("build-class", help="closure census over configured level sets")
    s.add_argument("--config", required=True)
    s.add_argument("--threads", type=int)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_build_class)

    s = sub.add_parser("represent", help="check a family against a universal graph")
    s.add_argument("--universal", required=True)
    s.add_argument("--family", required=True)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_represent)

    s = sub.add_parser("label", help="labels of a graph induced by a universal graph")
    s.add_argument("--universal", required=True)
    s.add_argument("--graph", required=True)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_label)

    s = sub.add_parser("experiment", help="run a configured experiment")
    s.add_argument("--config", required=True)
    s.add_argument("--threads", type=int)
    s.add_argument("--out")
    s.add_argument("--csv")
    s.set_defaults(fn=cmd_experiment)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.fn(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - every failure maps to exit status 1
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
