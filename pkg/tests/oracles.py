"""Independent reference implementations used only by the tests.

Isomorphism questions go through networkx (VF2) and the networkx graph atlas,
which lists every unlabeled graph on up to 7 vertices. Nothing here calls the
package's canonizer or embedding search to make a decision.
"""

from __future__ import annotations

import math
from collections import defaultdict
from functools import lru_cache
from itertools import combinations

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from tinygraph.graph import Graph


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def from_nx(h: nx.Graph) -> Graph:
    idx = {v: i for i, v in enumerate(h.nodes())}
    return Graph.from_edges(len(idx), [(idx[a], idx[b]) for a, b in h.edges()])


@lru_cache(maxsize=None)
def atlas(n: int) -> tuple[nx.Graph, ...]:
    """All unlabeled graphs on ``n <= 7`` vertices."""
    if n > 7:
        raise ValueError("the atlas stops at 7 vertices")
    return tuple(h for h in nx.graph_atlas_g() if h.number_of_nodes() == n)


def census_oracle(g: Graph, k_max: int, mode: str) -> dict[int, list[nx.Graph]]:
    """Atlas graphs of each order that occur in ``g`` in the requested sense."""
    host = to_nx(g)
    out: dict[int, list[nx.Graph]] = {}
    for k in range(0, k_max + 1):
        found = []
        for h in atlas(k):
            if mode.startswith("connected") and (k == 0 or not nx.is_connected(h)):
                continue
            gm = GraphMatcher(host, h)
            if mode in ("induced", "connected-induced"):
                hit = gm.subgraph_is_isomorphic()
            else:
                hit = gm.subgraph_is_monomorphic()
            if hit:
                found.append(h)
        out[k] = found
    return out


def pairwise_classes(graphs: list[Graph]) -> int:
    """Number of isomorphism classes by pairwise VF2 tests within invariant buckets."""
    buckets: dict[tuple, list[nx.Graph]] = defaultdict(list)
    for g in graphs:
        h = to_nx(g)
        key = (g.n, g.edge_count, tuple(sorted(d for _, d in h.degree())))
        reps = buckets[key]
        if not any(nx.is_isomorphic(h, r) for r in reps):
            reps.append(h)
    return sum(len(v) for v in buckets.values())


def automorphism_count(h: nx.Graph) -> int:
    return sum(1 for _ in GraphMatcher(h, h).isomorphisms_iter())


def brute_max_edges(g: Graph, k: int) -> int:
    best = 0
    edges = g.edges()
    for s in combinations(range(g.n), k):
        ss = set(s)
        best = max(best, sum(1 for a, b in edges if a in ss and b in ss))
    return best


# formulas, written out a second time -----------------------------------------

def chernoff(mu, t):
    return min(2.0, 2.0 * math.exp(-(t**2) / (2.0 * mu + 2.0 * t / 3.0)))


def transfer(n, p):
    m = math.ceil(round(p * n * (n - 1) / 2, 9))
    return 10.0 * m**0.5


def beta(d):
    a = math.e * math.e * d
    return 2.0 * math.exp(a * math.log(a))


def not_tiny(n, d):
    from fractions import Fraction
    # 200 sqrt(d/n) is rational exactly when d/n is a rational square; check via squares
    r = 40000 * Fraction(d) / n
    return min(1.0, math.sqrt(r))


def ladder_levels(i_max):
    import mpmath
    out = [1]
    with mpmath.workdps(60):
        for _ in range(i_max):
            out.append(int(mpmath.ceil(mpmath.e ** mpmath.sqrt(out[-1]))))
    return out
