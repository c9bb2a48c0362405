"""Tinyness predicates on single graphs.

Threshold ``tau(k) = k - 1 + k / ln k`` is the density ceiling of the class
S_d; a graph lies in S_d when every k-vertex subgraph with ``k >= k0`` has at
most ``tau(k)`` edges. Since dropping edges never raises the count, the check
reduces to the densest induced k-subgraph, found here by branch and bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from . import config
from .census import CensusTable, connected_census
from .errors import BudgetExceeded
from .graph import Graph, bits_of, component_masks, mask_of

OUTCOMES = ("holds", "violated", "inconclusive")
METHODS = ("exact", "heuristic")


def tau(k: int) -> float:
    """Edge ceiling ``k - 1 + k/ln k``; ``tau(1) = 0`` by convention."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return 0.0
    return k - 1 + k / math.log(k)


def edges_within(g: Graph, verts: Sequence[int]) -> int:
    """Edge count of ``g[verts]``, recomputed from scratch."""
    sel = mask_of(verts)
    return sum((g.rows[v] & sel).bit_count() for v in set(verts)) // 2


def cycle_rank(rows: Sequence[int], within: int | None = None) -> int:
    """``|E| - |V| + #components`` of the graph restricted to ``within``."""
    sel = (1 << len(rows)) - 1 if within is None else within
    verts = bits_of(sel)
    e = sum((rows[v] & sel).bit_count() for v in verts) // 2
    return e - len(verts) + len(component_masks(rows, sel))


# fitted profiles ------------------------------------------------------------

@dataclass
class TinynessProfile:
    mode: str
    counts: dict[int, int]
    c_min: float
    argmax_k: int
    coverage: list[int]

    def to_json(self) -> dict:
        return {"mode": self.mode, "counts": {str(k): v for k, v in self.counts.items()},
                "c_min": self.c_min, "argmax_k": self.argmax_k, "coverage": self.coverage}


def fit_tinyness(census: CensusTable) -> TinynessProfile:
    """Smallest ``c`` with ``count_k <= c^k`` for every computed ``k >= 1``."""
    counts = {k: len(c) for k, c in sorted(census.per_k.items()) if k >= 1}
    if not counts:
        raise ValueError("census has no rows with k >= 1")
    best_k, c = 1, 1.0
    for k, cnt in counts.items():
        if cnt:
            root = cnt ** (1.0 / k)
            if root > c:
                best_k, c = k, root
    # floating roots can land a hair low; nudge up until every inequality holds
    while any(cnt > c ** k for k, cnt in counts.items()):
        c = math.nextafter(c, math.inf)
    return TinynessProfile(census.mode, counts, c, best_k, sorted(counts))


# S_d parameters -------------------------------------------------------------

@dataclass(frozen=True)
class SdParams:
    """Parameters of S_d. The default cutoff ``1000^(10(d+1))`` is kept as a log."""

    d: float
    desk_k0: int | None = None

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("d must be non-negative")
        if self.desk_k0 is not None and self.desk_k0 < 1:
            raise ValueError("k0 must be >= 1")

    @property
    def log_k0(self) -> float:
        if self.desk_k0 is not None:
            return math.log(self.desk_k0)
        return 10 * (self.d + 1) * math.log(1000)

    def first_k(self, n: int) -> int | None:
        """Smallest integer ``k >= k0`` that is at most ``n``, or None if the range is empty."""
        if self.desk_k0 is not None:
            k = self.desk_k0
        else:
            if self.log_k0 > math.log(max(n, 1)) + 1e-12:
                return None
            k = math.ceil(1000 ** (10 * (self.d + 1)) - 1e-9)
        return k if k <= n else None


# verdicts -------------------------------------------------------------------

@dataclass
class TinynessVerdict:
    outcome: str
    method: str = "exact"
    witness: tuple[int, ...] | None = None
    edges: int | None = None
    k: int | None = None
    count: int | None = None
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"unknown outcome {self.outcome!r}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.outcome == "holds" and self.method == "heuristic":
            raise ValueError("a heuristic search cannot certify 'holds'")
        if self.outcome == "violated" and self.witness is None and self.count is None:
            raise ValueError("a violation needs a witness")

    def to_json(self) -> dict:
        return {"outcome": self.outcome, "method": self.method,
                "witness": list(self.witness) if self.witness is not None else None,
                "edges": self.edges, "k": self.k, "count": self.count, "detail": self.detail}


# densest k-subgraph ---------------------------------------------------------

@dataclass
class DenseResult:
    value: int
    witness: tuple[int, ...]
    exact: bool
    nodes: int


def _greedy_peel(rows: Sequence[int], n: int, k: int) -> int:
    alive = (1 << n) - 1
    deg = [r.bit_count() for r in rows]
    for _ in range(n - k):
        v = min(bits_of(alive), key=lambda x: (deg[x], x))
        alive ^= 1 << v
        for w in bits_of(rows[v] & alive):
            deg[w] -= 1
    return alive


def _local_swap(rows: Sequence[int], n: int, sel: int) -> int:
    # first-improvement swaps until no single exchange gains an edge
    improved = True
    while improved:
        improved = False
        inside = bits_of(sel)
        inner = {v: (rows[v] & sel).bit_count() for v in inside}
        for v in sorted(inside, key=lambda x: inner[x]):
            rest = sel ^ (1 << v)
            for w in range(n):
                if (sel >> w) & 1:
                    continue
                if (rows[w] & rest).bit_count() > inner[v]:
                    sel = rest | (1 << w)
                    improved = True
                    break
            if improved:
                break
    return sel


def _induced_edges(rows: Sequence[int], sel: int) -> int:
    return sum((rows[v] & sel).bit_count() for v in bits_of(sel)) // 2


def max_edges_on_k(g: Graph, k: int, budget: int = config.BNB_BUDGET,
                   stop_above: float | None = None) -> DenseResult:
    """Maximum of ``|E(g[S])|`` over ``|S| = k`` by branch and bound.

    Bounds used at a node with chosen set A, candidates C and r vertices
    still to pick: the sum of the r largest values of
    ``|N(v) & A| + min(deg_C(v), r - 1) / 2`` over v in C, and
    ``k - 1 + cycle_rank(g[A | C])``. If more than ``budget`` nodes are
    needed, the best value found so far comes back with ``exact=False``.
    Passing ``stop_above`` ends the search as soon as a set beats it.
    """
    n = g.n
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    rows = g.rows
    if k == n:
        return DenseResult(g.edge_count, tuple(range(n)), True, 0)
    if k == 1:
        return DenseResult(0, (0,), True, 0)

    start = _local_swap(rows, n, _greedy_peel(rows, n, k))
    best = [_induced_edges(rows, start), start]
    ceiling = min(k * (k - 1) // 2, g.edge_count, k - 1 + cycle_rank(rows))
    if best[0] >= ceiling or (stop_above is not None and best[0] > stop_above):
        return DenseResult(best[0], tuple(bits_of(best[1])), best[0] >= ceiling, 0)

    order = sorted(range(n), key=lambda v: (-rows[v].bit_count(), v))
    nodes = 0
    aborted = False
    stopped = False

    class _Stop(Exception):
        pass

    def bound(chosen: int, e: int, cand: int, r: int) -> int:
        gains = sorted(((rows[v] & chosen).bit_count() * 2 + min((rows[v] & cand).bit_count(), r - 1)
                        for v in bits_of(cand)), reverse=True)
        b1 = e + sum(gains[:r]) // 2
        if b1 <= best[0]:
            return b1
        return min(b1, k - 1 + cycle_rank(rows, chosen | cand))

    def search(i: int, chosen: int, size: int, e: int, cand: int):
        nonlocal nodes, aborted, stopped
        nodes += 1
        if nodes > budget:
            aborted = True
            raise _Stop
        r = k - size
        if r == 0:
            if e > best[0]:
                best[0], best[1] = e, chosen
                if stop_above is not None and e > stop_above:
                    stopped = True
                    raise _Stop
            return
        if cand.bit_count() < r or bound(chosen, e, cand, r) <= best[0]:
            return
        while i < n and not (cand >> order[i]) & 1:
            i += 1
        v = order[i]
        bit = 1 << v
        search(i + 1, chosen | bit, size + 1, e + (rows[v] & chosen).bit_count(), cand ^ bit)
        search(i + 1, chosen, size, e, cand ^ bit)

    try:
        search(0, 0, 0, 0, (1 << n) - 1)
    except _Stop:
        pass
    return DenseResult(best[0], tuple(bits_of(best[1])), not (aborted or stopped), nodes)


# S_d membership -------------------------------------------------------------

def check_sd_membership(g: Graph, params: SdParams, budget: int = config.BNB_BUDGET,
                        k_max: int | None = None) -> TinynessVerdict:
    """Decide whether every k-vertex subgraph with ``k0 <= k <= k_max`` has at most ``tau(k)`` edges.

    ``k_max`` defaults to ``n``. A k is settled without search when
    ``k - 1 + cycle_rank(g) <= tau(k)``, because no k-vertex subgraph can
    carry more than ``k - 1`` plus the cycle rank of the whole graph.
    """
    n = g.n
    top = n if k_max is None else min(k_max, n)
    lo = params.first_k(n)
    if lo is None or lo > top:
        return TinynessVerdict("holds", detail={"range": None, "reason": "empty k range"})
    lo = max(lo, 1)
    beta = cycle_rank(g.rows)
    open_ks = []
    for k in range(lo, top + 1):
        if k - 1 + beta <= tau(k) or min(k * (k - 1) // 2, g.edge_count) <= tau(k):
            continue
        open_ks.append(k)
    unresolved = []
    for k in open_ks:
        res = max_edges_on_k(g, k, budget, stop_above=tau(k))
        if res.value > tau(k):
            assert edges_within(g, res.witness) == res.value
            return TinynessVerdict("violated", "exact" if res.exact else "heuristic",
                                   witness=res.witness, edges=res.value, k=k,
                                   detail={"tau": tau(k), "range": [lo, top]})
        if not res.exact:
            unresolved.append(k)
    if unresolved:
        return TinynessVerdict("inconclusive", "heuristic", k=unresolved[0],
                               detail={"unresolved_k": unresolved, "range": [lo, top]})
    return TinynessVerdict("holds", detail={"range": [lo, top], "searched_k": open_ks,
                                            "cycle_rank": beta})


def ln2_cut(n: int) -> float:
    """``t(n) = ln^2 n`` (0 for n <= 1)."""
    return math.log(n) ** 2 if n > 1 else 0.0


def _exceeds_power(count: int, c: float, k: int) -> bool:
    if count <= 0:
        return False
    return math.log(count) > k * math.log(c) + 1e-12


def certify_cyt_tiny(g: Graph, c: float, d: float, budget: int = config.CERTIFY_BUDGET,
                     desk_k0: int | None = None, bnb_budget: int = config.BNB_BUDGET,
                     workers: int = 1) -> TinynessVerdict:
    """Check monotone ``(c, S_d, ln^2)``-tininess of ``g`` as far as budgets allow.

    Condition (1): every subgraph on at most ``ln^2 n`` vertices lies in S_d.
    Condition (2): the number of unlabeled connected k-vertex subgraphs is at
    most ``c^k`` for ``ln^2 n < k``. Orders above the largest component are
    free (no connected subgraph exists). Otherwise the connected census is
    grown one order at a time until the budget refuses; ``k_cap`` and
    ``coverage_complete`` in ``detail`` record how far the check got.
    """
    if c < 1:
        raise ValueError("c must be >= 1")
    n = g.n
    t = ln2_cut(n)
    t_floor = min(math.floor(t), n)
    params = SdParams(d, desk_k0)
    first = check_sd_membership(g, params, bnb_budget, k_max=t_floor)
    detail = {"t": t, "condition": 1, "k0": desk_k0 if desk_k0 is not None else "default",
              "cond1": first.to_json()}
    if first.outcome == "violated":
        return TinynessVerdict("violated", first.method, first.witness, first.edges, first.k,
                               detail=detail)
    if first.outcome == "inconclusive":
        return TinynessVerdict("inconclusive", "heuristic", k=first.k, detail=detail)

    detail["condition"] = 2
    largest = max((m.bit_count() for m in component_masks(g.rows)), default=0)
    upper = min(n, largest)
    k_cap = t_floor
    counts: dict[int, int] = {}
    k = t_floor + 1
    while k <= upper:
        try:
            table = connected_census(g, k, "connected-subgraph", budget, workers)
        except BudgetExceeded:
            break
        for j in range(t_floor + 1, k + 1):
            counts[j] = table.count(j)
        k_cap = k
        bad = [j for j in range(t_floor + 1, k + 1) if _exceeds_power(counts[j], c, j)]
        if bad:
            j = bad[0]
            detail.update(k_cap=k_cap, counts={str(x): y for x, y in counts.items()})
            return TinynessVerdict("violated", "exact", k=j, count=counts[j], detail=detail)
        k += 1
    complete = k_cap >= upper
    detail.update(k_cap=max(k_cap, upper) if complete else k_cap, largest_component=largest,
                  coverage_complete=complete, counts={str(x): y for x, y in counts.items()})
    return TinynessVerdict("holds", "exact", k=None if complete else k_cap + 1, detail=detail)
