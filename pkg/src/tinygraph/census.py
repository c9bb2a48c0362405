"""Exact and sampled censuses of unlabeled k-vertex (induced) subgraphs.

A :class:`CensusTable` maps each order ``k`` to a Counter from certificate to
the number of occurrences (vertex subsets for induced modes, vertex subset plus
edge subset pairs for subgraph modes). The number of distinct certificates at
``k`` is ``i_k`` or ``s_k``; for subgraph modes ``s_k(G, t)`` is read off by
grouping certificates by their edge count.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, product
from typing import Iterator, NamedTuple, Sequence

from . import config
from .canon import Certificate, canonical_certificate, certificate_of_rows, deserialize, serialize
from .errors import BudgetExceeded
from .graph import Graph, bits_of, component_masks, disjoint_union, induced_rows
from .iso import find_subgraph_embedding
from .parallel import ordered_map
from .random_models import WordStream

MODES = ("induced", "subgraph", "connected-induced", "connected-subgraph")
EMPTY_CERT = serialize(0, ())
_MEMO_CAP = 1 << 20


def cert_edge_count(cert: Certificate) -> int:
    return int.from_bytes(cert[4:], "big").bit_count() if len(cert) > 4 else 0


def cert_order(cert: Certificate) -> int:
    return int.from_bytes(cert[:4], "big")


@dataclass
class CensusTable:
    mode: str
    n: int
    k_max: int
    per_k: dict[int, Counter] = field(default_factory=dict)
    graph: Graph | None = field(default=None, repr=False, compare=False)

    def count(self, k: int) -> int:
        """Number of isomorphism classes at order ``k`` (``i_k`` or ``s_k``)."""
        if k not in self.per_k:
            raise KeyError(f"k={k} not computed (k_max={self.k_max})")
        return len(self.per_k[k])

    def counts(self) -> dict[int, int]:
        return {k: len(c) for k, c in sorted(self.per_k.items())}

    def count_kt(self, k: int, t: int) -> int:
        """``s_k(G, t)``: classes at order ``k`` with exactly ``t`` edges."""
        return sum(1 for c in self.per_k[k] if cert_edge_count(c) == t)

    def edge_profile(self, k: int) -> dict[int, int]:
        """Realized ``t`` values at order ``k`` mapped to class counts."""
        prof: Counter = Counter(cert_edge_count(c) for c in self.per_k[k])
        return dict(sorted(prof.items()))

    def certificates(self, k: int) -> set[Certificate]:
        return set(self.per_k[k])

    def to_json(self) -> dict:
        rows = []
        with_t = "subgraph" in self.mode
        for k in sorted(self.per_k):
            for cert in sorted(self.per_k[k]):
                row = {"k": k, "certificate": cert.hex(), "count": self.per_k[k][cert]}
                if with_t:
                    row["t"] = cert_edge_count(cert)
                rows.append(row)
        return {"mode": self.mode, "n": self.n, "k_max": self.k_max, "rows": rows}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


def _merge(tables: Sequence[dict[int, Counter]], k_max: int) -> dict[int, Counter]:
    out = {k: Counter() for k in range(1, k_max + 1)}
    for t in tables:
        for k, c in t.items():
            out[k].update(c)
    return out


def _finish(mode: str, g: Graph, k_max: int, merged: dict[int, Counter]) -> CensusTable:
    per_k = {0: Counter({EMPTY_CERT: 1})}
    per_k.update(merged)
    return CensusTable(mode=mode, n=g.n, k_max=k_max, per_k=per_k, graph=g)


def _check_k(g: Graph, k_max: int) -> None:
    if not 0 <= k_max <= g.n:
        raise ValueError(f"k_max must lie in [0, {g.n}], got {k_max}")


def _root_chunks(n: int, workers: int) -> list[list[int]]:
    if workers <= 1:
        return [list(range(n))]
    return [[r] for r in range(n)]


# plain subsets --------------------------------------------------------------

def _subsets(rows: Sequence[int], n: int, k_max: int, roots: Sequence[int]) -> Iterator[tuple[tuple[int, ...], int]]:
    """All vertex subsets (with minimum in ``roots``) of size 1..k_max, with edge counts."""
    stack = [((r,), 1 << r, 0) for r in reversed(roots)]
    while stack:
        verts, mask, e = stack.pop()
        yield verts, e
        if len(verts) < k_max:
            for v in range(n - 1, verts[-1], -1):
                stack.append((verts + (v,), mask | (1 << v), e + (rows[v] & mask).bit_count()))


def _induced_worker(args) -> dict[int, Counter]:
    rows, n, k_max, roots = args
    memo: dict[tuple[int, ...], Certificate] = {}
    out: dict[int, Counter] = {}
    for verts, _ in _subsets(rows, n, k_max, roots):
        local = tuple(induced_rows(rows, verts))
        cert = memo.get(local)
        if cert is None:
            cert = certificate_of_rows(local)
            if len(memo) < _MEMO_CAP:
                memo[local] = cert
        out.setdefault(len(verts), Counter())[cert] += 1
    return out


def induced_work(n: int, k_max: int) -> list[int]:
    """Cumulative subset counts ``sum_{j<=k} C(n, j)`` for k = 1..k_max."""
    acc, out = 0, []
    for k in range(1, k_max + 1):
        acc += math.comb(n, k)
        out.append(acc)
    return out


def census_induced(g: Graph, k_max: int, budget: int = config.CENSUS_BUDGET,
                   workers: int = 1) -> CensusTable:
    """Exact ``i_k(g)`` for every ``k <= k_max``."""
    _check_k(g, k_max)
    for k, w in enumerate(induced_work(g.n, k_max), start=1):
        if w > budget:
            raise BudgetExceeded(k, budget, f"{w} vertex subsets up to k={k}")
    tasks = [(g.rows, g.n, k_max, roots) for roots in _root_chunks(g.n, workers)]
    parts = ordered_map(_induced_worker, tasks, workers) if k_max else []
    return _finish("induced", g, k_max, _merge(parts, k_max))


# all subgraphs --------------------------------------------------------------

def _edge_subset_counter(local: tuple[int, ...], memo: dict) -> Counter:
    k = len(local)
    edges = [(i, j) for i in range(k) for j in bits_of(local[i]) if j > i]
    out: Counter = Counter()
    cur = [0] * k
    # Gray code walk over all edge subsets
    for step in range(1 << len(edges)):
        if step:
            b = (step & -step).bit_length() - 1
            i, j = edges[b]
            cur[i] ^= 1 << j
            cur[j] ^= 1 << i
        key = tuple(cur)
        cert = memo.get(key)
        if cert is None:
            cert = certificate_of_rows(key)
            if len(memo) < _MEMO_CAP:
                memo[key] = cert
        out[cert] += 1
    return out


def _subgraph_worker(args) -> dict[int, Counter]:
    rows, n, k_max, roots = args
    per_local: dict[tuple[int, ...], Counter] = {}
    memo: dict = {}
    out: dict[int, Counter] = {}
    for verts, _ in _subsets(rows, n, k_max, roots):
        local = tuple(induced_rows(rows, verts))
        cnt = per_local.get(local)
        if cnt is None:
            cnt = _edge_subset_counter(local, memo)
            per_local[local] = cnt
        out.setdefault(len(verts), Counter()).update(cnt)
    return out


def subgraph_work(g: Graph, k_max: int) -> list[int]:
    """Cumulative ``sum_S 2^{e(S)}`` over vertex subsets of size <= k, k = 1..k_max."""
    per = [0] * (k_max + 1)
    for verts, e in _subsets(g.rows, g.n, k_max, range(g.n)):
        per[len(verts)] += 1 << e
    acc, out = 0, []
    for k in range(1, k_max + 1):
        acc += per[k]
        out.append(acc)
    return out


def census_subgraphs(g: Graph, k_max: int, budget: int = config.CENSUS_BUDGET,
                     workers: int = 1) -> CensusTable:
    """Exact ``s_k(g)`` and ``s_k(g, t)`` for every ``k <= k_max``."""
    _check_k(g, k_max)
    for k, w in enumerate(induced_work(g.n, k_max), start=1):
        if w > budget:
            raise BudgetExceeded(k, budget, f"{w} vertex subsets up to k={k}")
    for k, w in enumerate(subgraph_work(g, k_max), start=1):
        if w > budget:
            raise BudgetExceeded(k, budget, f"{w} edge subsets up to k={k}")
    tasks = [(g.rows, g.n, k_max, roots) for roots in _root_chunks(g.n, workers)]
    parts = ordered_map(_subgraph_worker, tasks, workers) if k_max else []
    return _finish("subgraph", g, k_max, _merge(parts, k_max))


# connected sets -------------------------------------------------------------

class _OutOfBudget(Exception):
    pass


def connected_sets(rows: Sequence[int], k_max: int, root: int) -> Iterator[int]:
    """Connected vertex sets (bitmasks) of size <= k_max whose smallest vertex is ``root``.

    Each set is produced exactly once by extending only with neighbours that
    are larger than the root and not adjacent to the set built so far.
    """
    above = ~((1 << (root + 1)) - 1)
    start = 1 << root
    stack = [(start, 1, rows[root] & above, rows[root] | start)]
    while stack:
        sub, size, ext, excl = stack.pop()
        yield sub
        if size == k_max:
            continue
        children = []
        while ext:
            low = ext & -ext
            ext ^= low
            w = low.bit_length() - 1
            children.append((sub | low, size + 1, ext | (rows[w] & ~excl & above), excl | rows[w]))
        stack.extend(reversed(children))


def _connected_spanning(local: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    k = len(local)
    if k == 1:
        yield (0,)
        return
    edges = [(i, j) for i in range(k) for j in bits_of(local[i]) if j > i]
    for size in range(k - 1, len(edges) + 1):
        for chosen in combinations(edges, size):
            cur = [0] * k
            for i, j in chosen:
                cur[i] |= 1 << j
                cur[j] |= 1 << i
            yield tuple(cur)


def _is_connected_local(rows: Sequence[int]) -> bool:
    full = (1 << len(rows)) - 1
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for v in bits_of(frontier):
            nxt |= rows[v]
        nxt &= full & ~seen
        seen |= nxt
        frontier = nxt
    return seen == full


def _connected_worker(args) -> tuple[dict[int, Counter], int, bool]:
    rows, k_max, roots, induced, budget = args
    out: dict[int, Counter] = {}
    memo: dict = {}
    per_local: dict[tuple[int, ...], tuple[Counter, int]] = {}
    steps = 0
    try:
        for root in roots:
            for sub in connected_sets(rows, k_max, root):
                steps += 1
                verts = bits_of(sub)
                local = tuple(induced_rows(rows, verts))
                if induced:
                    cert = memo.get(local)
                    if cert is None:
                        cert = certificate_of_rows(local)
                        if len(memo) < _MEMO_CAP:
                            memo[local] = cert
                    out.setdefault(len(verts), Counter())[cert] += 1
                else:
                    hit = per_local.get(local)
                    if hit is None:
                        e = sum(r.bit_count() for r in local) // 2
                        k = len(local)
                        work = sum(math.comb(e, j) for j in range(k - 1, e + 1))
                        if steps + work > budget:
                            raise _OutOfBudget
                        cnt: Counter = Counter()
                        for cand in _connected_spanning(local):
                            if _is_connected_local(cand):
                                cert = memo.get(cand)
                                if cert is None:
                                    cert = certificate_of_rows(cand)
                                    if len(memo) < _MEMO_CAP:
                                        memo[cand] = cert
                                cnt[cert] += 1
                        hit = (cnt, work)
                        per_local[local] = hit
                    steps += hit[1]
                    out.setdefault(len(verts), Counter()).update(hit[0])
                if steps > budget:
                    raise _OutOfBudget
    except _OutOfBudget:
        return out, steps, True
    return out, steps, False


def connected_census(g: Graph, k_max: int, mode: str = "connected-subgraph",
                     budget: int = config.CENSUS_BUDGET, workers: int = 1) -> CensusTable:
    """Counts restricted to connected (induced) subgraphs, via connected-set extension.

    ``mode`` is ``connected-induced`` or ``connected-subgraph``. Raises
    :class:`BudgetExceeded` naming ``k_max`` when the work exceeds ``budget``;
    the outcome does not depend on ``workers``.
    """
    if mode not in ("connected-induced", "connected-subgraph"):
        raise ValueError(f"unknown connected mode {mode!r}")
    _check_k(g, k_max)
    induced = mode == "connected-induced"
    tasks = [(g.rows, k_max, roots, induced, budget) for roots in _root_chunks(g.n, workers)]
    results = ordered_map(_connected_worker, tasks, workers) if k_max else []
    total = 0
    for _, steps, over in results:
        total += steps
        if over or total > budget:
            raise BudgetExceeded(k_max, budget, "connected enumeration")
    return _finish(mode, g, k_max, _merge([r[0] for r in results], k_max))


# reconstruction from connected pieces ---------------------------------------

def _partitions(k: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = k if largest is None else largest
    if k == 0:
        yield ()
        return
    for first in range(min(k, largest), 0, -1):
        for rest in _partitions(k - first, first):
            yield (first,) + rest


def _pack(pieces: list[int], bins: list[int]) -> bool:
    """Exact bin-packing feasibility of piece sizes into component sizes."""
    pieces = sorted(pieces, reverse=True)
    bins = sorted(bins, reverse=True)
    # greedy first-fit decreasing settles most cases
    left = list(bins)
    for p in pieces:
        for i, b in enumerate(left):
            if b >= p:
                left[i] -= p
                break
        else:
            break
    else:
        return True

    def place(i: int) -> bool:
        if i == len(pieces):
            return True
        seen = set()
        for j, b in enumerate(bins):
            if b >= pieces[i] and b not in seen:
                seen.add(b)
                bins[j] -= pieces[i]
                if place(i + 1):
                    return True
                bins[j] += pieces[i]
        return False

    return place(0)


def compose_disconnected(connected: CensusTable, k: int) -> int:
    """Number of unlabeled k-vertex subgraphs rebuilt from connected classes.

    Every multiset of connected classes whose orders sum to ``k`` is a
    candidate; it counts when the components of the host graph can hold the
    pieces (bin-packing check on component sizes) and the disjoint union of
    the pieces is found as a subgraph of the host by an exact search.
    """
    if connected.mode != "connected-subgraph" or connected.graph is None:
        raise ValueError("need a connected-subgraph census that carries its graph")
    if k > connected.k_max:
        raise ValueError(f"connected data only up to k={connected.k_max}, asked for k={k}")
    if k == 0:
        return 1
    host = connected.graph
    comp_sizes = [c.bit_count() for c in component_masks(host.rows)]
    by_size = {j: sorted(connected.per_k.get(j, {})) for j in range(1, k + 1)}
    total = 0
    for parts in _partitions(k):
        if not _pack(list(parts), comp_sizes):
            continue
        mult = Counter(parts)
        choices = [list(combinations_with_replacement(by_size[size], m)) for size, m in sorted(mult.items())]
        for combo in product(*choices):
            pieces = [deserialize(c) for group in combo for c in group]
            pieces.sort(key=lambda p: -p.n)
            if find_subgraph_embedding(disjoint_union(*pieces), host) is not None:
                total += 1
    return total


# sampling -------------------------------------------------------------------

class Diversity(NamedTuple):
    distinct: int
    lower_bound: int


def sample_subset(stream: WordStream, n: int, k: int) -> list[int]:
    """Uniform k-subset of range(n) by Floyd's algorithm, sorted."""
    chosen: set[int] = set()
    for j in range(n - k, n):
        t = stream.below(j + 1)
        chosen.add(j if t in chosen else t)
    return sorted(chosen)


def sampled_induced_diversity(g: Graph, k: int, samples: int, seed: int,
                              max_n: int | None = None) -> Diversity:
    """Distinct classes among ``samples`` uniform induced k-subgraphs.

    The distinct count is a certified lower bound on ``i_k(g)``.
    """
    if not 0 <= k <= g.n:
        raise ValueError(f"k must lie in [0, {g.n}]")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    stream = WordStream(seed)
    seen: set[Certificate] = set()
    for _ in range(samples):
        verts = sample_subset(stream, g.n, k)
        sub = Graph._trusted(induced_rows(g.rows, verts))
        seen.add(canonical_certificate(sub, max_n=max_n))
    return Diversity(len(seen), len(seen))
