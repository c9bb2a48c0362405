"""Backtracking isomorphism and embedding searches.

Nothing here touches the canonizer, so these routines serve as an independent
oracle for it.
"""

from __future__ import annotations

from collections import Counter
from typing import Sequence

from .graph import Graph, component_masks, iter_bits


def _degree_profile(rows: Sequence[int]) -> list[tuple[int, tuple[int, ...]]]:
    """Per vertex: (degree, sorted neighbour degrees)."""
    deg = [r.bit_count() for r in rows]
    return [(deg[v], tuple(sorted(deg[w] for w in iter_bits(r)))) for v, r in enumerate(rows)]


def _search_order(rows: Sequence[int]) -> list[int]:
    # grow from the lowest index, always taking the vertex with most placed neighbours
    n = len(rows)
    placed = 0
    order: list[int] = []
    conn = [0] * n
    remaining = set(range(n))
    while remaining:
        v = max(remaining, key=lambda x: (conn[x], -x))
        order.append(v)
        remaining.discard(v)
        placed |= 1 << v
        for w in iter_bits(rows[v]):
            conn[w] += 1
    return order


def find_isomorphism(g: Graph, h: Graph) -> list[int] | None:
    """A bijection ``phi`` with ``g.has_edge(u, v) == h.has_edge(phi[u], phi[v])``, or None."""
    if g.n != h.n or g.edge_count != h.edge_count:
        return None
    if sorted(g.degrees()) != sorted(h.degrees()):
        return None
    if sorted(len(list(iter_bits(c))) for c in component_masks(g.rows)) != \
            sorted(len(list(iter_bits(c))) for c in component_masks(h.rows)):
        return None
    pg, ph = _degree_profile(g.rows), _degree_profile(h.rows)
    if Counter(pg) != Counter(ph):
        return None
    n = g.n
    compat = []
    for v in range(n):
        m = 0
        for w in range(n):
            if pg[v] == ph[w]:
                m |= 1 << w
        compat.append(m)

    order = _search_order(g.rows)
    phi = [-1] * n
    full = (1 << n) - 1

    def extend(i: int, used: int) -> bool:
        if i == n:
            return True
        v = order[i]
        cand = compat[v] & ~used
        for u in order[:i]:
            if (g.rows[v] >> u) & 1:
                cand &= h.rows[phi[u]]
            else:
                cand &= full ^ h.rows[phi[u]]
            if not cand:
                return False
        for w in iter_bits(cand):
            phi[v] = w
            if extend(i + 1, used | (1 << w)):
                return True
        phi[v] = -1
        return False

    return list(phi) if extend(0, 0) else None


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return find_isomorphism(g, h) is not None


def _embed(h: Graph, u: Graph, induced: bool) -> list[int] | None:
    if h.n > u.n:
        return None
    if h.n == 0:
        return []
    if h.edge_count > u.edge_count:
        return None
    hdeg = h.degrees()
    udeg = u.degrees()
    if any(a > b for a, b in zip(sorted(hdeg, reverse=True), sorted(udeg, reverse=True))):
        return None
    full = (1 << u.n) - 1
    by_degree = [0] * (max(udeg) + 2 if udeg else 1)
    for w, d in enumerate(udeg):
        by_degree[d] |= 1 << w
    # vertices of u with degree >= d
    at_least = [0] * len(by_degree)
    acc = 0
    for d in range(len(by_degree) - 1, -1, -1):
        acc |= by_degree[d]
        at_least[d] = acc

    order = _search_order(h.rows)
    phi = [-1] * h.n

    def extend(i: int, used: int) -> bool:
        if i == len(order):
            return True
        x = order[i]
        dx = hdeg[x]
        cand = (at_least[dx] if dx < len(at_least) else 0) & ~used
        for y in order[:i]:
            if (h.rows[x] >> y) & 1:
                cand &= u.rows[phi[y]]
            elif induced:
                cand &= full ^ u.rows[phi[y]]
            if not cand:
                return False
        for w in iter_bits(cand):
            phi[x] = w
            if extend(i + 1, used | (1 << w)):
                return True
        phi[x] = -1
        return False

    return list(phi) if extend(0, 0) else None


def find_induced_embedding(h: Graph, u: Graph) -> list[int] | None:
    """Injective ``phi`` with ``u[phi(V(h))]`` equal to ``h`` under ``phi``, or None."""
    return _embed(h, u, induced=True)


def is_induced_embeddable(h: Graph, u: Graph) -> bool:
    return find_induced_embedding(h, u) is not None


def find_subgraph_embedding(h: Graph, g: Graph) -> list[int] | None:
    """Injective ``phi`` mapping every edge of ``h`` onto an edge of ``g`` (not necessarily induced)."""
    return _embed(h, g, induced=False)


def is_subgraph(h: Graph, g: Graph) -> bool:
    return find_subgraph_embedding(h, g) is not None
