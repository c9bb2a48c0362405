"""Exhaustive generation of unlabeled graphs by edge augmentation."""

from __future__ import annotations

from .canon import Certificate, certificate_of_rows, deserialize
from .graph import Graph, is_connected_rows


def unlabeled_graphs(n: int, max_edges: int | None = None, connected: bool = False) -> list[Graph]:
    """One canonical representative per isomorphism class on ``n`` vertices.

    Classes with ``e + 1`` edges are obtained from those with ``e`` edges by
    adding one missing edge in every possible way and deduplicating by
    certificate. Output is sorted by (edge count, certificate).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    top = n * (n - 1) // 2
    limit = top if max_edges is None else min(max_edges, top)
    if limit < 0:
        return []
    level: set[Certificate] = {certificate_of_rows([0] * n)}
    found: list[Certificate] = sorted(level)
    for _ in range(limit):
        nxt: set[Certificate] = set()
        for cert in sorted(level):
            rows = list(deserialize(cert).rows)
            for i in range(n):
                for j in range(i + 1, n):
                    if not (rows[i] >> j) & 1:
                        rows[i] |= 1 << j
                        rows[j] |= 1 << i
                        nxt.add(certificate_of_rows(rows))
                        rows[i] ^= 1 << j
                        rows[j] ^= 1 << i
        level = nxt
        found.extend(sorted(level))
    graphs = [deserialize(c) for c in found]
    if connected:
        graphs = [g for g in graphs if is_connected_rows(g.rows)]
    return graphs
