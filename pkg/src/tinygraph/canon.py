"""Canonical labeling by color refinement plus individualization/refinement search.

Each connected component is canonized on its own: the equitable partition is
refined, the first non-singleton cell is individualized vertex by vertex, and
among the discrete leaves the one with the lexicographically smallest tuple of
relabeled adjacency rows wins. Automorphisms found between equivalent leaves
prune the search (orbit pruning under the pointwise stabilizer of the current
path, plus a jump back to the node where the path left the matching leaf).
Components are then ordered by (size, canonical rows) and concatenated.
"""

from __future__ import annotations

from typing import Sequence

from . import config
from .errors import CapacityError
from .graph import Graph, bits_of, component_masks, induced_rows, iter_bits

Certificate = bytes


def refine(rows: Sequence[int], cells: list[int], splitters: list[int]) -> list[int]:
    """Coarsest equitable refinement of the ordered partition ``cells``.

    Cells are vertex bitmasks; a split cell is replaced in place by its parts
    ordered by increasing neighbour count into the splitter. The procedure
    only looks at cell positions and counts, so it commutes with relabeling.
    """
    queue = list(splitters)
    pending = set(queue)
    head = 0
    while head < len(queue):
        w = queue[head]
        head += 1
        if w not in pending:
            continue
        pending.discard(w)
        touched = 0
        for v in bits_of(w):
            touched |= rows[v]
        if not touched:
            continue
        out = []
        changed = False
        for c in cells:
            if not (c & touched) or not (c & (c - 1)):
                out.append(c)
                continue
            groups: dict[int, int] = {}
            for v in bits_of(c):
                k = (rows[v] & w).bit_count()
                if k in groups:
                    groups[k] |= 1 << v
                else:
                    groups[k] = 1 << v
            if len(groups) == 1:
                out.append(c)
                continue
            changed = True
            parts = [groups[k] for k in sorted(groups)]
            out.extend(parts)
            if c in pending:
                pending.discard(c)
                add = parts
            else:
                # skip the first largest part (Hopcroft)
                big = max(range(len(parts)), key=lambda i: (parts[i].bit_count(), -i))
                add = parts[:big] + parts[big + 1:]
            for p in add:
                queue.append(p)
                pending.add(p)
        if changed:
            cells = out
    return cells


def _relabeled_rows(rows: Sequence[int], order: Sequence[int]) -> tuple[int, ...]:
    pos = [0] * len(rows)
    for i, v in enumerate(order):
        pos[v] = i
    out = []
    for v in order:
        nr = 0
        for w in bits_of(rows[v]):
            nr |= 1 << pos[w]
        out.append(nr)
    return tuple(out)


class _Search:
    def __init__(self, rows: Sequence[int]):
        self.rows = rows
        self.m = len(rows)
        self.first_key = None
        self.first_order: list[int] = []
        self.first_path: list[int] = []
        self.best_key = None
        self.best_order: list[int] = []
        self.best_path: list[int] = []
        self.gens: list[list[int]] = []

    def run(self) -> tuple[tuple[int, ...], list[int]]:
        full = (1 << self.m) - 1
        cells = refine(self.rows, [full], [full])
        self._node(cells, [])
        return self.best_key, self.best_order

    def _orbit_blocked(self, v: int, explored: list[int], path: list[int]) -> bool:
        gens = [g for g in self.gens if all(g[x] == x for x in path)]
        if not gens:
            return False
        parent = list(range(self.m))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in gens:
            for x in range(self.m):
                a, b = find(x), find(g[x])
                if a != b:
                    parent[a] = b
        rv = find(v)
        return any(find(x) == rv for x in explored)

    def _node(self, cells: list[int], path: list[int]):
        if len(cells) == self.m:
            return self._leaf(cells, path)
        depth = len(path)
        t = next(i for i, c in enumerate(cells) if c & (c - 1))
        c = cells[t]
        explored: list[int] = []
        for v in bits_of(c):
            if explored and self._orbit_blocked(v, explored, path):
                continue
            explored.append(v)
            bit = 1 << v
            child = cells[:t] + [bit, c ^ bit] + cells[t + 1:]
            child = refine(self.rows, child, [bit])
            j = self._node(child, path + [v])
            if j is not None and j < depth:
                return j
        return None

    def _leaf(self, cells: list[int], path: list[int]):
        order = [c.bit_length() - 1 for c in cells]
        key = _relabeled_rows(self.rows, order)
        if self.first_key is None:
            self.first_key = self.best_key = key
            self.first_order = self.best_order = order
            self.first_path = self.best_path = list(path)
            return None
        if key == self.first_key:
            return self._automorphism(self.first_order, order, self.first_path, path)
        if key == self.best_key:
            return self._automorphism(self.best_order, order, self.best_path, path)
        if key < self.best_key:
            self.best_key, self.best_order, self.best_path = key, order, list(path)
        return None

    def _automorphism(self, ref_order, order, ref_path, path) -> int:
        perm = [0] * self.m
        for a, b in zip(ref_order, order):
            perm[a] = b
        self.gens.append(perm)
        common = 0
        for a, b in zip(ref_path, path):
            if a != b:
                break
            common += 1
        return common


def _canon_connected(rows: Sequence[int]) -> tuple[tuple[int, ...], list[int]]:
    m = len(rows)
    if m == 1:
        return (0,), [0]
    if m == 2:
        return (2, 1), [0, 1]
    return _Search(rows).run()


def _canonical_blocks(g: Graph) -> list[tuple[int, tuple[int, ...], list[int]]]:
    blocks = []
    comps = component_masks(g.rows)
    if len(comps) == 1:
        key, order = _canon_connected(g.rows)
        return [(g.n, key, order)]
    for comp in comps:
        verts = bits_of(comp)
        key, order = _canon_connected(induced_rows(g.rows, verts))
        blocks.append((len(verts), key, [verts[i] for i in order]))
    blocks.sort(key=lambda b: (b[0], b[1]))
    return blocks


def _check_size(g: Graph, max_n: int | None) -> None:
    if max_n is not None and g.n > max_n:
        raise CapacityError(f"canonization gated to n <= {max_n}, got n={g.n}")


def canonical_order(g: Graph, max_n: int | None = config.DENSE_MAX_N) -> list[int]:
    """Canonical vertex order: position ``i`` holds the original vertex placed at ``i``."""
    _check_size(g, max_n)
    return [v for b in _canonical_blocks(g) for v in b[2]]


def serialize(n: int, rows: Sequence[int]) -> Certificate:
    """Vertex count (4 bytes, big-endian) followed by the packed upper triangle."""
    acc = 0
    for i, r in enumerate(rows):
        acc = (acc << (n - i - 1)) | (r >> (i + 1))
    nbits = n * (n - 1) // 2
    return n.to_bytes(4, "big") + acc.to_bytes((nbits + 7) // 8, "big")


def deserialize(cert: Certificate) -> Graph:
    """Inverse of :func:`serialize`."""
    n = int.from_bytes(cert[:4], "big")
    acc = int.from_bytes(cert[4:], "big")
    upper = [0] * n
    for i in range(n - 1, -1, -1):
        width = n - i - 1
        upper[i] = (acc & ((1 << width) - 1)) << (i + 1)
        acc >>= width
    rows = list(upper)
    for i in range(n):
        for j in iter_bits(upper[i]):
            rows[j] |= 1 << i
    return Graph._trusted(rows)


def canonical_certificate(g: Graph, max_n: int | None = config.DENSE_MAX_N) -> Certificate:
    """Byte string identifying the isomorphism class of ``g``."""
    _check_size(g, max_n)
    if g.n == 0:
        return serialize(0, ())
    rows: list[int] = []
    offset = 0
    for size, key, _ in _canonical_blocks(g):
        rows.extend(r << offset for r in key)
        offset += size
    return serialize(g.n, rows)


def certificate_of_rows(rows: Sequence[int]) -> Certificate:
    """Certificate for a trusted row list (no size gate, no validation)."""
    return canonical_certificate(Graph._trusted(rows), max_n=None)


def canonical_graph(g: Graph, max_n: int | None = config.DENSE_MAX_N) -> Graph:
    return deserialize(canonical_certificate(g, max_n))
