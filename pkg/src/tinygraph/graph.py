"""Simple undirected graphs stored as adjacency bit rows.

Row ``i`` is a Python int whose bit ``j`` is set iff ``{i, j}`` is an edge.
Graphs are immutable; every operation returns a new object.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import Graph6Error


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


_TABLE_BITS = 12
_BIT_TABLE: list[tuple[int, ...]] = [()]
for _m in range(1, 1 << _TABLE_BITS):
    _low = _m & -_m
    _BIT_TABLE.append((_low.bit_length() - 1,) + _BIT_TABLE[_m ^ _low])
_TABLE_LIMIT = 1 << _TABLE_BITS


def bits_of(mask: int) -> tuple[int, ...] | list[int]:
    """Set-bit indices of ``mask`` in ascending order (table lookup for small masks)."""
    if mask < _TABLE_LIMIT:
        return _BIT_TABLE[mask]
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Graph:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for i, r in enumerate(self.rows):
            if r & ~full:
                raise ValueError(f"row {i} has bits outside [0, {self.n})")
            if (r >> i) & 1:
                raise ValueError(f"loop at vertex {i}")
            for j in iter_bits(r):
                if not (self.rows[j] >> i) & 1:
                    raise ValueError(f"adjacency not symmetric at ({i}, {j})")

    # construction ---------------------------------------------------------

    @classmethod
    def _trusted(cls, rows: Sequence[int]) -> "Graph":
        # skips validation; callers guarantee symmetry and zero diagonal
        g = object.__new__(cls)
        object.__setattr__(g, "n", len(rows))
        object.__setattr__(g, "rows", tuple(rows))
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls._trusted(rows)

    # queries --------------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.rows[v]))

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.rows) for j in iter_bits(r >> (i + 1) << (i + 1))]

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph._trusted([(full ^ r) & ~(1 << i) for i, r in enumerate(self.rows)])

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("perm is not a permutation of the vertex set")
        rows = [0] * self.n
        for v, r in enumerate(self.rows):
            nr = 0
            for w in iter_bits(r):
                nr |= 1 << perm[w]
            rows[perm[v]] = nr
        return Graph._trusted(rows)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


# named graphs ---------------------------------------------------------------

def empty_graph(n: int) -> Graph:
    return Graph._trusted([0] * n)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph._trusted([full ^ (1 << i) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def disjoint_union(*graphs: Graph) -> Graph:
    rows: list[int] = []
    offset = 0
    for g in graphs:
        rows.extend(r << offset for r in g.rows)
        offset += g.n
    return Graph._trusted(rows)


# structural operations ------------------------------------------------------

def induced_rows(rows: Sequence[int], verts: Sequence[int]) -> list[int]:
    """Adjacency rows of the subgraph induced by ``verts`` (sorted, distinct)."""
    pos = {v: i for i, v in enumerate(verts)}
    sel = mask_of(verts)
    out = []
    for v in verts:
        r = rows[v] & sel
        nr = 0
        while r:
            low = r & -r
            nr |= 1 << pos[low.bit_length() - 1]
            r ^= low
        out.append(nr)
    return out


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    """Subgraph induced by ``s``; vertices keep their relative order."""
    verts = sorted(set(s))
    for v in verts:
        if not 0 <= v < g.n:
            raise IndexError(f"vertex {v} out of range for n={g.n}")
    return Graph._trusted(induced_rows(g.rows, verts))


def component_masks(rows: Sequence[int], within: int | None = None) -> list[int]:
    """Connected components (as bitmasks) of the graph restricted to ``within``."""
    n = len(rows)
    left = (1 << n) - 1 if within is None else within
    comps = []
    while left:
        seed = left & -left
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in bits_of(frontier):
                nxt |= rows[v]
            nxt &= left & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        left &= ~comp
    return comps


def connected_components(g: Graph) -> list[tuple[int, ...]]:
    """Vertex sets of the components, each sorted, ordered by smallest member."""
    return [tuple(iter_bits(c)) for c in component_masks(g.rows)]


def is_connected_rows(rows: Sequence[int]) -> bool:
    return len(rows) <= 1 or len(component_masks(rows)) == 1


def is_connected(g: Graph) -> bool:
    return is_connected_rows(g.rows)


# graph6 ---------------------------------------------------------------------

_HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise ValueError("graph too large for graph6")


def write_graph6(g: Graph) -> str:
    """graph6 string (no header, no newline) for ``g``."""
    out = [_encode_n(g.n)]
    acc = 0
    nbits = 0
    for j in range(1, g.n):
        rj = g.rows[j]
        for i in range(j):
            acc = (acc << 1) | ((rj >> i) & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def read_graph6(text: str | bytes) -> Graph:
    """Parse a single graph6 line (an optional ``>>graph6<<`` header is skipped)."""
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise Graph6Error("non-ASCII byte", exc.start) from None
    text = text.rstrip("\r\n")
    pos = len(_HEADER) if text.startswith(_HEADER) else 0
    data = [ord(ch) for ch in text]
    for off in range(pos, len(data)):
        if not 63 <= data[off] <= 126:
            raise Graph6Error(f"invalid graph6 character {text[off]!r}", off)
    if pos >= len(data):
        raise Graph6Error("missing vertex count", pos)

    def take(count: int, at: int) -> int:
        if at + count > len(data):
            raise Graph6Error("truncated vertex count", len(data))
        v = 0
        for x in data[at:at + count]:
            v = (v << 6) | (x - 63)
        return v

    if data[pos] != 126:
        n, pos = data[pos] - 63, pos + 1
    elif pos + 1 < len(data) and data[pos + 1] == 126:
        n, pos = take(6, pos + 2), pos + 8
    else:
        n, pos = take(3, pos + 1), pos + 4

    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(data) - pos != need:
        raise Graph6Error(f"expected {need} adjacency bytes for n={n}, got {len(data) - pos}",
                          min(len(data), pos + need))
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = data[pos + k // 6] - 63
            if (byte >> (5 - k % 6)) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    if nbits % 6:
        pad = (data[-1] - 63) & ((1 << (6 - nbits % 6)) - 1)
        if pad:
            raise Graph6Error("nonzero padding bits", len(data) - 1)
    return Graph._trusted(rows)


def read_graph6_file(path) -> list[Graph]:
    graphs = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if line:
                graphs.append(read_graph6(line))
    return graphs


def write_graph6_file(path, graphs: Iterable[Graph], header: bool = False) -> None:
    with open(path, "w", encoding="ascii") as fh:
        if header:
            fh.write(_HEADER)
        for g in graphs:
            fh.write(write_graph6(g) + "\n")
