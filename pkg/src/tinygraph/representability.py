"""Induced-universal graphs and the labeling schemes they induce.

A universal graph U yields labels of width ``ceil(log2 |V(U)|)``: each vertex
of an embedded graph is labeled by the index of its image, and adjacency is
decoded by looking the two indices up in U. Conversely a decoder table over
all ``2^f`` labels is itself a universal graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .canon import canonical_certificate
from .errors import NotEmbeddableError
from .generate import unlabeled_graphs
from .graph import Graph
from .iso import find_induced_embedding, is_induced_embeddable
from .random_models import WordStream

EXHAUSTIVE_MAX = 7


class Representation(tuple):
    """``(ok, failing_index)``; ``failing_index`` is None when every member embeds."""

    def __new__(cls, ok: bool, failing: int | None):
        return super().__new__(cls, (ok, failing))

    @property
    def ok(self) -> bool:
        return self[0]

    @property
    def failing(self) -> int | None:
        return self[1]


def is_representable(u: Graph, family: Sequence[Graph]) -> Representation:
    """Whether every member of ``family`` is an induced subgraph of ``u``."""
    for i, g in enumerate(family):
        if not is_induced_embeddable(g, u):
            return Representation(False, i)
    return Representation(True, None)


def label_width(u_size: int) -> int:
    return max(1, (u_size - 1).bit_length())


@dataclass(frozen=True)
class LabelAssignment:
    graph_id: int
    labels: tuple[str, ...]
    width: int

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be pairwise distinct")
        if any(len(l) != self.width for l in self.labels):
            raise ValueError("every label must have the stated width")

    def to_json(self) -> dict:
        return {"graph_id": self.graph_id, "labels": list(self.labels), "width": self.width}


def labels_from_universal(u: Graph, g: Graph, graph_id: int = 0) -> LabelAssignment:
    """Label each vertex of ``g`` by the binary index of its image in an induced embedding into ``u``."""
    phi = find_induced_embedding(g, u)
    if phi is None:
        raise NotEmbeddableError("graph is not an induced subgraph of the universal graph")
    w = label_width(u.n)
    return LabelAssignment(graph_id, tuple(format(x, f"0{w}b") for x in phi), w)


def _index(label: str | int, u: Graph) -> int:
    if isinstance(label, str):
        if not label or set(label) - {"0", "1"}:
            raise ValueError(f"bad label {label!r}")
        label = int(label, 2)
    if not 0 <= label < u.n:
        raise IndexError(f"label {label} out of range for a {u.n}-vertex universal graph")
    return label


def adjacency_decode(a: str | int, b: str | int, u: Graph) -> bool:
    """Adjacency of two labeled vertices, read off the universal graph."""
    i, j = _index(a, u), _index(b, u)
    if i == j:
        raise ValueError("the two labels must differ")
    return u.has_edge(i, j)


def universal_from_decoder(table: Sequence[Sequence[bool]]) -> Graph:
    """Graph on all labels of a decoder given as a symmetric boolean matrix (diagonal ignored)."""
    size = len(table)
    rows = [0] * size
    for i in range(size):
        if len(table[i]) != size:
            raise ValueError("decoder table must be square")
        for j in range(size):
            if i != j and table[i][j]:
                if not table[j][i]:
                    raise ValueError(f"decoder is not symmetric at ({i}, {j})")
                rows[i] |= 1 << j
    return Graph._trusted(rows)


# unrepresentable families ---------------------------------------------------

@dataclass
class FamilySearch:
    family: list[int] | None
    exhaustive: bool
    proof: bool
    universals_checked: int
    families_checked: int

    def to_json(self) -> dict:
        return {"family": self.family, "exhaustive": self.exhaustive, "proof": self.proof,
                "universals_checked": self.universals_checked,
                "families_checked": self.families_checked}


def _cover_masks(universals: Sequence[Graph], cands: Sequence[Graph]) -> list[int]:
    masks = set()
    for u in universals:
        m = 0
        for i, g in enumerate(cands):
            if is_induced_embeddable(g, u):
                m |= 1 << i
        masks.add(m)
    # keep only maximal masks
    ordered = sorted(masks, key=lambda x: -x.bit_count())
    keep: list[int] = []
    for m in ordered:
        if not any(m & k == m for k in keep):
            keep.append(m)
    return keep


def find_unrepresentable_family(candidates: Sequence[Graph], u_size: int, family_size: int,
                                budget: int = 10**6, seed: int = 0) -> FamilySearch:
    """Search for ``family_size`` candidates that no ``u_size``-vertex graph contains together.

    For ``u_size <= 7`` every unlabeled ``u_size``-vertex graph is tried, so a
    returned family is certified and ``None`` with ``proof=True`` means every
    family of that size is representable. Larger sizes fall back to ``budget``
    random universal candidates; a returned family is then only a candidate.
    Indices in the result refer to ``candidates``.
    """
    if candidates:
        n = candidates[0].n
        if any(g.n != n for g in candidates):
            raise ValueError("all candidates must have the same vertex count")
        if u_size < n:
            raise ValueError("u_size must be at least the candidates' vertex count")
    if family_size <= 0:
        return FamilySearch(None, True, True, 0, 0)
    # one index per isomorphism class
    first_of: dict[bytes, int] = {}
    for i, g in enumerate(candidates):
        first_of.setdefault(canonical_certificate(g, max_n=None), i)
    idx = sorted(first_of.values())
    cands = [candidates[i] for i in idx]
    if family_size > len(cands):
        return FamilySearch(None, True, True, 0, 0)

    exhaustive = u_size <= EXHAUSTIVE_MAX
    if exhaustive:
        universals = unlabeled_graphs(u_size)
    else:
        stream = WordStream(seed)
        universals = []
        for _ in range(min(budget, 2000)):
            rows = [0] * u_size
            for i in range(u_size):
                for j in range(i + 1, u_size):
                    if stream.next_word() >> 63:
                        rows[i] |= 1 << j
                        rows[j] |= 1 << i
            universals.append(Graph._trusted(rows))
    masks = _cover_masks(universals, cands)
    checked = 0
    for combo in combinations(range(len(cands)), family_size):
        checked += 1
        fm = 0
        for i in combo:
            fm |= 1 << i
        if not any(fm & m == fm for m in masks):
            return FamilySearch([idx[i] for i in combo], exhaustive, exhaustive,
                                len(universals), checked)
        if checked >= budget:
            return FamilySearch(None, exhaustive, False, len(universals), checked)
    return FamilySearch(None, exhaustive, exhaustive, len(universals), checked)
