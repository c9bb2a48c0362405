"""Seed-deterministic G(n, p) and G(n, m) samplers.

All randomness comes from the Philox-4x64 counter-based generator keyed
directly by the 64-bit seed (counter starting at zero). Only the raw 64-bit
output words are used, which are fixed by the published Philox constants, so
samples are identical across platforms and numpy versions.

Stream layout:

* ``sample_gnp`` consumes one word per vertex pair in row-major order
  ``(0,1), (0,2), ..., (0,n-1), (1,2), ...``; the pair is an edge iff
  ``(word >> 11) * 2**-53 < p``.
* ``sample_gnm`` runs Floyd's distinct-sampling algorithm over pair ranks
  (ranks in the same row-major order), drawing each bounded integer by
  rejection on whole words.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import DomainError
from .graph import Graph

_MASK64 = (1 << 64) - 1
_CHUNK = 1 << 16


class WordStream:
    """Buffered stream of raw 64-bit Philox words for one seed."""

    def __init__(self, seed: int):
        if not 0 <= seed <= _MASK64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self._gen = np.random.Philox(key=seed)
        self._buf: list[int] = []
        self._pos = 0

    def words(self, count: int) -> np.ndarray:
        """Next ``count`` words as a uint64 array (bypasses the scalar buffer)."""
        if self._pos < len(self._buf):
            raise RuntimeError("cannot mix bulk and scalar draws on one stream")
        return self._gen.random_raw(count)

    def next_word(self) -> int:
        if self._pos == len(self._buf):
            self._buf = [int(x) for x in self._gen.random_raw(1024)]
            self._pos = 0
        w = self._buf[self._pos]
        self._pos += 1
        return w

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection (exact, unbiased)."""
        if bound <= 0:
            raise DomainError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            w = self.next_word()
            if w < limit:
                return w % bound

    def uniform(self) -> float:
        return (self.next_word() >> 11) * (1.0 / (1 << 53))


def child_seed(seed: int, experiment: str, index: int) -> int:
    """Stable 64-bit seed for replicate ``index`` of ``experiment`` (BLAKE2b of the triple)."""
    h = hashlib.blake2b(f"{seed}:{experiment}:{index}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_rank(n: int, i: int, j: int) -> int:
    """Row-major rank of the pair ``i < j``."""
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


def pair_unrank(n: int, r: int) -> tuple[int, int]:
    # largest i with offset(i) <= r, offset(i) = i*(2n-i-1)/2
    lo, hi = 0, n - 2
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid * (2 * n - mid - 1) // 2 <= r:
            lo = mid
        else:
            hi = mid - 1
    i = lo
    return i, r - i * (2 * n - i - 1) // 2 + i + 1


def iter_pairs(n: int) -> Iterator[tuple[int, int]]:
    for i in range(n):
        for j in range(i + 1, n):
            yield i, j


def sample_gnp(n: int, p: float, seed: int) -> Graph:
    """G(n, p): every pair is an edge independently with probability ``p``."""
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise DomainError(f"p must lie in [0, 1], got {p}")
    if n < 0:
        raise DomainError("n must be non-negative")
    stream = WordStream(seed)
    rows = [0] * n
    total = pair_count(n)
    # threshold on the 53-bit mantissa: edge iff (w >> 11) < p * 2**53
    cut = math.ceil(p * (1 << 53))
    done = 0
    i, j = 0, 1
    while done < total:
        count = min(_CHUNK, total - done)
        words = stream.words(count) >> np.uint64(11)
        hits = np.flatnonzero(words < np.uint64(cut)) if cut < (1 << 53) else np.arange(count)
        for h in hits.tolist():
            a, b = pair_unrank(n, done + h)
            rows[a] |= 1 << b
            rows[b] |= 1 << a
        done += count
    return Graph._trusted(rows)


def sample_gnm(n: int, m: int, seed: int) -> Graph:
    """G(n, m): a uniformly random set of exactly ``m`` distinct edges."""
    total = pair_count(n)
    if not 0 <= m <= total:
        raise DomainError(f"m must lie in [0, {total}], got {m}")
    stream = WordStream(seed)
    chosen: set[int] = set()
    for j in range(total - m, total):
        t = stream.below(j + 1)
        chosen.add(j if t in chosen else t)
    rows = [0] * n
    for r in sorted(chosen):
        a, b = pair_unrank(n, r)
        rows[a] |= 1 << b
        rows[b] |= 1 << a
    return Graph._trusted(rows)


def ceil_tolerant(x: float, tol: float = 1e-9) -> int:
    """Ceiling that treats values within ``tol`` of an integer as that integer.

    Keeps products such as ``0.3 * 10`` from rounding up to 4.
    """
    r = round(x)
    if abs(x - r) <= tol * max(1.0, abs(x)):
        return int(r)
    return math.ceil(x)


def edges_for_degree(n: int, d: float) -> int:
    """Edge count ``ceil(d (n - 1) / 2)`` giving average degree about ``d``."""
    if isinstance(d, int) or Fraction(d).denominator == 1:
        return -(-int(d) * (n - 1) // 2)
    return ceil_tolerant(d * (n - 1) / 2)


def transfer_factor(n: int, p: float) -> float:
    """Factor ``10 sqrt(m)``, ``m = ceil(p C(n,2))``, converting a G(n,p) bound to G(n,m)."""
    total = pair_count(n)
    if not 0.0 < p < 1.0 or total == 0:
        raise DomainError(f"need 0 < p < 1 and n >= 2, got n={n}, p={p}")
    m = ceil_tolerant(p * total)
    return 10.0 * math.sqrt(m)


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    n: int
    p: float | None = None
    m: int | None = None

    def __post_init__(self):
        if self.kind == "gnp":
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise DomainError("gnp needs p in [0, 1]")
        elif self.kind == "gnm":
            if self.m is None or not 0 <= self.m <= pair_count(self.n):
                raise DomainError("gnm needs m in [0, C(n,2)]")
        else:
            raise DomainError(f"unknown model {self.kind!r}")

    def sample(self, seed: int) -> Graph:
        if self.kind == "gnp":
            return sample_gnp(self.n, self.p, seed)
        return sample_gnm(self.n, self.m, seed)
