"""Closed-form bounds, evaluated exactly or in the log2 domain.

Every quantity that can overflow is carried as a :class:`LogQuantity`: a
base-2 logarithm (``-inf`` for zero) with the exact integer alongside when it
fits in about a million bits. Asymptotic statements are replaced by the
concrete expressions from which they are derived; each function names the
expression it evaluates in its ``formula`` string.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import mpmath

from . import config
from .random_models import ceil_tolerant

LN2 = math.log(2)
NEG_INF = float("-inf")
EXACT_BITS = 10**6


def log2_int(x: int) -> float:
    """log2 of a non-negative integer of any size (``-inf`` for 0)."""
    if x < 0:
        raise ValueError("log of a negative integer")
    if x == 0:
        return NEG_INF
    b = x.bit_length()
    if b <= 1000:
        return math.log2(x)
    shift = b - 64
    return shift + math.log2(x >> shift)


def log2_factorial(k: int) -> float:
    return math.lgamma(k + 1) / LN2


@dataclass(frozen=True)
class LogQuantity:
    log2_value: float
    exact: int | None = None

    def __post_init__(self):
        if self.exact is not None:
            ref = log2_int(self.exact)
            if ref == NEG_INF:
                ok = self.log2_value == NEG_INF
            else:
                ok = abs(ref - self.log2_value) <= 1e-9 * max(1.0, abs(ref))
            if not ok:
                raise ValueError(f"log2 {self.log2_value} disagrees with exact value ({ref})")

    @classmethod
    def of(cls, x: int) -> "LogQuantity":
        return cls(log2_int(x), x)

    @property
    def is_zero(self) -> bool:
        return self.log2_value == NEG_INF

    def to_json(self) -> dict:
        out = {"log2": fmt(self.log2_value)}
        if self.exact is not None and self.exact.bit_length() <= 256:
            out["exact"] = str(self.exact)
        return out


def fmt(x: float):
    """JSON-safe float: infinities become strings."""
    if math.isinf(x):
        return "-inf" if x < 0 else "inf"
    return x


def log2_binom(n: int, k: int, exact: bool = True) -> LogQuantity:
    """log2 C(n, k) for integers of any size; exact when asked and small enough."""
    if k < 0 or k > n:
        return LogQuantity(NEG_INF, 0)
    k = min(k, n - k)
    if k == 0:
        return LogQuantity(0.0, 1)
    est = k * log2_int(n)
    if exact and est <= EXACT_BITS and k <= 50_000:
        return LogQuantity.of(math.comb(n, k))
    if n >= 10**6 * k:
        # C(n,k) = n^k/k! * prod(1 - i/n); the product is exp(-k(k-1)/2n) up to O(k^3/n^2)
        corr = 0.0 if n.bit_length() > 1100 else -(k * (k - 1) / 2) / n / LN2
        return LogQuantity(k * log2_int(n) - log2_factorial(k) + corr)
    digits = int(math.log10(est + 10)) + 30
    with mpmath.workdps(digits):
        val = (mpmath.loggamma(n + 1) - mpmath.loggamma(k + 1) - mpmath.loggamma(n - k + 1)) / mpmath.log(2)
        return LogQuantity(float(val))


# elementary bounds ----------------------------------------------------------

class BinomBounds(NamedTuple):
    lower: float
    exact: int
    upper: float


def binom_bounds(n: int, k: int) -> BinomBounds:
    """``(n/k)^k <= C(n,k) <= (ne/k)^k`` with the middle value exact; k = 0 gives (1, 1, 1)."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    if k == 0:
        return BinomBounds(1.0, 1, 1.0)
    return BinomBounds((n / k) ** k, math.comb(n, k), (n * math.e / k) ** k)


def binom_bounds_log2(n: int, k: int) -> tuple[float, LogQuantity, float]:
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    if k == 0:
        return 0.0, LogQuantity(0.0, 1), 0.0
    lr = math.log2(n / k)
    return k * lr, log2_binom(n, k), k * (lr + math.log2(math.e))


class SparseCount(NamedTuple):
    exact: int | None
    bound: LogQuantity


def sparse_connected_count_and_bound(k: int, cap: int = config.SPARSE_COUNT_CAP) -> SparseCount:
    """Unlabeled connected k-vertex graphs with at most ``k-1+k/ln k`` edges, against ``100^k``."""
    from .generate import unlabeled_graphs
    from .tinyness import tau

    if k < 1:
        raise ValueError("k must be >= 1")
    bound = LogQuantity(k * math.log2(100), 100**k)
    if k > cap:
        return SparseCount(None, bound)
    count = len(unlabeled_graphs(k, math.floor(tau(k)), connected=True))
    assert count < bound.exact
    return SparseCount(count, bound)


def chernoff_bound(mu: float, t: float) -> float:
    """``2 exp(-t^2 / (2(mu + t/3)))``, never above 2."""
    if mu < 0 or t < 0:
        raise ValueError("mu and t must be non-negative")
    if t == 0:
        return 2.0
    return min(2.0, 2.0 * math.exp(-t * t / (2.0 * (mu + t / 3.0))))


@dataclass
class SmallDenseReport:
    precondition_holds: bool
    precondition_lhs: float
    log_n: float
    per_k: dict[int, float]
    total: float
    blanket: float
    formula: str = ("sum over 5 <= k <= t of n^(-k/(3 ln k)); blanket 15/n; "
                    "requires 3 ln((d+1)e^2) ln t <= ln n")

    def to_json(self) -> dict:
        return {"precondition_holds": self.precondition_holds,
                "precondition_lhs": self.precondition_lhs, "log_n": self.log_n,
                "per_k": {str(k): v for k, v in self.per_k.items()}, "total": self.total,
                "blanket": self.blanket, "formula": self.formula}


def small_dense_probability(n: int, d: float, t: int) -> SmallDenseReport:
    """Per-k bounds on a small dense subgraph appearing in G(n, d/n)."""
    ln_n = math.log(n)
    lhs = 3 * math.log((d + 1) * math.e**2) * math.log(t) if t >= 1 else NEG_INF
    per_k = {k: math.exp(-k / (3 * math.log(k)) * ln_n) for k in range(5, int(t) + 1)}
    return SmallDenseReport(lhs <= ln_n, lhs, ln_n, per_k, sum(per_k.values()), 15 / n)


def dense_count_beta_log2(d: float) -> float:
    """log2 of ``2 (e^2 d)^(e^2 d)`` (0^0 taken as 1)."""
    if d < 0:
        raise ValueError("d must be non-negative")
    if d == 0:
        return 1.0
    a = math.e**2 * d
    return 1.0 + a * math.log2(a)


def dense_count_beta(d: float) -> float:
    lg = dense_count_beta_log2(d)
    return 2.0 ** lg if lg < 1024 else math.inf


def tiny_constant(d: float) -> float:
    """A concrete ``c(d)`` with ``100^k + k^2 beta^k <= c^k`` for all k >= 1.

    Uses ``k^(2/k) <= e^(2/e) < 3``.
    """
    return 100.0 + 3.0 * dense_count_beta(d)


class NotTiny(NamedTuple):
    value: float
    informative: bool
    raw: float


def not_tiny_probability(n: int, d: float) -> NotTiny:
    """``200 sqrt(d/n)`` clamped to 1; ``informative`` is False when the raw value is >= 1."""
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    raw = 200 * math.sqrt(d) / math.sqrt(n)
    return NotTiny(min(raw, 1.0), raw < 1.0, raw)


# induced diversity ----------------------------------------------------------

@dataclass
class DiversityBound:
    value: LogQuantity
    in_range: bool
    vacuous: bool
    k_range: tuple[float, float]
    formula: str = "(delta (n/k)^(delta/2))^k"

    def to_json(self) -> dict:
        return {"log2": fmt(self.value.log2_value), "in_range": self.in_range,
                "vacuous": self.vacuous, "k_range": list(self.k_range), "formula": self.formula}


def induced_diversity_lower_bound(n: int, d: float, k: int, delta: float) -> DiversityBound:
    """log2 of ``(delta (n/k)^(delta/2))^k``, flagged outside ``n/sqrt(d) <= k <= sqrt(delta) n``."""
    if k < 1 or n < 1 or not delta > 0:
        raise ValueError("need n, k >= 1 and delta > 0")
    lg = k * (math.log2(delta) + (delta / 2) * math.log2(n / k))
    lo = n / math.sqrt(d) if d > 0 else math.inf
    hi = math.sqrt(delta) * n
    in_range = 1 <= d <= n / 2 and lo <= k <= hi
    return DiversityBound(LogQuantity(lg), in_range, lg <= 0, (lo, hi))


@dataclass
class UnionBoundTerm:
    log2_value: float
    mu: float
    vacuous: bool
    formula: str = "C(n,k)^2 k! p^((1-3 delta) mu), mu = C(k,2) p, p = d/n"

    def to_json(self) -> dict:
        return {"log2": self.log2_value, "mu": self.mu, "vacuous": self.vacuous,
                "formula": self.formula}


def isomorphic_pair_union_bound(n: int, d: float, k: int, delta: float) -> UnionBoundTerm:
    """log2 of the union bound on two far-apart k-sets inducing isomorphic graphs."""
    if not 0 < d < n or not 1 <= k <= n:
        raise ValueError("need 0 < d < n and 1 <= k <= n")
    p = d / n
    mu = math.comb(k, 2) * p
    lg = 2 * log2_binom(n, k).log2_value + log2_factorial(k) + (1 - 3 * delta) * mu * math.log2(p)
    return UnionBoundTerm(lg, mu, lg >= 0)


@dataclass
class RatioCheck:
    lhs_log2: float
    rhs_log2: float
    holds: bool
    k_prime: int
    label: str

    def to_json(self) -> dict:
        return {"lhs_log2": self.lhs_log2, "rhs_log2": self.rhs_log2, "holds": self.holds,
                "k_prime": self.k_prime, "label": self.label,
                "formula": "C(n,k)/C(n,k-k') >= 2 (2 delta (n/k)^(delta/2))^k, k' = ceil(delta k)"}


def claim4_ratio_check(n: int, k: int, delta: float) -> RatioCheck:
    """Finite-n check of ``C(n,k) / C(n,k-k') >= 2 (2 delta (n/k)^(delta/2))^k``."""
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    kp = ceil_tolerant(delta * k)
    if not 1 <= k <= n or kp > k:
        raise ValueError(f"need k' <= k <= n, got n={n}, k={k}, k'={kp}")
    ratio = Fraction(math.comb(n, k), math.comb(n, k - kp))
    lhs = log2_int(ratio.numerator) - log2_int(ratio.denominator)
    base = 2 * delta * (n / k) ** (delta / 2)
    rhs = 1 + k * math.log2(base)
    holds = lhs >= rhs
    return RatioCheck(lhs, rhs, holds, kp, "holds" if holds else "below asymptotic regime")


# universal-graph counting ---------------------------------------------------

@dataclass
class Representable:
    eq3: LogQuantity
    eq1_log2: float
    u: int
    k_n: int

    def to_json(self) -> dict:
        return {"eq3": self.eq3.to_json(), "eq1_log2": self.eq1_log2, "u": self.u, "k_n": self.k_n,
                "formula": "2^(u^2) C(C(u,n), k_n) <= 2^(u^2) u^(n k_n), u = n^s, k_n = n^(2s-1)"}


def representable_collections_log(n: int, s: int, exact: bool = True) -> Representable:
    """Collections of ``k_n`` n-vertex graphs that fit in one ``n^s``-vertex graph.

    ``eq3`` is ``2^(u^2) * C(C(u, n), k_n)`` (exact when small enough) and
    ``eq1_log2`` its relaxation ``u^2 + k_n n log2 u``.
    """
    if n < 2 or s < 1:
        raise ValueError("need n >= 2 and s >= 1")
    u = n**s
    k_n = n ** (2 * s - 1)
    eq1 = u * u + k_n * n * math.log2(u)
    inner_q = log2_binom(u, n, exact=exact or n <= 64)
    if inner_q.exact is None:
        # C(u, n) is astronomically larger than k_n here; only its log is needed
        lm = inner_q.log2_value
        lk = log2_int(k_n)
        if lm < lk + 25:
            raise ValueError(f"C(u, n) too close to k_n for the log form at n={n}")
        outer = LogQuantity(k_n * lm - log2_factorial(k_n))
        return Representable(LogQuantity(u * u + outer.log2_value), eq1, u, k_n)
    inner = inner_q.exact
    if inner < k_n:
        return Representable(LogQuantity(NEG_INF, 0), eq1, u, k_n)
    outer = log2_binom(inner, k_n, exact)
    if outer.exact is not None and u * u + outer.exact.bit_length() <= EXACT_BITS:
        return Representable(LogQuantity.of(outer.exact << (u * u)), eq1, u, k_n)
    return Representable(LogQuantity(u * u + outer.log2_value), eq1, u, k_n)


def xd_count_log2(n: int, d: float) -> float:
    """log2 of ``(1 - 200 sqrt(d/n)) n^(-n) (n/d)^(d(n-1)/2)``; ``-inf`` when the first factor is <= 0."""
    if d <= 0:
        raise ValueError("d must be positive")
    if 40000 * d >= n:
        return NEG_INF
    factor = 1.0 - 200.0 * math.sqrt(d / n)
    return math.log2(factor) - n * math.log2(n) + (d * (n - 1) / 2) * math.log2(n / d)


def available_collections_log(n: int, s: int, d: float | None = None) -> LogQuantity:
    """Lower bound on collections of ``k_n`` distinct members of X_d, ``k_n = n^(2s-1)``.

    Uses ``C(N, k) >= (X/k)^k`` where ``X <= N`` is the explicit count bound
    from :func:`xd_count_log2`; ``d`` defaults to ``2s + 4``. Returns ``-inf``
    (no certified collection) when ``X < k_n``.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    d = 2 * s + 4 if d is None else d
    if d <= 2:
        raise ValueError("d must exceed 2")
    k_n = n ** (2 * s - 1)
    lx = xd_count_log2(n, d)
    lk = log2_int(k_n)
    if lx == NEG_INF or lx < lk:
        return LogQuantity(NEG_INF)
    return LogQuantity(k_n * (lx - lk))


@dataclass
class BoundReport:
    s: int
    d: float
    ns: list[int]
    representable: list[float]
    representable_eq1: list[float]
    available: list[float]
    crossover_n: int | None
    crossover_eq1_n: int | None
    verification: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"s": self.s, "d": self.d, "n": self.ns,
                "representable_log2": [fmt(x) for x in self.representable],
                "representable_eq1_log2": [fmt(x) for x in self.representable_eq1],
                "available_log2": [fmt(x) for x in self.available],
                "crossover_n": self.crossover_n, "crossover_eq1_n": self.crossover_eq1_n,
                "verification": self.verification,
                "formulas": {"representable": "2^(u^2) C(C(u,n),k_n), u = n^s, k_n = n^(2s-1)",
                             "representable_eq1": "2^(u^2) u^(n k_n)",
                             "available": "(X/k_n)^k_n, X = (1-200 sqrt(d/n)) n^(-n) (n/d)^(d(n-1)/2)"}}


def _grid(n_min: int, n_max: int, ratio: float = 1.25) -> list[int]:
    pts = [n_min]
    while pts[-1] < n_max:
        pts.append(min(n_max, max(pts[-1] + 1, int(pts[-1] * ratio))))
    return pts


def _gap(n: int, s: int, d: float, use_eq1: bool) -> bool:
    rep = representable_collections_log(n, s, exact=False)
    right = rep.eq1_log2 if use_eq1 else rep.eq3.log2_value
    return available_collections_log(n, s, d).log2_value > right


def _first_above(ns: list[int], ok: list[bool], s: int, d: float, use_eq1: bool) -> int | None:
    for i, flag in enumerate(ok):
        if flag:
            if i == 0:
                return ns[0]
            lo, hi = ns[i - 1], ns[i]
            # invariant: gap fails at lo and holds at hi
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if _gap(mid, s, d, use_eq1):
                    hi = mid
                else:
                    lo = mid
            return hi
    return None


def crossover_report(s: int, n_min: int = 2, n_max: int = 10**7, d: float | None = None) -> BoundReport:
    """Both curves over a geometric grid plus the first n where available beats representable.

    The grid bracket is refined by bisection to step 1.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    d = 2 * s + 4 if d is None else d
    ns = _grid(max(2, n_min), n_max)
    rep = [representable_collections_log(n, s, exact=False) for n in ns]
    av = [available_collections_log(n, s, d).log2_value for n in ns]
    ok3 = [a > r.eq3.log2_value for a, r in zip(av, rep)]
    ok1 = [a > r.eq1_log2 for a, r in zip(av, rep)]
    cross = _first_above(ns, ok3, s, d, False)
    cross1 = _first_above(ns, ok1, s, d, True)
    report = BoundReport(s, d, ns, [r.eq3.log2_value for r in rep], [r.eq1_log2 for r in rep],
                         av, cross, cross1)
    if cross is not None:
        report.verification = verify_crossover(s, cross, d)
    return report


def crossover_n(s: int, n_min: int = 2, n_max: int = 10**7) -> int | None:
    return crossover_report(s, n_min, n_max).crossover_n


def verify_crossover(s: int, n: int, d: float | None = None) -> dict:
    """Re-evaluate both sides at ``n`` and ``n - 1`` (exact representable count where feasible)."""
    d = 2 * s + 4 if d is None else d
    out = {}
    for m in (n - 1, n):
        if m < 2:
            continue
        rep = representable_collections_log(m, s, exact=True)
        av = available_collections_log(m, s, d).log2_value
        out[str(m)] = {"available_log2": fmt(av), "representable_log2": fmt(rep.eq3.log2_value),
                       "representable_exact": rep.eq3.exact is not None,
                       "available_exceeds": av > rep.eq3.log2_value}
    return out
