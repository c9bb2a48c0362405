"""Sparse level sequences, level sets and finite truncations of monotone closures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from typing import Callable, Sequence

from . import config
from .canon import Certificate
from .census import census_subgraphs
from .errors import BudgetExceeded
from .graph import Graph
from .random_models import child_seed, edges_for_degree, sample_gnm
from .tinyness import TinynessVerdict, certify_cyt_tiny

MAX_DIGITS = 100_000


# ladder ---------------------------------------------------------------------

def ceil_exp_sqrt(x: int, max_digits: int = MAX_DIGITS) -> int | None:
    """``ceil(e^sqrt(x))`` proven by interval evaluation; None when it needs more than ``max_digits`` digits."""
    if x.bit_length() > 1000:
        return None
    approx_digits = math.sqrt(x) / math.log(10)
    if approx_digits > max_digits:
        return None
    prec = int(approx_digits) + 30
    while True:
        with localcontext() as ctx:
            ctx.prec = prec
            val = Decimal(x).sqrt().exp()
            # sqrt and exp are correctly rounded; bound the propagated relative error generously
            err = val * Decimal(10) ** (-(prec - 2)) * (Decimal(x).sqrt() + 4)
            lo, hi = val - err, val + err
            c_lo = int(lo.to_integral_value(rounding="ROUND_CEILING"))
            c_hi = int(hi.to_integral_value(rounding="ROUND_CEILING"))
            # the value is never an integer (transcendental), so a clean bracket decides it
            if c_lo == c_hi and lo != lo.to_integral_value():
                return c_lo
        prec *= 2


@dataclass
class LadderSpec:
    levels: list[int]
    t_kind: str = "ln2"
    truncated: bool = False

    def to_json(self) -> dict:
        return {"levels": [str(x) if x.bit_length() > 53 else x for x in self.levels],
                "t_kind": self.t_kind, "truncated": self.truncated}


def ladder(i_max: int, max_digits: int = MAX_DIGITS) -> LadderSpec:
    """``l_0 = 1``, ``l_{i+1} = ceil(e^sqrt(l_i))`` up to index ``i_max``.

    Levels whose decimal expansion would exceed ``max_digits`` are not
    materialized; the result is cut there with ``truncated=True``.
    """
    if i_max < 0:
        raise ValueError("i_max must be >= 0")
    levels = [1]
    for _ in range(i_max):
        nxt = ceil_exp_sqrt(levels[-1], max_digits)
        if nxt is None:
            return LadderSpec(levels, truncated=True)
        levels.append(nxt)
    return LadderSpec(levels)


def _ln_sq(x: int) -> float:
    return math.log(x) ** 2


T_FUNCS: dict[str, Callable[[int], float]] = {"ln2": _ln_sq}


def _t_at_least(t_kind: str, y: int, x: int) -> bool:
    """``t(y) <= x`` decided in extended precision when the float is too close to call."""
    val = T_FUNCS[t_kind](y)
    if abs(val - x) > 1e-6 * max(1.0, x):
        return val <= x
    # consecutive ladder levels sit within e^(-sqrt x) of equality, so keep doubling
    prec = 60
    while True:
        with localcontext() as ctx:
            ctx.prec = prec
            diff = Decimal(y).ln() ** 2 - x
            err = Decimal(10) ** (-(prec - 10)) * (abs(Decimal(x)) + 1)
            if abs(diff) > err:
                return diff < 0
        prec *= 2


def is_t_sparse(levels: Sequence[int], t_kind: str = "ln2") -> tuple[bool, tuple[int, int] | None]:
    """No pair ``x < y`` in ``levels`` with ``t(y) <= x``; returns the first violating pair if any.

    Consecutive pairs suffice because t is increasing and the levels sorted.
    """
    if t_kind not in T_FUNCS:
        raise ValueError(f"unknown t {t_kind!r}")
    levels = list(levels)
    if any(a >= b for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be strictly increasing")
    for x, y in zip(levels, levels[1:]):
        if _t_at_least(t_kind, y, x):
            return False, (x, y)
    return True, None


# level sets -----------------------------------------------------------------

def k_level(n: int, s: int) -> int:
    """Target level-set size ``n^(2s-1)``."""
    return n ** (2 * s - 1)


def gamma_for(s: int, min_level: int = 3) -> float:
    """Smallest ``gamma`` with ``l^(2s-1) <= gamma^(ln^2 l)`` for every level ``l >= min_level``.

    ``(2s-1) ln l <= ln^2(l) ln(gamma)`` is tightest at the smallest level.
    """
    if min_level < 2:
        raise ValueError("min_level must be >= 2")
    return math.exp((2 * s - 1) / math.log(min_level))


@dataclass
class LevelSet:
    level: int
    graphs: list[Graph]
    target: int | None = None

    def __post_init__(self):
        for g in self.graphs:
            if g.n != self.level:
                raise ValueError(f"graph with {g.n} vertices in level {self.level}")

    @property
    def shortfall(self) -> int | None:
        return None if self.target is None else max(0, self.target - len(self.graphs))

    def within_gamma(self, gamma: float, t_kind: str = "ln2") -> bool:
        if not self.graphs:
            return True
        t = T_FUNCS[t_kind](self.level) if self.level > 1 else 0.0
        return math.log(len(self.graphs)) <= t * math.log(gamma) + 1e-12


# X_d sampling ---------------------------------------------------------------

@dataclass
class XdSample:
    graph: Graph | None
    accepted: bool
    tries: int
    verdicts: list[dict]
    params: dict

    def to_json(self) -> dict:
        from .graph import write_graph6
        return {"graph6": write_graph6(self.graph) if self.graph is not None else None,
                "accepted": self.accepted, "tries": self.tries, "verdicts": self.verdicts,
                "params": self.params}


def sample_xd_graph(n: int, d: float, c: float, seed: int, max_tries: int = 20,
                    desk_k0: int | None = None, budget: int = config.CERTIFY_BUDGET,
                    bnb_budget: int = config.BNB_BUDGET) -> XdSample:
    """Rejection-sample G(n, ceil(d(n-1)/2)) until a draw certifies as monotone (c, S_d, ln^2)-tiny."""
    m = edges_for_degree(n, d)
    params = {"n": n, "d": d, "m": m, "c": c, "seed": seed, "max_tries": max_tries,
              "desk_k0": desk_k0, "budget": budget}
    verdicts = []
    for i in range(max_tries):
        sub = child_seed(seed, "xd", i)
        g = sample_gnm(n, m, sub)
        v: TinynessVerdict = certify_cyt_tiny(g, c, d, budget, desk_k0, bnb_budget)
        verdicts.append({"try": i + 1, "seed": sub, "outcome": v.outcome, "k": v.k,
                         "k_cap": v.detail.get("k_cap")})
        if v.outcome == "holds":
            return XdSample(g, True, i + 1, verdicts, params)
    return XdSample(None, False, max_tries, verdicts, params)


# closure census -------------------------------------------------------------

@dataclass
class ClosureCensus:
    n_max: int
    counts: dict[int, int]
    alpha: float
    per_level: dict[int, dict[int, int]]
    complete_up_to: int
    limited_by: dict | None = None
    analytic: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"n_max": self.n_max, "counts": {str(k): v for k, v in self.counts.items()},
                "alpha": self.alpha,
                "per_level": {str(l): {str(k): v for k, v in c.items()} for l, c in self.per_level.items()},
                "complete_up_to": self.complete_up_to, "limited_by": self.limited_by,
                "analytic": self.analytic,
                "scope": "finite truncation: only the listed levels and k <= n_max"}


def fit_alpha(counts: dict[int, int]) -> float:
    a = 1.0
    for k, cnt in counts.items():
        if k >= 1 and cnt > 0:
            a = max(a, cnt ** (1.0 / k))
    while any(cnt > a**k for k, cnt in counts.items() if k >= 1):
        a = math.nextafter(a, math.inf)
    return a


def build_mon_closure_census(level_sets: Sequence[LevelSet], n_max: int,
                             budget: int = config.CENSUS_BUDGET, workers: int = 1,
                             gamma: float | None = None, c: float | None = None) -> ClosureCensus:
    """Exact number of unlabeled k-vertex subgraphs across all level members, k = 1..n_max.

    A budget refusal at some order keeps the orders below it and records the
    limit in ``limited_by``.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    levels = sorted(ls.level for ls in level_sets)
    if len(set(levels)) != len(levels):
        raise ValueError("duplicate level")
    union: dict[int, set[Certificate]] = {k: set() for k in range(1, n_max + 1)}
    per_level: dict[int, dict[int, int]] = {}
    reach = n_max
    limited = None
    for ls in sorted(level_sets, key=lambda x: x.level):
        lvl_union: dict[int, set[Certificate]] = {k: set() for k in range(1, min(n_max, ls.level) + 1)}
        for g in ls.graphs:
            k_top = min(reach, g.n)
            try:
                table = census_subgraphs(g, k_top, budget, workers)
            except BudgetExceeded as exc:
                reach = exc.k - 1
                limited = {"level": ls.level, "k": exc.k, "budget": budget}
                table = census_subgraphs(g, min(reach, g.n), budget, workers)
            for k in range(1, min(reach, g.n) + 1):
                certs = set(table.per_k[k])
                union[k] |= certs
                lvl_union[k] |= certs
        per_level[ls.level] = {k: len(v) for k, v in lvl_union.items() if k <= reach}
    counts = {k: len(v) for k, v in union.items() if k <= reach}
    per_level = {l: {k: v for k, v in c.items() if k <= reach} for l, c in per_level.items()}
    analytic = {}
    if gamma is not None and c is not None:
        analytic = {"gamma": gamma, "c": c, "gamma_times_c": gamma * c}
    return ClosureCensus(n_max, counts, fit_alpha(counts), per_level, reach, limited, analytic)
