import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import graphs
from tinygraph.classes import (LevelSet, build_mon_closure_census, ceil_exp_sqrt, fit_alpha,
                               gamma_for, is_t_sparse, k_level, ladder, sample_xd_graph)
from tinygraph.graph import complete_graph, cycle_graph, path_graph
from tinygraph.tinyness import certify_cyt_tiny


def test_ladder_prefix():
    assert ladder(5).levels == [1, 3, 6, 12, 32, 287]
    assert ladder(6).levels == oracles.ladder_levels(6)
    assert ladder(0).levels == [1]
    with pytest.raises(ValueError):
        ladder(-1)


def test_ladder_truncates_and_stays_sparse():
    spec = ladder(8)
    assert spec.truncated
    assert len(str(spec.levels[-1])) > 2000
    assert is_t_sparse(spec.levels) == (True, None)


@given(st.integers(1, 10**6))
def test_ceil_exp_sqrt_against_mpmath(x):
    import mpmath
    # enough digits for the integer part plus a guard margin
    with mpmath.workdps(int(math.sqrt(x) / math.log(10)) + 30):
        assert ceil_exp_sqrt(x) == int(mpmath.ceil(mpmath.e ** mpmath.sqrt(x)))


def test_t_sparse_examples():
    assert is_t_sparse([4, 5]) == (False, (4, 5))
    assert is_t_sparse([7]) == (True, None)
    with pytest.raises(ValueError):
        is_t_sparse([5, 4])
    with pytest.raises(ValueError):
        is_t_sparse([1, 2], "log")


def test_gamma_and_level_targets():
    assert k_level(12, 2) == 12**3
    g = gamma_for(2, 3)
    # l^(2s-1) <= gamma^(ln^2 l) at and above the smallest level
    for lvl in (3, 6, 12, 32, 287):
        assert 3 * math.log(lvl) <= math.log(lvl) ** 2 * math.log(g) + 1e-12


def test_level_set_validation_and_shortfall():
    ls = LevelSet(6, [cycle_graph(6)], target=5)
    assert ls.shortfall == 4
    with pytest.raises(ValueError):
        LevelSet(5, [cycle_graph(6)])


def test_closure_examples():
    c = build_mon_closure_census([LevelSet(6, [cycle_graph(6)])], 3)
    assert c.counts == {1: 1, 2: 2, 3: 3}
    empty = build_mon_closure_census([], 4)
    assert empty.counts == {1: 0, 2: 0, 3: 0, 4: 0}
    assert c.to_json()["scope"].startswith("finite truncation")


def test_closure_monotone_and_order_invariant():
    a = LevelSet(6, [cycle_graph(6)])
    b = LevelSet(12, [path_graph(12)])
    one = build_mon_closure_census([a, b], 4)
    two = build_mon_closure_census([b, a], 4)
    assert one.counts == two.counts
    more = build_mon_closure_census([LevelSet(6, [cycle_graph(6), complete_graph(6)]), b], 4)
    assert all(more.counts[k] >= one.counts[k] for k in one.counts)


@settings(max_examples=20)
@given(graphs(min_n=3, max_n=7), st.data())
def test_closure_relabel_invariant(g, data):
    perm = data.draw(st.permutations(list(range(g.n))))
    a = build_mon_closure_census([LevelSet(g.n, [g])], 3)
    b = build_mon_closure_census([LevelSet(g.n, [g.relabel(perm)])], 3)
    assert a.counts == b.counts


def test_closure_budget_keeps_partial_output():
    c = build_mon_closure_census([LevelSet(10, [complete_graph(10)])], 6, budget=3000)
    assert c.limited_by is not None and c.complete_up_to < 6
    assert set(c.counts) == set(range(1, c.complete_up_to + 1))


def test_fit_alpha():
    a = fit_alpha({1: 1, 2: 2, 3: 3, 4: 7})
    assert all(v <= a**k for k, v in {1: 1, 2: 2, 3: 3, 4: 7}.items())
    assert a == pytest.approx(7 ** 0.25)


def test_xd_trivial_and_edge_count():
    r = sample_xd_graph(30, 0, 1, seed=4)
    assert r.accepted and r.tries == 1 and r.graph.edge_count == 0
    r = sample_xd_graph(50, 1, 100, seed=1, desk_k0=5)
    assert r.accepted and r.graph.edge_count == 25
    again = certify_cyt_tiny(r.graph, 100, 1, desk_k0=5)
    assert again.outcome == "holds"


def test_xd_rejection_report():
    r = sample_xd_graph(14, 6, 1.0, seed=2, max_tries=3, desk_k0=4)
    assert not r.accepted and r.graph is None and r.tries == 3
    assert [v["try"] for v in r.verdicts] == [1, 2, 3]
    assert all(v["outcome"] == "violated" for v in r.verdicts)


def test_xd_pilot_n50_d4_frozen():
    # pilot-frozen: accepted on the first try; the census budget stops condition two
    # before any order above ln^2 50, which the verdict records as k_cap = 15
    from tinygraph.bounds import tiny_constant
    r = sample_xd_graph(50, 4, tiny_constant(4), seed=1)
    assert r.accepted and r.tries == 1 and r.graph.edge_count == 98
    assert r.verdicts[0]["k_cap"] == 15 and r.verdicts[0]["k"] == 16
