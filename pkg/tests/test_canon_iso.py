import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from oracles import atlas, from_nx, pairwise_classes, to_nx
from tinygraph.canon import (canonical_certificate, canonical_graph, canonical_order,
                             deserialize, serialize)
from tinygraph.errors import CapacityError
from tinygraph.generate import unlabeled_graphs
from tinygraph.graph import Graph, cycle_graph, disjoint_union, path_graph, petersen_graph
from tinygraph.iso import (are_isomorphic, find_induced_embedding, find_isomorphism,
                           find_subgraph_embedding, is_induced_embeddable, is_subgraph)


@given(graphs(max_n=10), st.data())
def test_certificate_invariant_under_relabeling(g, data):
    perm = data.draw(st.permutations(list(range(g.n))))
    assert canonical_certificate(g) == canonical_certificate(g.relabel(perm))


@given(graphs(min_n=4, max_n=7), graphs(min_n=4, max_n=7))
def test_certificate_equality_iff_isomorphic(g, h):
    same = canonical_certificate(g) == canonical_certificate(h)
    assert same == (g.n == h.n and nx.is_isomorphic(to_nx(g), to_nx(h)))


@given(graphs(max_n=10))
def test_canonical_form_is_isomorphic_and_order_is_permutation(g):
    c = canonical_graph(g)
    assert nx.is_isomorphic(to_nx(c), to_nx(g))
    order = canonical_order(g)
    assert sorted(order) == list(range(g.n))
    # the order realizes the canonical form
    pos = {v: i for i, v in enumerate(order)}
    assert g.relabel([pos[v] for v in range(g.n)]) == c


@given(graphs(max_n=11))
def test_serialize_round_trip(g):
    assert deserialize(serialize(g.n, g.rows)) == g


@pytest.mark.parametrize("n", range(0, 7))
def test_atlas_classes_get_distinct_certificates(n):
    certs = {canonical_certificate(from_nx(h)) for h in atlas(n)}
    assert len(certs) == len(atlas(n))


@pytest.mark.parametrize("n,count", [(0, 1), (1, 1), (2, 2), (3, 4), (4, 11), (5, 34), (6, 156)])
def test_generator_counts(n, count):
    gs = unlabeled_graphs(n)
    assert len(gs) == count == len(atlas(n))
    assert pairwise_classes(gs) == count


def test_hard_regular_instances():
    # strongly regular / vertex-transitive inputs exercise automorphism pruning
    for g in (petersen_graph(), cycle_graph(12), from_nx(nx.circulant_graph(13, [1, 5])),
              from_nx(nx.hypercube_graph(4)), from_nx(nx.paley_graph(13).to_undirected())):
        import random
        rng = random.Random(7)
        perm = list(range(g.n))
        rng.shuffle(perm)
        assert canonical_certificate(g) == canonical_certificate(g.relabel(perm))
    # two non-isomorphic 3-regular graphs on 8 vertices
    cube = from_nx(nx.hypercube_graph(3))
    wagner = from_nx(nx.circulant_graph(8, [1, 4]))
    assert canonical_certificate(cube) != canonical_certificate(wagner)


def test_components_ordering_is_canonical():
    a = disjoint_union(path_graph(3), cycle_graph(4))
    b = disjoint_union(cycle_graph(4), path_graph(3))
    assert canonical_certificate(a) == canonical_certificate(b)


def test_capacity_gate():
    g = Graph.from_edges(65, [])
    with pytest.raises(CapacityError):
        canonical_certificate(g)
    assert canonical_certificate(g, max_n=None)


@given(graphs(max_n=8), st.data())
def test_find_isomorphism_returns_valid_map(g, data):
    perm = data.draw(st.permutations(list(range(g.n))))
    h = g.relabel(perm)
    phi = find_isomorphism(g, h)
    assert phi is not None and sorted(phi) == list(range(g.n))
    assert all(g.has_edge(u, v) == h.has_edge(phi[u], phi[v])
               for u in range(g.n) for v in range(u + 1, g.n))
    assert are_isomorphic(g, h)


@given(graphs(max_n=5), graphs(min_n=5, max_n=8))
def test_embeddings_match_vf2(h, u):
    gm = nx.algorithms.isomorphism.GraphMatcher(to_nx(u), to_nx(h))
    assert is_induced_embeddable(h, u) == gm.subgraph_is_isomorphic()
    assert is_subgraph(h, u) == gm.subgraph_is_monomorphic()
    phi = find_induced_embedding(h, u)
    if phi is not None:
        assert len(set(phi)) == h.n
        assert all(h.has_edge(a, b) == u.has_edge(phi[a], phi[b])
                   for a in range(h.n) for b in range(a + 1, h.n))
    psi = find_subgraph_embedding(h, u)
    if psi is not None:
        assert all(u.has_edge(psi[a], psi[b]) for a, b in h.edges())
