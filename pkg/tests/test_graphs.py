import json
from itertools import combinations

import numpy as np
import pytest

from distcc.errors import OddDimension, TooLarge
from distcc.graphs import (
    Graph,
    OrthRepresentation,
    advantage_ratio,
    complete_graph,
    cycle_graph,
    graph_from_json,
    graph_to_json,
    hadamard_bits,
    hadamard_degree,
    hadamard_graph,
    independence_number,
    maximum_independent_set,
    small_graph_catalog,
    verify_orth_representation,
)


def brute_alpha(G: Graph) -> int:
    n = G.n_vertices
    A = G.adjacency
    for k in range(n, 0, -1):
        for S in combinations(range(n), k):
            if not any(A[u, v] for u, v in combinations(S, 2)):
                return k
    return 0


def random_graph(rng, n, p):
    A = np.triu(rng.random((n, n)) < p, 1)
    return Graph(A | A.T)


def test_cycle_and_complete():
    assert cycle_graph(5).edges == [(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]
    assert len(complete_graph(4).edges) == 6
    with pytest.raises(ValueError):
        cycle_graph(2)


def test_graph_rejects_bad_adjacency():
    with pytest.raises(ValueError):
        Graph(np.array([[0, 1], [0, 0]], dtype=bool))
    with pytest.raises(ValueError):
        Graph(np.eye(2, dtype=bool))


def test_hadamard_graph_h4():
    G = hadamard_graph(4)
    assert G.n_vertices == 16
    assert set(G.degrees.tolist()) == {6}
    assert hadamard_degree(4) == 6
    assert G.label == "H4"
    bits = hadamard_bits(4)
    assert bits[1].tolist() == [0, 0, 0, 1]  # big-endian rows


def test_hadamard_graph_errors():
    with pytest.raises(OddDimension):
        hadamard_graph(3)
    with pytest.raises(TooLarge):
        hadamard_graph(14)


def test_hadamard_vertex_transitive(rng):
    d = 6
    G = hadamard_graph(d)
    for _ in range(5):
        mask = int(rng.integers(0, 2**d))
        perm = np.arange(2**d) ^ mask
        assert np.array_equal(G.adjacency[np.ix_(perm, perm)], G.adjacency)


def test_catalog():
    cat = small_graph_catalog()
    labels = [G.label for G in cat]
    assert labels == ["path-3", "triangle", "path-4", "star-4", "cycle-4", "paw", "diamond", "K4"]
    alphas = {G.label: brute_alpha(G) for G in cat}
    assert max(alphas.values()) == 3 and alphas["star-4"] == 3
    for G in cat:
        assert independence_number(G) == alphas[G.label]
    # pairwise non-isomorphic: compare sorted degree sequences plus edge counts
    sigs = {(len(G.edges), tuple(sorted(G.degrees.tolist()))) for G in cat}
    assert len(sigs) == 8


def test_known_independence_numbers():
    assert independence_number(cycle_graph(7)) == 3
    assert independence_number(cycle_graph(63)) == 31
    assert independence_number(complete_graph(5)) == 1
    assert independence_number(hadamard_graph(4)) == 4
    assert maximum_independent_set(hadamard_graph(4)) == (0, 1, 14, 15)


def test_mis_against_exhaustive(rng):
    for _ in range(120):
        n = int(rng.integers(1, 13))
        G = random_graph(rng, n, float(rng.uniform(0.1, 0.9)))
        S = maximum_independent_set(G)
        assert len(S) == brute_alpha(G)
        assert not any(G.adjacency[u, v] for u, v in combinations(S, 2))
        assert len(S) >= n / (G.degrees.max(initial=0) + 1)


def test_mis_cap():
    with pytest.raises(TooLarge):
        maximum_independent_set(cycle_graph(65))


def test_orth_representation_pentagon_ngon_fails():
    # the odd-cycle qubit states are not orthogonal on edges
    N = 5
    beta = (N - 1) * np.pi / N
    V = np.array([[np.cos(i * beta / 2), np.sin(i * beta / 2)] for i in range(N)])
    report = verify_orth_representation(cycle_graph(5), OrthRepresentation(2, V))
    assert not report.valid
    assert len(report.violations) == 5
    for _, _, overlap in report.violations:
        assert overlap == pytest.approx(np.sin(np.pi / 10))


def test_orth_representation_hadamard_valid():
    d = 4
    V = (1 - 2 * hadamard_bits(d)) / np.sqrt(d)
    assert verify_orth_representation(hadamard_graph(d), OrthRepresentation(d, V)).valid


def test_advantage_ratio():
    r = advantage_ratio(hadamard_graph(6), 6)
    assert r.alpha == 32
    assert r.ratio == pytest.approx(64 / (32 * 6))
    assert not r.advantage


def test_json_round_trip():
    G = cycle_graph(5)
    doc = json.loads(graph_to_json(G))
    assert doc["edges"][0] == [1, 2]
    assert graph_from_json(graph_to_json(G)) == G
