import numpy as np
import pytest

import polarsim as ps
from polarsim.graph import DirectedGraph
from polarsim.population import (
    LEFT,
    RIGHT,
    PopulationSpec,
    assign_parties,
    init_affect,
    mean_similarity,
    similarity,
    similarity_all,
)


def _shell_graph(n):
    # minimal valid graph when only vertex count matters
    return DirectedGraph.from_edges(n, [(0, 1)])


def test_exact_stratum_counts():
    g = _shell_graph(10_000)
    elites = set(range(1000))
    parties = assign_parties(g, elites, PopulationSpec(p_b=0.75, p_eb=0.5, seed=1))
    elite_mask = np.zeros(g.n, bool)
    elite_mask[list(elites)] = True
    assert np.count_nonzero(parties[elite_mask] == RIGHT) == 500
    assert np.count_nonzero(parties[~elite_mask] == RIGHT) == 6750
    assert np.count_nonzero(parties[~elite_mask] == LEFT) == 2250


def test_homogeneous_extremes():
    g = _shell_graph(200)
    elites = set(range(20))
    parties = assign_parties(g, elites, PopulationSpec(p_b=0.0, p_eb=0.0, seed=2))
    assert np.all(parties == LEFT)
    parties = assign_parties(g, elites, PopulationSpec(p_b=1.0, p_eb=1.0, seed=2))
    assert np.all(parties == RIGHT)


def test_assignment_determinism():
    g = _shell_graph(500)
    elites = set(range(50))
    spec = PopulationSpec(p_b=0.3, p_eb=0.7, seed=9)
    assert np.array_equal(assign_parties(g, elites, spec), assign_parties(g, elites, spec))


def test_mirror_counts():
    # flipping every label matches assigning with (1-p_b, 1-p_eb), count-wise
    g = _shell_graph(777)
    elites = set(range(77))
    for p_b, p_eb in ((0.25, 0.75), (0.3, 0.9)):
        a = assign_parties(g, elites, PopulationSpec(p_b, p_eb, seed=3))
        b = assign_parties(g, elites, PopulationSpec(1 - p_b, 1 - p_eb, seed=4))
        assert np.count_nonzero(a == RIGHT) == np.count_nonzero(b == LEFT)
    # an odd stratum at p=0.5 cannot split evenly; the mirror is off by one
    a = assign_parties(g, elites, PopulationSpec(0.5, 0.5, seed=3))
    b = assign_parties(g, elites, PopulationSpec(0.5, 0.5, seed=4))
    assert abs(np.count_nonzero(a == RIGHT) - np.count_nonzero(b == LEFT)) <= 2


def test_spec_validation():
    with pytest.raises(ValueError):
        PopulationSpec(p_b=1.2, p_eb=0.5).validate()


def test_init_affect_ranges_and_determinism():
    parties = np.ones(10_000, np.int8)
    pop = init_affect(parties, 11)
    assert np.all(pop.ipa >= 50) and np.all(pop.ipa < 100)
    assert np.all(pop.opa > 0) and np.all(pop.opa < 50)
    # expectation of initial affective distance is 75 - 25 = 50
    assert abs(np.mean(pop.ipa - pop.opa) - 50) < 1.0
    pop2 = init_affect(parties, 11)
    assert np.array_equal(pop.ipa, pop2.ipa)
    assert np.array_equal(pop.opa, pop2.opa)


def test_agent_accessor():
    parties = np.array([1, 2], np.int8)
    pop = init_affect(parties, 0)
    a = pop.agent(1)
    assert a.party == 2
    assert 50 <= a.ipa < 100


def _fan_graph(parties_of_neighbors, party_v):
    # vertex 0 is the probe; vertices 1..k feed into it
    k = len(parties_of_neighbors)
    edges = [(i, 0) for i in range(1, k + 1)]
    edges.append((0, 1))  # give vertex 1 an incoming edge too
    g = DirectedGraph.from_edges(k + 1, edges)
    parties = np.array([party_v] + list(parties_of_neighbors), np.int8)
    return g, parties


def test_similarity_examples():
    g, parties = _fan_graph([1, 1, 1, 2], 1)
    assert similarity(g, parties, 0) == 0.75
    g, parties = _fan_graph([2, 2, 2], 2)
    assert similarity(g, parties, 0) == 1.0
    g, parties = _fan_graph([1, 1], 2)
    assert similarity(g, parties, 0) == 0.0


def test_similarity_zero_in_degree_is_none():
    g = DirectedGraph.from_edges(3, [(0, 1), (1, 2)])
    parties = np.array([1, 1, 1], np.int8)
    assert similarity(g, parties, 0) is None
    sims = similarity_all(g, parties)
    assert np.isnan(sims[0]) and sims[1] == 1.0


def test_mean_similarity_homogeneous_is_one(small_graph):
    parties = np.full(small_graph.n, RIGHT, np.int8)
    assert mean_similarity(small_graph, parties) == 1.0


def test_mean_similarity_balanced_near_half(desk_graph):
    g = desk_graph
    elites = ps.elite_set(g)
    parties = assign_parties(g, elites, PopulationSpec(0.5, 0.5, seed=21))
    assert abs(mean_similarity(g, parties) - 0.5) < 0.02


def test_mean_similarity_majority_stratum(desk_graph):
    g = desk_graph
    elites = ps.elite_set(g)
    parties = assign_parties(g, elites, PopulationSpec(0.75, 0.75, seed=22))
    majority = np.flatnonzero(parties == RIGHT)
    assert abs(mean_similarity(g, parties, subset=majority) - 0.75) < 0.02


def test_mean_similarity_subset_errors(small_graph):
    parties = np.ones(small_graph.n, np.int8)
    with pytest.raises(ValueError):
        mean_similarity(small_graph, parties, subset="elites")  # no elite set given
    with pytest.raises(ValueError):
        mean_similarity(small_graph, parties, subset=[])


def test_similarity_complement(small_graph):
    g = small_graph
    parties = assign_parties(g, ps.elite_set(g), PopulationSpec(0.4, 0.6, seed=8))
    sims = similarity_all(g, parties)
    opposite = similarity_all(g, (3 - parties).astype(np.int8))
    # flipping the probe's label inverts its similarity; flipping everyone's is neutral
    assert np.allclose(sims[~np.isnan(sims)], opposite[~np.isnan(opposite)])
