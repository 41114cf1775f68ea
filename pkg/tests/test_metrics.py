import math

import numpy as np
import pytest

from polarsim.metrics import (
    RunTimeSeries,
    affective_distance,
    aggregate_runs,
    group_ap,
    mean_time_to_max,
    time_to_max,
)
from polarsim.population import AgentState, PopulationState


def _series(ap):
    ap = np.asarray(ap, float)
    ipa = 50.0 + ap / 2.0
    opa = 50.0 - ap / 2.0
    return RunTimeSeries(ap=ap, ipa_mean=ipa, opa_mean=opa)


def test_affective_distance_examples():
    assert affective_distance(AgentState(1, 75.0, 25.0)) == 50.0
    assert affective_distance(AgentState(1, 100.0, 0.0)) == 100.0
    assert affective_distance(AgentState(2, 50.0, 50.0)) == 0.0


def test_group_ap_examples():
    pop = PopulationState(np.array([1, 2], np.int8),
                          np.array([60.0, 80.0]), np.array([50.0, 50.0]))
    assert group_ap(pop) == 20.0
    pop = PopulationState(np.ones(5, np.int8), np.full(5, 75.0), np.full(5, 25.0))
    assert group_ap(pop) == 50.0


def test_group_ap_brute_force(rng):
    n = 257
    pop = PopulationState(np.ones(n, np.int8),
                          50 + 50 * rng.random(n), 50 * rng.random(n))
    brute = sum(pop.ipa[i] - pop.opa[i] for i in range(n)) / n
    assert abs(group_ap(pop) - brute) < 1e-9


def test_group_ap_empty():
    pop = PopulationState(np.empty(0, np.int8), np.empty(0), np.empty(0))
    with pytest.raises(ValueError):
        group_ap(pop)


def test_aggregate_single_run():
    agg = aggregate_runs([_series([40.0, 41.0, 42.0])])
    assert np.array_equal(agg.ap_mean, [40.0, 41.0, 42.0])
    assert np.all(agg.ap_sd == 0.0)
    assert agg.n_runs == 1


def test_aggregate_two_constant_runs():
    agg = aggregate_runs([_series([40.0] * 4), _series([60.0] * 4)])
    assert np.all(agg.ap_mean == 50.0)
    assert np.allclose(agg.ap_sd, math.sqrt(200.0))  # sample sd of {40, 60}


def test_aggregate_permutation_invariance(rng):
    runs = [_series(np.sort(rng.random(7)) * 90) for _ in range(10)]
    agg1 = aggregate_runs(runs)
    agg2 = aggregate_runs(runs[::-1])
    assert np.array_equal(agg1.ap_mean, agg2.ap_mean)
    assert np.array_equal(agg1.ap_sd, agg2.ap_sd)


def test_aggregate_length_mismatch():
    with pytest.raises(ValueError):
        aggregate_runs([_series([1.0, 2.0]), _series([1.0, 2.0, 3.0])])


def test_time_to_max_first_crossing():
    ap = np.concatenate([np.linspace(50, 89.9, 120), np.full(30, 95.0)])
    assert time_to_max(_series(ap)) == 120


def test_time_to_max_not_reached():
    assert time_to_max(_series(np.linspace(50, 70, 40))) is None


def test_time_to_max_fraction_monotone(rng):
    ap = np.sort(rng.random(50)) * 100
    s = _series(ap)
    lo = time_to_max(s, fraction=0.5)
    hi = time_to_max(s, fraction=0.9)
    if lo is not None and hi is not None:
        assert lo <= hi


def test_mean_time_to_max_examples():
    reached = [_series(np.where(np.arange(10) >= k, 95.0, 50.0)) for k in (3, 5)]
    tm = mean_time_to_max(reached)
    assert (tm.mean, tm.sd, tm.n_reached, tm.n_runs) == (4.0, math.sqrt(2.0), 2, 2)

    mixed = reached + [_series(np.full(10, 60.0))]
    tm = mean_time_to_max(mixed)
    assert (tm.mean, tm.n_reached, tm.n_runs) == (4.0, 2, 3)

    none = [_series(np.full(10, 60.0))]
    tm = mean_time_to_max(none)
    assert tm.mean is None and tm.sd is None and tm.n_reached == 0


def test_mean_time_to_max_pair():
    runs = [_series(np.where(np.arange(200) >= k, 95.0, 50.0)) for k in (100, 140)]
    assert mean_time_to_max(runs).mean == 120.0


def test_series_validation():
    with pytest.raises(ValueError):
        RunTimeSeries(np.array([50.0]), np.array([40.0]), np.array([0.0])).validate()
