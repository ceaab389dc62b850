import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from hstbeam.beam_scheduler import (
    BeamAssignment,
    initial_selection,
    rank_beams,
    resolve_conflicts,
    resolve_conflicts_batch,
    select_all,
    select_beams,
)
from hstbeam.errors import CapacityError
from hstbeam.geometry import TrainState
from hstbeam.phased_array import ArrayModel

from oracles import sinr_sum_rate


def _state(cosines, distances):
    theta = np.arccos(np.asarray(cosines, dtype=float))
    d = np.asarray(distances, dtype=float)
    return TrainState(t=0.0, x=d * np.cos(theta), d=d, theta=theta)


def test_broadside_picks_centre_pair(array32):
    assert select_beams(math.pi / 2, array32, 2) == (16, 17)


def test_exact_peak(array32):
    assert select_beams(array32.peak_angle(5), array32, 1) == (5,)


def test_selection_matches_brute_force(array32, rng):
    for theta in rng.uniform(0.05, math.pi - 0.05, size=50):
        values = [array32.directivity(n, theta) for n in range(1, 33)]
        best = sorted(range(1, 33), key=lambda n: -values[n - 1])[:3]
        assert select_beams(theta, array32, 3) == tuple(sorted(best))


def test_assignment_helpers():
    a = BeamAssignment.from_beams([{1, 2}, {2}, {4}], 4)
    assert a.beams(0) == (1, 2)
    assert a.shared_beams() == (2,)
    assert not a.is_conflict_free
    assert a.counts.tolist() == [2, 1, 1]
    with pytest.raises(ValueError):
        BeamAssignment(np.array([[0, 2]]))


def test_no_conflict_is_fixed_point(array32):
    state = _state([-0.6, -0.2, 0.3], [80.0, 60.0, 70.0])
    a = BeamAssignment.from_beams([{7}, {13}, {21}], 32)
    assert resolve_conflicts(a, state, array32, 1) == a


def test_worked_example(kernels, array32):
    # carriage 2 is closest and holds beams 7 and 8; carriage 1 also picked 7
    state = _state([-0.63, -0.56, -0.45], [60.0, 52.0, 57.0])
    initial = select_all(state.theta, array32, 2)
    assert initial.as_sets() == [{6, 7}, {7, 8}, {9, 10}]

    resolved = resolve_conflicts(initial, state, array32, 2)
    beams = resolved.as_sets()
    assert beams[1] == {7, 8}
    assert beams[2] == {9, 10}
    # carriage 1 keeps 6, drops 7 and takes its best beam not held by carriage 2
    D1 = [array32.directivity(n, state.theta[0]) for n in range(1, 33)]
    replacement = max((n for n in range(1, 33) if n not in {6, 7, 8}), key=lambda n: D1[n - 1])
    assert beams[0] == {6, replacement}
    assert replacement == 5
    assert resolved.is_conflict_free


def test_three_carriage_overlap_improves_sinr(kernels, array32):
    h, sigma2 = 50.0, 10**-13.4
    x = np.array([300.0, 320.0, 340.0])
    state = TrainState.from_positions(x, h)
    initial = select_all(state.theta, array32, 2)
    assert not initial.is_conflict_free
    resolved = resolve_conflicts(initial, state, array32, 2)
    assert resolved.is_conflict_free

    D = array32.directivity_all(state.theta)
    G2 = state.d**-3.0
    before = sinr_sum_rate(initial.matrix, D, G2, 1.0, sigma2)
    after = sinr_sum_rate(resolved.matrix, D, G2, 1.0, sigma2)
    assert after >= before


def test_capacity_error(array32):
    state = _state([0.1, 0.2, 0.3], [50, 51, 52])
    a = BeamAssignment(np.zeros((3, 32), dtype=np.uint8))
    with pytest.raises(CapacityError):
        resolve_conflicts(a, state, array32, 11)


def test_tie_in_distance_goes_to_lower_index(kernels, array32):
    state = _state([0.30, 0.30], [60.0, 60.0])
    initial = select_all(state.theta, array32, 1)
    resolved = resolve_conflicts(initial, state, array32, 1)
    assert resolved.beams(0) == initial.beams(0)
    assert resolved.beams(1) != initial.beams(1)


def _random_case(draw_seed, K, N, ns):
    rng = np.random.default_rng(draw_seed)
    A = ArrayModel(N, nodes=1024)
    # clustered angles make conflicts likely
    theta = np.clip(rng.normal(rng.uniform(0.3, 2.8), 0.15, size=K), 0.01, math.pi - 0.01)
    d = rng.uniform(50.0, 500.0, size=K)
    if rng.random() < 0.3:
        d[rng.integers(K)] = d.min()  # exercise ties
    state = TrainState(t=0.0, x=d * np.cos(theta), d=d, theta=theta)
    return A, state, select_all(theta, A, ns)


cases = st.integers(1, 8).flatmap(
    lambda K: st.tuples(
        st.just(K),
        st.integers(max(K, 4), 32),
        st.integers(0, 2**32 - 1),
    )
).flatmap(lambda t: st.tuples(st.just(t), st.integers(1, t[1] // t[0])))


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(cases)
def test_resolution_invariants(kernels, case):
    (K, N, seed), ns = case
    A, state, initial = _random_case(seed, K, N, ns)
    resolved = resolve_conflicts(initial, state, A, ns)

    assert resolved.is_conflict_free
    assert np.all(resolved.counts == ns)
    closest = min(range(K), key=lambda k: (state.d[k], k))
    assert resolved.beams(closest) == initial.beams(closest)
    assert resolve_conflicts(resolved, state, A, ns) == resolved


def test_backends_agree_on_batch(rng):
    from conftest import BACKENDS

    if len(BACKENDS) < 2:
        pytest.skip("compiled backend not built")
    A = ArrayModel(32)
    T, K, ns = 300, 12, 2
    theta = np.clip(rng.normal(0.4, 0.2, size=(T, K)), 0.01, 3.1)
    d = rng.uniform(50, 900, size=(T, K))
    order = rank_beams(theta, A).astype(np.intp)
    results = []
    for name in ("python", "cython"):
        assign = initial_selection(order, ns)
        swept = BACKENDS[name].resolve_conflicts_batch(assign, order, d, ns)
        results.append((assign, swept))
    assert np.array_equal(results[0][0], results[1][0])
    assert np.array_equal(results[0][1], results[1][1])


def test_batch_entry_point(kernels, array32):
    theta = np.array([[0.10, 0.11, 0.12], [1.0, 1.5, 2.0]])
    d = np.array([[500.0, 520.0, 540.0], [80.0, 50.0, 70.0]])
    order = rank_beams(theta, array32)
    assign = initial_selection(order, 1)
    resolve_conflicts_batch(assign, order, d, 1)
    assert np.all(assign.sum(axis=1) <= 1)
