import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hstbeam.config import ScenarioConfig
from hstbeam.errors import OutOfRangeError
from hstbeam.geometry import TrainState, distance_and_angle, time_grid, train_state


def test_closest_approach():
    d, theta = distance_and_angle(0.0, 50.0)
    assert d == 50.0
    assert theta == math.pi / 2


def test_forty_five_degrees():
    d, theta = distance_and_angle(50.0, 50.0)
    assert d == pytest.approx(50.0 * math.sqrt(2.0), rel=1e-15)
    assert theta == pytest.approx(math.pi / 4, rel=1e-15)


def test_linear_motion():
    c = ScenarioConfig(velocity=100.0, cell_half_span=500.0)
    assert train_state(c, 5.0).x[0] == 0.0


def test_carriage_spacing_and_invariants(ref_config):
    s = train_state(ref_config, 3.3)
    assert np.allclose(np.diff(s.x), ref_config.carriage_length)
    assert np.all(s.d >= ref_config.h)
    assert np.all((s.theta > 0) & (s.theta < np.pi))
    assert np.allclose(np.cos(s.theta), s.x / s.d)


def test_window_is_enforced(ref_config):
    with pytest.raises(OutOfRangeError):
        train_state(ref_config, -0.01)
    with pytest.raises(OutOfRangeError):
        train_state(ref_config, ref_config.service_time + 0.01)
    train_state(ref_config, ref_config.service_time)


def test_head_enters_and_tail_leaves(ref_config):
    c = ref_config
    assert train_state(c, 0.0).x[0] == pytest.approx(c.cell_half_span)
    assert train_state(c, c.service_time).x[-1] == pytest.approx(-c.cell_half_span)


@given(st.floats(min_value=0.0, max_value=1.0))
def test_time_reversal_mirrors_train(frac):
    c = ScenarioConfig(carriage_count=5)
    t = frac * c.service_time
    a = train_state(c, t)
    b = train_state(c, c.service_time - t)
    assert np.allclose(a.x, -b.x[::-1], atol=1e-9)
    assert np.allclose(a.theta + b.theta[::-1], np.pi, atol=1e-12)


def test_distance_unimodal_and_angle_decreasing_in_time():
    c = ScenarioConfig(carriage_count=1)
    t = time_grid(c, 0.01)
    x = c.cell_half_span - c.velocity * t
    d, theta = distance_and_angle(x, c.h)
    ahead = x > 0
    assert np.all(np.diff(d[ahead]) < 0)
    assert np.all(np.diff(d[~ahead]) > 0)
    # theta = atan2(h, x) grows as x decreases
    assert np.all(np.diff(theta) > 0)


def test_time_grid_ends_on_service_time(ref_config):
    t = time_grid(ref_config)
    assert t[0] == 0.0 and t[-1] == ref_config.service_time
    assert np.all(np.diff(t) > 0)
    assert np.diff(t).max() <= ref_config.dt * (1 + 1e-9)


def test_from_positions():
    s = TrainState.from_positions([10.0, -10.0], 50.0)
    assert s.carriage_count == 2
    assert s.theta[0] + s.theta[1] == pytest.approx(np.pi)
