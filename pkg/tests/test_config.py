import math

import pytest

from hstbeam.config import (
    KMH,
    ScenarioConfig,
    dbm_to_watts,
    format_config,
    parse_config,
    watts_to_dbm,
)
from hstbeam.errors import CapacityError, ConfigError


def test_defaults_match_reference_scenario():
    c = ScenarioConfig()
    assert c.velocity == pytest.approx(100.0)
    assert (c.h, c.beam_count, c.carriage_length, c.path_loss_exponent) == (50.0, 32, 25.0, 3.0)
    assert c.total_power == pytest.approx(1.0)
    assert c.element_count == c.beam_count


@pytest.mark.parametrize("dbm,watts", [(30.0, 1.0), (40.0, 10.0), (0.0, 1e-3), (-104.0, 10**-13.4)])
def test_dbm_conversion(dbm, watts):
    assert dbm_to_watts(dbm) == pytest.approx(watts, rel=1e-12)
    assert watts_to_dbm(watts) == pytest.approx(dbm, abs=1e-9)


def test_service_time_spans_head_entry_to_tail_exit():
    c = ScenarioConfig(carriage_count=4, carriage_length=25.0, cell_half_span=500.0)
    assert c.service_time == pytest.approx((1000.0 + 75.0) / c.velocity)


@pytest.mark.parametrize(
    "field,value",
    [
        ("velocity", 0.0),
        ("h", -1.0),
        ("carriage_count", 0),
        ("carriage_length", 0.0),
        ("cell_half_span", math.inf),
        ("dt", 0.0),
        ("path_loss_exponent", 1.9),
        ("path_loss_exponent", 5.1),
        ("beams_per_carriage", 0),
        ("beam_split", "random"),
        ("interference_gain", "both"),
    ],
)
def test_invalid_fields_raise(field, value):
    with pytest.raises(ConfigError):
        ScenarioConfig(**{field: value})


def test_capacity_is_checked():
    with pytest.raises(CapacityError):
        ScenarioConfig(carriage_count=17, beams_per_carriage=2)


def test_parse_units_and_comments():
    text = """
    # reference scenario at 40 dBm
    velocity_kmh = 360
    h_m=50
    K=4   # four carriages
    power_dbm=40
    Ns=2
    """
    c = parse_config(text)
    assert c.velocity == pytest.approx(360 * KMH)
    assert c.carriage_count == 4
    assert c.total_power == pytest.approx(10.0)
    assert c.beams_per_carriage == 2


@pytest.mark.parametrize("text", ["speed=3", "K=4\nK=5", "K", "K=four"])
def test_parse_rejects_bad_files(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_format_round_trips():
    c = ScenarioConfig(carriage_count=3, theta_bias=0.013, beams_per_carriage=2, dt=5e-4)
    assert parse_config(format_config(c)) == c
