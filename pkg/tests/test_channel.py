import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hstbeam.channel import effective_gain, link_gain, path_gain
from hstbeam.errors import DomainError


@pytest.mark.parametrize(
    "d,alpha,G",
    [(1.0, 3.0, 1.0), (100.0, 2.0, 0.01), (50.0, 3.0, 1.0 / math.sqrt(125000.0))],
)
def test_path_gain(d, alpha, G):
    assert path_gain(d, alpha) == pytest.approx(G, rel=1e-14)


@pytest.mark.parametrize("d,alpha,sigma2,W", [(1.0, 3.0, 1.0, 1.0), (2.0, 2.0, 1.0, 0.25)])
def test_effective_gain(d, alpha, sigma2, W):
    assert effective_gain(d, alpha, sigma2) == pytest.approx(W, rel=1e-14)


def test_effective_gain_db_domain():
    # 10 log10 W = -alpha 10 log10 d - 10 log10 sigma^2
    d, alpha, sigma2 = 50.0, 3.0, 10**-13.4
    w_db = -alpha * 10 * math.log10(d) + 134.0
    assert effective_gain(d, alpha, sigma2) == pytest.approx(10 ** (w_db / 10), rel=1e-12)


@pytest.mark.parametrize("d", [0.0, -5.0, float("nan")])
def test_nonpositive_distance(d):
    with pytest.raises(DomainError):
        path_gain(d, 3.0)


@given(st.floats(1.01, 1e4), st.floats(2.0, 5.0))
def test_monotone(d, alpha):
    assert path_gain(d * 1.01, alpha) < path_gain(d, alpha)
    assert path_gain(d, min(alpha + 0.1, 5.0)) <= path_gain(d, alpha)


@given(st.floats(1.0, 1e4), st.floats(1e-15, 1.0))
def test_noise_scaling(d, sigma2):
    assert effective_gain(d, 3.0, 2 * sigma2) == pytest.approx(0.5 * effective_gain(d, 3.0, sigma2), rel=1e-14)


def test_fading_hook_defaults_to_unity():
    d = np.array([50.0, 70.0])
    lg = link_gain(d, 3.0, 1e-13)
    assert np.allclose(lg.W, lg.G**2 / 1e-13)
    assert np.allclose(effective_gain(d, 3.0, 1e-13, fading=0.5), 0.25 * lg.W)
