"""Train kinematics: carriage positions, BS distances and beam angles.

The track is a straight line at perpendicular distance ``h`` from the
base station.  The signed along-track coordinate ``x`` is zero at the
point of closest approach and the train travels toward ``-x``.  Each
carriage carries one mobile relay (MR) at its midpoint; carriage 1 leads,
so trailing carriages sit at larger ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ScenarioConfig
from .errors import OutOfRangeError

# Slack for the traversal-window check so grid points computed by
# floating-point multiplication are not rejected at the end point.
_WINDOW_SLACK = 1e-9


@dataclass(frozen=True)
class TrainState:
    """Per-carriage geometry at one instant (arrays of length K)."""

    t: float
    x: np.ndarray
    d: np.ndarray
    theta: np.ndarray

    @property
    def carriage_count(self) -> int:
        return len(self.x)

    @classmethod
    def from_positions(cls, x, h: float, t: float = 0.0) -> "TrainState":
        x = np.asarray(x, dtype=float)
        d, theta = distance_and_angle(x, h)
        return cls(t=t, x=x, d=d, theta=theta)


def distance_and_angle(x, h: float):
    """BS-MR distance and angle from the array axis for along-track offsets ``x``.

    ``theta = atan2(h, x)`` lies in (0, pi): pi/2 at closest approach,
    toward 0 ahead of the BS (x > 0) and toward pi behind it.
    """
    x = np.asarray(x, dtype=float)
    return np.hypot(x, h), np.arctan2(h, x)


def carriage_offsets(config: ScenarioConfig) -> np.ndarray:
    return np.arange(config.carriage_count) * config.carriage_length


def carriage_positions(config: ScenarioConfig, t) -> np.ndarray:
    """Along-track MR positions, shape ``t.shape + (K,)``."""
    t = np.asarray(t, dtype=float)
    head = config.cell_half_span - config.velocity * t
    return head[..., None] + carriage_offsets(config)


def check_window(config: ScenarioConfig, t) -> None:
    t = np.asarray(t, dtype=float)
    t_s = config.service_time
    slack = _WINDOW_SLACK * max(1.0, t_s)
    if np.any(t < -slack) or np.any(t > t_s + slack) or not np.all(np.isfinite(t)):
        raise OutOfRangeError(f"time outside the traversal window [0, {t_s:g}] s")


def train_state(config: ScenarioConfig, t: float) -> TrainState:
    check_window(config, t)
    x = carriage_positions(config, float(t))
    d, theta = distance_and_angle(x, config.h)
    return TrainState(t=float(t), x=x, d=d, theta=theta)


def time_grid(config: ScenarioConfig, dt: float | None = None) -> np.ndarray:
    """Uniform grid over [0, t_s]; the last interval is shortened to land on t_s."""
    dt = config.dt if dt is None else dt
    t_s = config.service_time
    steps = int(np.ceil(t_s / dt - 1e-9))
    grid = np.arange(steps + 1) * dt
    grid[-1] = t_s
    return grid
