"""Large-scale path gain and per-carriage gain-to-noise ratio."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

PATH_GAIN_REF = 1.0  # G_c, normalized


def path_gain(d, alpha: float):
    """Amplitude gain ``sqrt(G_c / d**alpha)``."""
    d = np.asarray(d, dtype=float)
    if np.any(~(d > 0)):
        raise DomainError("distance must be positive")
    g = np.sqrt(PATH_GAIN_REF / d**alpha)
    return g if g.ndim else float(g)


def effective_gain(d, alpha: float, noise_power: float, fading=1.0):
    """Gain-to-noise ratio ``|fading|^2 G^2 / sigma^2`` in W^-1.

    ``fading`` is the small-scale coefficient; the shipped scenarios keep
    it at one (large-scale fading dominates on an open viaduct).
    """
    if not noise_power > 0:
        raise DomainError("noise power must be positive")
    g = path_gain(d, alpha)
    return np.square(fading) * np.square(g) / noise_power


@dataclass(frozen=True)
class LinkGain:
    G: np.ndarray
    W: np.ndarray


def link_gain(d, alpha: float, noise_power: float, fading=1.0) -> LinkGain:
    G = np.asarray(path_gain(d, alpha))
    return LinkGain(G=G, W=np.asarray(effective_gain(d, alpha, noise_power, fading)))
