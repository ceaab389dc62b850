"""Received power, inter-beam interference, rate and mobile service."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def received_power(selection, fractions, directivities, G, total_power, fading=1.0):
    """``sum_n i_kn P f_kn D_n(theta_k) G_k^2 |h_k|^2`` for one carriage (or broadcast rows)."""
    per_beam = np.asarray(selection) * total_power * np.asarray(fractions) * np.asarray(directivities)
    return per_beam.sum(axis=-1) * np.square(G) * np.square(fading)


def interference(assignment, k: int, weights, G, total_power, victim_gain=None, fading=None):
    """Power other carriages put on the beams carriage ``k`` uses.

    ``weights[j, n]`` is ``f_jn D_n``.  By default each interferer term
    carries the interferer's own path gain ``G_j^2``; pass
    ``victim_gain=G_k`` to charge every term with the victim's gain
    instead (``weights`` then should hold ``f_jn D_n(theta_k)``).
    """
    sel = np.asarray(assignment, dtype=float)
    weights = np.asarray(weights, dtype=float)
    G = np.asarray(G, dtype=float)
    h2 = np.ones_like(G) if fading is None else np.square(fading)
    mine = sel[k] > 0
    total = 0.0
    for j in range(sel.shape[0]):
        if j == k:
            continue
        gain2 = (G[j] ** 2) * h2[j] if victim_gain is None else victim_gain**2
        total += float((sel[j, mine] * total_power * weights[j, mine]).sum()) * gain2
    return total


def interference_all(selection, weights, G2, total_power):
    """Vectorized interference for stacked steps.

    ``selection``, ``weights``: (..., K, N); ``G2``: (..., K) gains applied
    per interferer.  Returns (..., K).
    """
    sel = np.asarray(selection, dtype=float)
    contrib = sel * total_power * np.asarray(weights) * np.asarray(G2)[..., None]
    per_beam = contrib.sum(axis=-2, keepdims=True) - contrib
    return (per_beam * sel).sum(axis=-1)


def rate(signal, interference, noise_power):
    """Achievable rate ``log(1 + S / (I + sigma^2))`` in nats per channel use."""
    return np.log1p(np.asarray(signal) / (np.asarray(interference) + noise_power))


def accumulate_service(service, rate_prev, rate_new, dt):
    """One trapezoidal step of the mobile-service integral."""
    return service + 0.5 * dt * (np.asarray(rate_prev) + np.asarray(rate_new))


def integrate_service(t, rates) -> np.ndarray:
    """Cumulative trapezoidal integral of ``rates`` (T, ...) over grid ``t``."""
    t = np.asarray(t, dtype=float)
    rates = np.asarray(rates, dtype=float)
    out = np.zeros_like(rates)
    steps = 0.5 * np.diff(t).reshape((-1,) + (1,) * (rates.ndim - 1)) * (rates[1:] + rates[:-1])
    np.cumsum(steps, axis=0, out=out[1:])
    return out


@dataclass(frozen=True)
class ServiceTrace:
    """Time series of one run; per-carriage arrays are (T, K)."""

    t: np.ndarray
    received: np.ndarray
    interference: np.ndarray
    sinr: np.ndarray
    rate: np.ndarray
    service: np.ndarray
    fraction_sum: np.ndarray  # total allocated power fraction per step
    swept: np.ndarray | None = None  # beams removed by the global sweep per step

    @property
    def total_service(self) -> np.ndarray:
        return self.service.sum(axis=1)

    @property
    def final_total(self) -> float:
        return float(self.total_service[-1])

    @property
    def carriage_count(self) -> int:
        return self.rate.shape[1]
