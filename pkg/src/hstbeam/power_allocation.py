"""Closed-form water-filling of the transmit power across carriages.

Carriage ``k`` sees an effective gain ``g_k = sum_n i_kn D_n W_k`` per
watt.  Maximizing ``sum_k log(1 + P f_k g_k)`` subject to
``sum_k f_k = 1`` gives

    f_k = max(0, 1/(lam K P) - 1/(P g_k)),
    lam = 1 / (P + sum_k 1/g_k)          (all carriages active)

where ``1/(lam K)`` is the water level.  When some candidate ``f_k`` is
non-positive those carriages are dropped and the level is recomputed over
the remaining active set; dropping only ever lowers the level, so a
dropped carriage never re-enters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import InfeasibleError

SPLITS = ("equal", "directivity")


@dataclass(frozen=True)
class AllocationProblem:
    gains: np.ndarray
    total_power: float
    assignment: np.ndarray | None = None
    directivity: np.ndarray | None = None
    split: str = "equal"

    def __post_init__(self):
        gains = np.asarray(self.gains, dtype=float)
        object.__setattr__(self, "gains", gains)
        if gains.ndim != 1 or gains.size == 0:
            raise InfeasibleError("allocation needs at least one carriage")
        if np.any(~np.isfinite(gains)) or np.any(gains < 0):
            raise ValueError("gains must be finite and non-negative")
        if not np.any(gains > 0):
            raise InfeasibleError("every carriage gain is zero")
        if not self.total_power > 0:
            raise ValueError("total power must be positive")
        if self.split not in SPLITS:
            raise ValueError(f"split must be one of {SPLITS}")

    @property
    def carriage_count(self) -> int:
        return self.gains.size

    @classmethod
    def from_beams(cls, assignment, directivity, W, total_power, split="equal"):
        """Build ``g_k = sum_n i_kn D_kn W_k`` from a K x N selection."""
        assignment = np.asarray(assignment)
        directivity = np.asarray(directivity, dtype=float)
        gains = (assignment * directivity).sum(axis=-1) * np.asarray(W, dtype=float)
        return cls(gains, total_power, assignment, directivity, split)


@dataclass(frozen=True)
class AllocationResult:
    per_carriage: np.ndarray  # f_k, fraction of the total power
    f: np.ndarray  # f_kn, shape (K, N), or (K, 1) without an assignment
    lam: float
    water_level: float  # 1 / (lam K), in watts
    active_set: tuple
    iterations: int


def split_across_beams(per_carriage, assignment, directivity=None, split="equal"):
    """Divide each carriage's fraction over its selected beams."""
    per_carriage = np.asarray(per_carriage, dtype=float)
    sel = np.asarray(assignment, dtype=float)
    if split == "directivity":
        if directivity is None:
            raise ValueError("directivity split needs directivities")
        weights = sel * np.asarray(directivity, dtype=float)
    else:
        weights = sel
    total = weights.sum(axis=-1, keepdims=True)
    share = np.divide(weights, total, out=np.zeros_like(weights), where=total > 0)
    return per_carriage[..., None] * share


def waterfill(problem: AllocationProblem) -> AllocationResult:
    g = problem.gains
    P = problem.total_power
    K = problem.carriage_count
    active = g > 0
    level = np.nan
    iterations = 0
    for iterations in range(1, K + 1):
        inv = 1.0 / g[active]
        level = (P + inv.sum()) / inv.size
        candidate = np.zeros(K)
        candidate[active] = level - inv
        drop = active & (candidate <= 0)
        if not drop.any():
            break
        active &= ~drop

    # 1/m + (mean(1/g) - 1/g_k)/P: same value as (level - 1/g_k)/P without
    # cancelling the dominant P/m term at high SNR
    inv = 1.0 / np.where(active, g, 1.0)
    m = int(active.sum())
    mean_inv = inv[active].sum() / m
    per_carriage = np.where(active, 1.0 / m + (mean_inv - inv) / P, 0.0)
    if problem.assignment is None:
        f = per_carriage[:, None]
    else:
        f = split_across_beams(per_carriage, problem.assignment, problem.directivity, problem.split)
    return AllocationResult(
        per_carriage=per_carriage,
        f=f,
        lam=1.0 / (K * level),
        water_level=level,
        active_set=tuple(int(k) for k in np.flatnonzero(active)),
        iterations=iterations,
    )


def equal_allocation(assignment) -> np.ndarray:
    """Equal fraction on every selected (carriage, beam) pair; rows are carriages."""
    sel = np.asarray(assignment, dtype=float)
    total = sel.sum(axis=(-2, -1), keepdims=True)
    if np.any(total == 0):
        raise InfeasibleError("no beam selected")
    return sel / total


def kkt_residual(problem: AllocationProblem, result: AllocationResult) -> float:
    """Stationarity, dual feasibility and simplex violation of an allocation.

    Active carriages must satisfy ``g_k / (1 + P f_k g_k) = lam K``;
    inactive ones must not gain from power, ``g_k <= lam K``.
    """
    g = problem.gains
    P = problem.total_power
    f = result.per_carriage
    mu = result.lam * problem.carriage_count
    active = np.zeros(g.size, dtype=bool)
    active[list(result.active_set)] = True
    marginal = g / (1.0 + P * f * g)
    stationarity = np.abs(marginal[active] - mu).max(initial=0.0)
    dual = np.maximum(g[~active] - mu, 0.0).max(initial=0.0)
    simplex = abs(result.f.sum() - 1.0)
    negative = max(0.0, -float(result.f.min()))
    return float(stationarity + dual + simplex + negative)


def sum_rate(gains, per_carriage, total_power) -> float:
    """Objective ``sum_k log(1 + P f_k g_k)``."""
    return float(np.log1p(total_power * np.asarray(per_carriage) * np.asarray(gains)).sum())


def waterfill_batch(gains, total_power):
    """Water-filling for every row of ``gains`` (T, K) through the kernel backend.

    Returns ``(per_carriage, water_level, active_count)``.
    """
    gains = np.ascontiguousarray(gains, dtype=float)
    f, level, count = _backend.kernels.waterfill_batch(gains, float(total_power))
    if np.any(count == 0):
        raise InfeasibleError("every carriage gain is zero at some time step")
    return f, level, count
