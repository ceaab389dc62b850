"""Beam selection per carriage and distance-priority conflict resolution.

Each carriage first takes the ``N_s`` beams with the highest directivity
at its (estimated) angle.  Conflicts are then resolved closest carriage
first: the carriage being settled keeps its beams, its immediate
neighbours release any beam they share with it and re-select their
next-best beams among those no settled carriage holds.  A final sweep in
the same order removes conflicts between non-adjacent carriages, which
the neighbour rule alone cannot see when several far carriages crowd the
same endfire beam.

Beam numbers in the public API are 1-based (``1..N``); matrix columns
and carriage indices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import CapacityError
from .geometry import TrainState
from .phased_array import ArrayModel


@dataclass(frozen=True)
class BeamAssignment:
    """Binary K x N selection matrix ``i[k, n-1]``."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or not np.isin(m, (0, 1)).all():
            raise ValueError("assignment must be a binary K x N matrix")
        m = m.astype(np.uint8)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_beams(cls, beams, N: int) -> "BeamAssignment":
        """From a sequence (one entry per carriage) of 1-based beam numbers."""
        m = np.zeros((len(beams), N), dtype=np.uint8)
        for k, selected in enumerate(beams):
            for n in selected:
                if not 1 <= n <= N:
                    raise ValueError(f"beam {n} outside 1..{N}")
                m[k, n - 1] = 1
        return cls(m)

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def counts(self) -> np.ndarray:
        return self.matrix.sum(axis=1)

    def beams(self, k: int) -> tuple:
        return tuple(int(n) + 1 for n in np.flatnonzero(self.matrix[k]))

    def as_sets(self) -> list:
        return [set(self.beams(k)) for k in range(self.shape[0])]

    def shared_beams(self) -> tuple:
        return tuple(int(n) + 1 for n in np.flatnonzero(self.matrix.sum(axis=0) > 1))

    @property
    def is_conflict_free(self) -> bool:
        return bool((self.matrix.sum(axis=0) <= 1).all())

    def __eq__(self, other):
        if not isinstance(other, BeamAssignment):
            return NotImplemented
        return np.array_equal(self.matrix, other.matrix)

    __hash__ = None


def rank_beams(theta, array: ArrayModel) -> np.ndarray:
    """Best-first beam columns for each angle, shape ``theta.shape + (N,)``."""
    return array.rank_beams(array.directivity_all(theta))


def select_beams(theta: float, array: ArrayModel, ns: int) -> tuple:
    """The ``ns`` beams (1-based, ascending) with the highest directivity at ``theta``."""
    if not 1 <= ns <= array.N:
        raise ValueError(f"beams per carriage must lie in 1..{array.N}")
    order = rank_beams(float(theta), array)
    return tuple(sorted(int(n) + 1 for n in order[:ns]))


def initial_selection(order, ns: int) -> np.ndarray:
    """Binary selection of the first ``ns`` ranked beams; ``order`` is (..., K, N)."""
    order = np.asarray(order)
    sel = np.zeros(order.shape, dtype=np.uint8)
    np.put_along_axis(sel, order[..., :ns], 1, axis=-1)
    return sel


def select_all(theta, array: ArrayModel, ns: int) -> BeamAssignment:
    return BeamAssignment(initial_selection(rank_beams(theta, array), ns))


def _check_capacity(K: int, N: int, ns: int):
    if K * ns > N:
        raise CapacityError(f"{K} carriages x {ns} beams exceeds {N} beams")


def resolve_conflicts(
    assignment: BeamAssignment,
    state: TrainState,
    array: ArrayModel,
    ns: int,
    theta=None,
) -> BeamAssignment:
    """Distance-priority conflict resolution for one time step.

    ``theta`` overrides ``state.theta`` as the angles used to rank
    replacement beams (the location estimate the BS acts on).
    """
    K, N = assignment.shape
    if N != array.N or K != state.carriage_count:
        raise ValueError("assignment shape does not match state and array")
    _check_capacity(K, N, ns)
    angles = state.theta if theta is None else np.asarray(theta, dtype=float)
    order = rank_beams(angles, array).astype(np.intp)
    assign = np.array(assignment.matrix, dtype=np.uint8)[None]
    dist = np.ascontiguousarray(state.d, dtype=float)[None]
    _backend.kernels.resolve_conflicts_batch(assign, order[None], dist, ns)
    return BeamAssignment(assign[0])


def resolve_conflicts_batch(assign, order, dist, ns: int):
    """In-place resolution for stacked steps; returns sweep removals per step."""
    T, K, N = assign.shape
    _check_capacity(K, N, ns)
    return _backend.kernels.resolve_conflicts_batch(
        assign, np.ascontiguousarray(order, dtype=np.intp), np.ascontiguousarray(dist, dtype=float), ns
    )
