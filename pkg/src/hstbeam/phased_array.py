"""Butler-matrix beams of an N-element uniform linear array.

Beam ``n`` (1-based, ``n = 1..N``) is a sinc-shaped array factor steered
by the offset ``b_n = n - (N + 1) / 2``; its peak sits where
``cos(theta) = 2 b_n / N``.  Directivity normalizes the squared array
factor so its average over the sphere is one.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .errors import OutOfRangeError

SINC_EPS = 1e-9
QUADRATURE_NODES = 4096
# directivities within this relative distance of each other rank as ties
TIE_RTOL = 1e-12


def beam_offset(n: int, N: int) -> float:
    if not 1 <= n <= N:
        raise OutOfRangeError(f"beam index {n} outside 1..{N}")
    return -(N + 1) / 2 + n


def beam_offsets(N: int) -> np.ndarray:
    return np.arange(1, N + 1) - (N + 1) / 2


def _sinc(u):
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < SINC_EPS
    safe = np.where(small, 1.0, u)
    return np.where(small, 1.0, np.sin(safe) / safe)


def _array_factor(b, N: int, theta):
    """Array factor for offsets ``b`` (broadcast on the last axis) at angles ``theta``."""
    theta = np.asarray(theta, dtype=float)
    u = 0.5 * N * np.pi * np.cos(theta)[..., None] - np.asarray(b) * np.pi
    return _sinc(u)


def array_factor(n: int, N: int, theta):
    """Signed array factor ``sin(u)/u`` of beam ``n``, ``u = N pi cos(theta)/2 - b_n pi``."""
    b = beam_offset(n, N)
    return _array_factor(np.array([b]), N, theta)[..., 0]


@lru_cache(maxsize=None)
def _gauss_legendre(nodes: int):
    x, w = roots_legendre(nodes)
    # map [-1, 1] -> [0, pi]
    return 0.5 * np.pi * (x + 1.0), 0.5 * np.pi * w


def directivity_denominators(N: int, nodes: int = QUADRATURE_NODES) -> np.ndarray:
    """``int_0^pi AF_n(phi)^2 sin(phi) dphi`` for every beam, by Gauss-Legendre."""
    return _denominators(int(N), int(nodes)).copy()


@lru_cache(maxsize=32)
def _denominators(N: int, nodes: int) -> np.ndarray:
    phi, w = _gauss_legendre(nodes)
    af = _array_factor(beam_offsets(N), N, phi)
    denom = (w * np.sin(phi)) @ (af * af)
    # beams n and N+1-n are mirror images; remove quadrature rounding asymmetry
    return 0.5 * (denom + denom[::-1])


class ArrayModel:
    """Immutable beam set with precomputed directivity denominators."""

    def __init__(self, N: int, nodes: int = QUADRATURE_NODES):
        if N < 1:
            raise ValueError(f"beam count must be >= 1, got {N}")
        self.N = int(N)
        self.b = beam_offsets(self.N)
        self.b.flags.writeable = False
        self.denom = directivity_denominators(self.N, nodes)
        self.denom.flags.writeable = False
        # tie-break order for beam ranking: smaller |b_n| first, then smaller n
        self.priority = np.lexsort((np.arange(self.N), np.abs(self.b)))
        self.priority.flags.writeable = False

    @property
    def M(self) -> int:
        return self.N

    def __repr__(self):
        return f"ArrayModel(N={self.N})"

    def directivity_all(self, theta) -> np.ndarray:
        """Directivity of every beam, shape ``theta.shape + (N,)``."""
        af = _array_factor(self.b, self.N, theta)
        return 2.0 * af * af / self.denom

    def directivity(self, n: int, theta):
        if not 1 <= n <= self.N:
            raise OutOfRangeError(f"beam index {n} outside 1..{self.N}")
        af = _array_factor(self.b[n - 1 : n], self.N, theta)[..., 0]
        return 2.0 * af * af / self.denom[n - 1]

    def peak_angle(self, n: int) -> float:
        """Angle of beam ``n``'s main-lobe peak (NaN when it falls outside (0, pi))."""
        c = 2.0 * beam_offset(n, self.N) / self.N
        if abs(c) >= 1.0:
            return float("nan")
        return float(np.arccos(c))

    def rank_beams(self, directivities) -> np.ndarray:
        """Beam columns (0-based) sorted by descending directivity, ties by priority."""
        d = np.asarray(directivities, dtype=float)[..., self.priority]
        scale = d.max(axis=-1, keepdims=True)
        key = np.round(d / np.where(scale > 0, scale, 1.0) / TIE_RTOL)
        order = np.argsort(-key, axis=-1, kind="stable")
        return self.priority[order]


def directivity(array: ArrayModel, n: int, theta):
    return array.directivity(n, theta)


def beam_weight(f_n, D):
    """Beamforming weight ``f_n * D_n(theta)``."""
    return np.multiply(f_n, D)
