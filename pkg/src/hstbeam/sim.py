"""Traversal simulation: geometry -> selection -> resolution -> allocation -> metrics."""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .beam_scheduler import initial_selection, resolve_conflicts_batch
from .channel import path_gain
from .config import ScenarioConfig
from .errors import CapacityError, ConfigError
from .geometry import carriage_positions, distance_and_angle, time_grid
from .link_metrics import ServiceTrace, integrate_service, interference_all
from .phased_array import ArrayModel
from .power_allocation import equal_allocation, split_across_beams, waterfill_batch

log = logging.getLogger(__name__)

ALLOCATIONS = ("waterfill", "equal")
INTERFERENCE_MODELS = ("sinr", "snr")
CSV_FIELDS = ("t_s", "k", "P_w", "I_w", "sinr", "rate_nats", "S_k", "S_total")

# time steps per vectorized block; bounds the (steps, K, N) temporaries
_CHUNK = 2048
# keeps biased angle estimates strictly inside (0, pi)
_ANGLE_GUARD = 1e-9


@dataclass(frozen=True)
class RunMode:
    """Which parts of the scheme are switched on for a run.

    ``interference_model="snr"`` evaluates the interference-free link
    (beams may be shared and no cross-carriage power is counted);
    ``"sinr"`` charges shared beams as interference.
    """

    beamforming: bool = True
    allocation: str = "waterfill"
    interference_elimination: bool = True
    interference_model: str = "sinr"
    beams_per_carriage: int | None = None

    def __post_init__(self):
        if self.allocation not in ALLOCATIONS:
            raise ConfigError(f"allocation must be one of {ALLOCATIONS}")
        if self.interference_model not in INTERFERENCE_MODELS:
            raise ConfigError(f"interference model must be one of {INTERFERENCE_MODELS}")
        if self.beams_per_carriage is not None and self.beams_per_carriage < 1:
            raise ConfigError("beams_per_carriage must be >= 1")
        if not self.beamforming:
            # omnidirectional baseline: unit directivity, equal split, nothing to schedule
            object.__setattr__(self, "allocation", "equal")
            object.__setattr__(self, "interference_elimination", False)
            object.__setattr__(self, "beams_per_carriage", None)

    @property
    def label(self) -> str:
        if not self.beamforming:
            return "nobf"
        parts = ["bf", self.allocation, "on" if self.interference_elimination else "off"]
        if self.interference_model == "snr":
            parts.append("snr")
        if self.beams_per_carriage is not None:
            parts.append(f"ns{self.beams_per_carriage}")
        return "-".join(parts)

    @classmethod
    def parse(cls, label: str) -> "RunMode":
        """Inverse of :attr:`label`; tokens after ``bf`` may come in any order."""
        tokens = label.strip().lower().split("-")
        if tokens == ["nobf"]:
            return cls(beamforming=False)
        if tokens[0] != "bf":
            raise ConfigError(f"bad mode {label!r}: must start with 'bf' or be 'nobf'")
        kwargs = {}
        for tok in tokens[1:]:
            if tok in ALLOCATIONS:
                kwargs["allocation"] = tok
            elif tok in ("on", "off"):
                kwargs["interference_elimination"] = tok == "on"
            elif tok in INTERFERENCE_MODELS:
                kwargs["interference_model"] = tok
            elif tok.startswith("ns") and tok[2:].isdigit():
                kwargs["beams_per_carriage"] = int(tok[2:])
            else:
                raise ConfigError(f"bad mode token {tok!r} in {label!r}")
        return cls(**kwargs)


PRESETS = {
    # with / without beamforming, equal power, interference-free link
    "bf-gain": (
        RunMode(allocation="equal", interference_elimination=False, interference_model="snr"),
        RunMode(beamforming=False),
    ),
    # with / without water-filling, interference-free link
    "alloc-gain": (
        RunMode(allocation="waterfill", interference_elimination=False, interference_model="snr"),
        RunMode(allocation="equal", interference_elimination=False, interference_model="snr"),
    ),
    # with / without conflict resolution, two beams per carriage
    "elimination": (
        RunMode(interference_elimination=True, beams_per_carriage=2),
        RunMode(interference_elimination=False, beams_per_carriage=2),
    ),
}


def parse_modes(spec: str) -> list:
    """Comma-separated mode labels and/or preset names (``bf-gain``, ``alloc-gain``, ``elimination``)."""
    modes = []
    for item in filter(None, (s.strip() for s in spec.split(","))):
        if item.lower() in PRESETS:
            modes.extend(PRESETS[item.lower()])
        else:
            modes.append(RunMode.parse(item))
    return modes


def bias_signs(K: int) -> np.ndarray:
    """Alternating -/+ per carriage so each odd/even pair is pushed together."""
    return np.where(np.arange(K) % 2 == 0, -1.0, 1.0)


def run(config: ScenarioConfig, mode: RunMode = RunMode(), array: ArrayModel | None = None,
        dt: float | None = None) -> ServiceTrace:
    t = time_grid(config, dt)
    ns = mode.beams_per_carriage or config.beams_per_carriage
    K, N = config.carriage_count, config.beam_count
    if mode.beamforming:
        if K * ns > N:
            raise CapacityError(f"{K} carriages x {ns} beams exceeds {N} beams")
        if array is None:
            array = ArrayModel(N)
        elif array.N != N:
            raise ConfigError("array beam count does not match the config")

    T = t.size
    received = np.empty((T, K))
    interf = np.zeros((T, K))
    fraction_sum = np.empty(T)
    swept = np.zeros(T, dtype=np.int64) if mode.beamforming and mode.interference_elimination else None

    for lo in range(0, T, _CHUNK):
        hi = min(lo + _CHUNK, T)
        block = _step_block(config, mode, array, ns, t[lo:hi])
        received[lo:hi], interf[lo:hi], fraction_sum[lo:hi], block_swept = block
        if swept is not None:
            swept[lo:hi] = block_swept

    if swept is not None and swept.any():
        log.debug("global sweep removed %d beams over %d steps", swept.sum(), np.count_nonzero(swept))

    sinr = received / (interf + config.noise_power)
    rate = np.log1p(sinr)
    return ServiceTrace(
        t=t,
        received=received,
        interference=interf,
        sinr=sinr,
        rate=rate,
        service=integrate_service(t, rate),
        fraction_sum=fraction_sum,
        swept=swept,
    )


def _step_block(config, mode, array, ns, t):
    x = carriage_positions(config, t)
    d, theta = distance_and_angle(x, config.h)
    G2 = np.square(path_gain(d, config.path_loss_exponent))
    P = config.total_power
    K = config.carriage_count

    if not mode.beamforming:
        frac = np.full(d.shape, 1.0 / K)
        return P * frac * G2, np.zeros_like(d), frac.sum(axis=1), None

    D_true = array.directivity_all(theta)
    if config.theta_bias:
        theta_hat = theta + config.theta_bias * bias_signs(K)
        theta_hat = np.clip(theta_hat, _ANGLE_GUARD, np.pi - _ANGLE_GUARD)
        D_est = array.directivity_all(theta_hat)
    else:
        D_est = D_true
    order = array.rank_beams(D_est).astype(np.intp)
    sel = initial_selection(order, ns)

    swept = None
    if mode.interference_elimination:
        swept = resolve_conflicts_batch(sel, order, d, ns)

    if mode.allocation == "waterfill":
        W = G2 / config.noise_power
        g = (sel * D_est).sum(axis=-1) * W
        per_carriage, _, _ = waterfill_batch(g, P)
        frac = split_across_beams(per_carriage, sel, D_est, config.beam_split)
    else:
        frac = equal_allocation(sel)

    weights = frac * D_true
    received = P * (sel * weights).sum(axis=-1) * G2
    if mode.interference_model == "snr":
        interf = np.zeros_like(received)
    elif config.interference_gain == "interferer":
        interf = interference_all(sel, weights, G2, P)
    else:
        # victim's own gain and the shared beam's directivity toward the victim
        load = (sel * frac).sum(axis=-2, keepdims=True)
        others = load - sel * frac
        interf = P * G2 * (sel * D_true * others).sum(axis=-1)
    return received, interf, frac.sum(axis=(-2, -1)), swept


def compare(config: ScenarioConfig, modes, array: ArrayModel | None = None,
            dt: float | None = None) -> dict:
    """Run every mode on the same grid; returns ``{label: trace}`` in input order."""
    modes = list(modes)
    if len(modes) < 2:
        raise ConfigError("compare needs at least two modes")
    labels = [m.label for m in modes]
    if len(set(labels)) != len(labels):
        # identical modes are legal; disambiguate their columns
        totals = {lab: labels.count(lab) for lab in labels}
        seen = {}
        for i, lab in enumerate(labels):
            if totals[lab] > 1:
                seen[lab] = seen.get(lab, 0) + 1
                labels[i] = f"{lab}#{seen[lab]}"
    if array is None and any(m.beamforming for m in modes):
        array = ArrayModel(config.beam_count)
    return {lab: run(config, m, array, dt) for lab, m in zip(labels, modes)}


def relative_gain(trace_a: ServiceTrace, trace_b: ServiceTrace) -> float:
    """``S_a(t_s) / S_b(t_s) - 1``."""
    return trace_a.final_total / trace_b.final_total - 1.0


def _columns(trace: ServiceTrace):
    T, K = trace.rate.shape
    total = np.repeat(trace.total_service, K)
    return [
        trace.received.ravel(),
        trace.interference.ravel(),
        trace.sinr.ravel(),
        trace.rate.ravel(),
        trace.service.ravel(),
        total,
    ]


def _write(columns, header, out):
    body = np.column_stack(columns)
    fmt = ["%.17g", "%d"] + ["%.17g"] * (body.shape[1] - 2)
    buf = io.StringIO()
    np.savetxt(buf, body, fmt=fmt, delimiter=",", newline="\n", header=",".join(header), comments="")
    text = buf.getvalue()
    if hasattr(out, "write"):
        out.write(text)
    else:
        Path(out).write_bytes(text.encode("utf-8"))


def _index_columns(trace: ServiceTrace):
    T, K = trace.rate.shape
    return [np.repeat(trace.t, K), np.tile(np.arange(1, K + 1), T)]


def write_trace_csv(trace: ServiceTrace, out) -> None:
    """One row per (step, carriage); carriages are numbered from 1."""
    _write(_index_columns(trace) + _columns(trace), CSV_FIELDS, out)


def write_compare_csv(traces: dict, out) -> None:
    """Side-by-side traces; metric columns are prefixed ``<label>:``."""
    traces = dict(traces)
    first = next(iter(traces.values()))
    columns = _index_columns(first)
    header = list(CSV_FIELDS[:2])
    for label, trace in traces.items():
        if not np.array_equal(trace.t, first.t):
            raise ValueError("traces are on different time grids")
        columns += _columns(trace)
        header += [f"{label}:{name}" for name in CSV_FIELDS[2:]]
    _write(columns, header, out)
