"""Scenario parameters and the flat ``key=value`` config format."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import CapacityError, ConfigError

KMH = 1000.0 / 3600.0

BEAM_SPLITS = ("equal", "directivity")
INTERFERENCE_GAINS = ("interferer", "victim")


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def watts_to_dbm(p_w: float) -> float:
    return 10.0 * math.log10(p_w) + 30.0


@dataclass(frozen=True)
class ScenarioConfig:
    """Physical and numerical parameters of one traversal.

    All fields are SI (m, s, W).  Defaults reproduce the reference train
    scenario: 360 km/h, rail 50 m from the base station, sixteen 25 m
    carriages, a 32-beam array and a 1 km cell.
    """

    velocity: float = 360.0 * KMH
    h: float = 50.0
    carriage_count: int = 16
    carriage_length: float = 25.0
    cell_half_span: float = 500.0
    beam_count: int = 32
    path_loss_exponent: float = 3.0
    total_power: float = dbm_to_watts(30.0)
    noise_power: float = dbm_to_watts(-104.0)
    dt: float = 1e-3
    beams_per_carriage: int = 1
    theta_bias: float = 0.0
    beam_split: str = "equal"
    interference_gain: str = "interferer"

    def __post_init__(self):
        positive = {
            "velocity": self.velocity,
            "h": self.h,
            "carriage_length": self.carriage_length,
            "cell_half_span": self.cell_half_span,
            "total_power": self.total_power,
            "noise_power": self.noise_power,
            "dt": self.dt,
        }
        for name, value in positive.items():
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be positive and finite, got {value!r}")
        if self.carriage_count < 1:
            raise ConfigError(f"carriage_count must be >= 1, got {self.carriage_count}")
        if self.beam_count < 1:
            raise ConfigError(f"beam_count must be >= 1, got {self.beam_count}")
        if not 2.0 <= self.path_loss_exponent <= 5.0:
            raise ConfigError(
                f"path_loss_exponent must lie in [2, 5], got {self.path_loss_exponent}"
            )
        if not 1 <= self.beams_per_carriage <= self.beam_count:
            raise ConfigError(
                f"beams_per_carriage must lie in [1, {self.beam_count}], "
                f"got {self.beams_per_carriage}"
            )
        if not (math.isfinite(self.theta_bias) and abs(self.theta_bias) < math.pi / 2):
            raise ConfigError(f"theta_bias must satisfy |bias| < pi/2, got {self.theta_bias}")
        if self.beam_split not in BEAM_SPLITS:
            raise ConfigError(f"beam_split must be one of {BEAM_SPLITS}")
        if self.interference_gain not in INTERFERENCE_GAINS:
            raise ConfigError(f"interference_gain must be one of {INTERFERENCE_GAINS}")
        if self.carriage_count * self.beams_per_carriage > self.beam_count:
            raise CapacityError(
                f"{self.carriage_count} carriages x {self.beams_per_carriage} beams "
                f"exceeds the {self.beam_count} available beams"
            )

    @property
    def element_count(self) -> int:
        # N x N Butler network: one element per beam.
        return self.beam_count

    @property
    def total_power_dbm(self) -> float:
        return watts_to_dbm(self.total_power)

    @property
    def service_time(self) -> float:
        """Time from the head MR entering at +X to the tail MR leaving at -X."""
        span = 2.0 * self.cell_half_span + (self.carriage_count - 1) * self.carriage_length
        return span / self.velocity

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)


# file key -> (field name, converter from the file's units)
_FILE_KEYS = {
    "velocity_kmh": ("velocity", lambda s: float(s) * KMH),
    "h_m": ("h", float),
    "K": ("carriage_count", int),
    "Lc_m": ("carriage_length", float),
    "X_m": ("cell_half_span", float),
    "N": ("beam_count", int),
    "alpha": ("path_loss_exponent", float),
    "power_dbm": ("total_power", lambda s: dbm_to_watts(float(s))),
    "noise_dbm": ("noise_power", lambda s: dbm_to_watts(float(s))),
    "dt_s": ("dt", float),
    "Ns": ("beams_per_carriage", int),
    "theta_bias_rad": ("theta_bias", float),
    "beam_split": ("beam_split", str),
    "interference_gain": ("interference_gain", str),
}


def parse_config(text: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    """Parse flat ``key=value`` text; ``#`` starts a comment, blank lines are skipped."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _FILE_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value

    fields = {}
    for key, value in values.items():
        name, convert = _FILE_KEYS[key]
        try:
            fields[name] = convert(value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {value!r}") from exc
    return dataclasses.replace(base or ScenarioConfig(), **fields)


def load_config(path: str | Path) -> ScenarioConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def format_config(config: ScenarioConfig) -> str:
    """Inverse of :func:`parse_config` (round-trips to 17 significant digits)."""
    lines = [
        f"velocity_kmh={config.velocity / KMH:.17g}",
        f"h_m={config.h:.17g}",
        f"K={config.carriage_count}",
        f"Lc_m={config.carriage_length:.17g}",
        f"X_m={config.cell_half_span:.17g}",
        f"N={config.beam_count}",
        f"alpha={config.path_loss_exponent:.17g}",
        f"power_dbm={config.total_power_dbm:.17g}",
        f"noise_dbm={watts_to_dbm(config.noise_power):.17g}",
        f"dt_s={config.dt:.17g}",
        f"Ns={config.beams_per_carriage}",
        f"theta_bias_rad={config.theta_bias:.17g}",
        f"beam_split={config.beam_split}",
        f"interference_gain={config.interference_gain}",
    ]
    return "\n".join(lines) + "\n"
