"""Experiment configuration: flat key=value files with audit-friendly names.

Every physical quantity keeps the unit in its key.  Unknown keys are
rejected so a config cannot silently drift from the simulated model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .channel import LIGHT_SPEED, ChannelParams
from .errors import ConfigError
from .geometry import RisGeometry
from .network import ScenarioSpec


@dataclass(frozen=True)
class ExperimentConfig:
    alpha_deg: float = 10.0
    k_f: float = 0.0016
    w_hz: float = 3e9
    f_hz: float = 1e12
    p_be_w: float = 0.1
    t0_kelvin: float = 300.0
    t_db: float = 10.0
    n_elements: int = 10000
    dx_m: Optional[float] = None   # defaults to half a wavelength
    dy_m: Optional[float] = None
    counts: tuple[int, int, int, int] = (28, 28, 28, 14)  # sources, sinks, reflectors, repeaters
    box_m: float = 32.0
    reach_m: float = 20.0
    pairs: int = 200
    tests: int = 100
    seed: int = 1
    backup: bool = False

    @property
    def element_dx(self) -> float:
        return self.dx_m if self.dx_m is not None else LIGHT_SPEED / (2.0 * self.f_hz)

    @property
    def element_dy(self) -> float:
        return self.dy_m if self.dy_m is not None else LIGHT_SPEED / (2.0 * self.f_hz)

    def channel_params(self) -> ChannelParams:
        return ChannelParams(
            f=self.f_hz,
            w=self.w_hz,
            k_f=self.k_f,
            p_be=self.p_be_w,
            alpha=math.radians(self.alpha_deg),
            t_noise=self.t0_kelvin,
            t_snr_db=self.t_db,
        )

    def ris_geometry(self) -> RisGeometry:
        return RisGeometry(n=self.n_elements, dx=self.element_dx, dy=self.element_dy)

    def scenario_spec(self) -> ScenarioSpec:
        return ScenarioSpec(
            n_bs=self.counts[0],
            n_ue=self.counts[1],
            n_ris=self.counts[2],
            n_rn=self.counts[3],
            box=self.box_m,
            reach_limit=self.reach_m,
            num_pairs=self.pairs,
            ris_geometry=self.ris_geometry(),
        )


_FLOAT_KEYS = {
    "alpha_deg", "k_f", "W_hz", "f_hz", "P_be_w", "T0_kelvin", "T_db",
    "dx_m", "dy_m", "box_m", "reach_m",
}
_INT_KEYS = {"N_elements", "pairs", "tests", "seed"}
_FIELD_OF_KEY = {
    "alpha_deg": "alpha_deg",
    "k_f": "k_f",
    "W_hz": "w_hz",
    "f_hz": "f_hz",
    "P_be_w": "p_be_w",
    "T0_kelvin": "t0_kelvin",
    "T_db": "t_db",
    "N_elements": "n_elements",
    "dx_m": "dx_m",
    "dy_m": "dy_m",
    "counts": "counts",
    "box_m": "box_m",
    "reach_m": "reach_m",
    "pairs": "pairs",
    "tests": "tests",
    "seed": "seed",
    "backup": "backup",
}


def parse_config(text: str) -> ExperimentConfig:
    values: dict[str, object] = {}
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in _FIELD_OF_KEY:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        try:
            if key == "counts":
                parts = [int(p) for p in value.split(",")]
                if len(parts) != 4:
                    raise ValueError("need four comma-separated counts")
                values["counts"] = tuple(parts)
            elif key == "backup":
                if value not in ("0", "1"):
                    raise ValueError("backup must be 0 or 1")
                values["backup"] = value == "1"
            elif key in _INT_KEYS:
                values[_FIELD_OF_KEY[key]] = int(value)
            else:
                values[_FIELD_OF_KEY[key]] = float(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None
    config = ExperimentConfig(**values)  # type: ignore[arg-type]
    validate_config(config)
    return config


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


def validate_config(config: ExperimentConfig) -> None:
    positive = {
        "alpha_deg": config.alpha_deg,
        "k_f": config.k_f,
        "W_hz": config.w_hz,
        "f_hz": config.f_hz,
        "P_be_w": config.p_be_w,
        "T0_kelvin": config.t0_kelvin,
        "N_elements": config.n_elements,
        "dx_m": config.element_dx,
        "dy_m": config.element_dy,
        "box_m": config.box_m,
        "reach_m": config.reach_m,
    }
    for name, value in positive.items():
        if value <= 0:
            raise ConfigError(f"{name} must be strictly positive, got {value!r}")
    if not 0.0 < config.alpha_deg < 180.0:
        raise ConfigError(f"alpha_deg must be in (0, 180), got {config.alpha_deg!r}")
    if any(c < 0 for c in config.counts) or config.counts[0] == 0 or config.counts[1] == 0:
        raise ConfigError(f"counts must be nonnegative with at least one source and sink: {config.counts!r}")
    if config.pairs < 0 or config.tests < 0:
        raise ConfigError("pairs and tests must be nonnegative")
