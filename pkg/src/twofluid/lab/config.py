"""Flat ``key = value`` run configuration."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

SCENARIOS = ("manufactured", "soliton1d", "briowu", "soliton2d")
STEPPERS = ("explicit", "imex")
PARAM_KEYS = ("gamma", "lambda_m", "r_hat_g", "lambda_hat_d", "c_hat", "xi", "kappa")


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    scenario: str = "manufactured"
    nx: int = 100
    ny: int = 0
    order: int = 2
    rk_order: int = 2
    stepper: str = "explicit"
    cfl: float = 0.45
    t_end: float = 0.5
    sigma_src: float = 0.5
    with_source: bool = True
    output_dir: Optional[str] = None
    snapshot_interval: Optional[float] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; expected one of {', '.join(SCENARIOS)}")
        if self.stepper not in STEPPERS:
            raise ConfigError(f"stepper must be explicit or imex, got {self.stepper!r}")
        if self.nx < 1 or self.ny < 0:
            raise ConfigError("cell counts must be positive")
        if self.scenario == "soliton2d" and self.ny < 1:
            raise ConfigError("soliton2d needs ny")
        if self.order not in (1, 2):
            raise ConfigError(f"order must be 1 or 2, got {self.order}")
        if self.rk_order not in (2, 3):
            raise ConfigError(f"rk_order must be 2 or 3, got {self.rk_order}")
        if not 0.0 < self.cfl <= 1.0:
            raise ConfigError(f"cfl must lie in (0, 1], got {self.cfl}")
        if not self.t_end > 0.0:
            raise ConfigError("t_end must be positive")
        if self.snapshot_interval is not None and not self.snapshot_interval > 0.0:
            raise ConfigError("snapshot_interval must be positive")
        for k in self.params:
            if k not in PARAM_KEYS:
                raise ConfigError(f"unknown physical parameter {k!r}")

    def with_overrides(self, overrides) -> "ScenarioConfig":
        """Return a copy with ``key=value`` strings (or a mapping) applied."""
        if isinstance(overrides, dict):
            items = overrides.items()
        else:
            items = [_split(o, "override") for o in overrides]
        values = _as_dict(self)
        for key, raw in items:
            _assign(values, key.strip(), raw if not isinstance(raw, str) else raw.strip())
        return ScenarioConfig(**values)


def _as_dict(cfg):
    d = {f.name: getattr(cfg, f.name) for f in dataclasses.fields(cfg)}
    d["params"] = dict(cfg.params)
    return d


def _split(text, where):
    if "=" not in text:
        raise ConfigError(f"{where}: expected key = value, got {text!r}")
    key, value = text.split("=", 1)
    return key.strip(), value.strip()


def _parse_bool(raw):
    if isinstance(raw, bool):
        return raw
    low = str(raw).lower()
    if low in ("true", "false"):
        return low == "true"
    raise ConfigError(f"expected true or false, got {raw!r}")


def _optional(conv):
    def parse(raw):
        if raw is None or (isinstance(raw, str) and raw.lower() in ("", "none")):
            return None
        return conv(raw)
    return parse


_CONVERTERS = {
    "scenario": str,
    "nx": int,
    "ny": int,
    "order": int,
    "rk_order": int,
    "stepper": lambda s: str(s).lower(),
    "cfl": float,
    "t_end": float,
    "sigma_src": float,
    "with_source": _parse_bool,
    "output_dir": _optional(str),
    "snapshot_interval": _optional(float),
}


def _assign(values, key, raw):
    try:
        if key in _CONVERTERS:
            values[key] = _CONVERTERS[key](raw)
        elif key in PARAM_KEYS:
            values["params"][key] = float(raw)
        else:
            raise ConfigError(f"unknown configuration key {key!r}")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc


def parse_config(text: str) -> ScenarioConfig:
    values = _as_dict(ScenarioConfig())
    seen = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, raw = _split(line, f"line {lineno}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        try:
            _assign(values, key, raw)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return ScenarioConfig(**values)


def load_config(path) -> ScenarioConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))
