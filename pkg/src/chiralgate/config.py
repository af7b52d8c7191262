"""Scenario configuration: YAML schema, strict validation, defaults.

Unknown keys anywhere in the tree are hard errors so a typo in a physics
parameter can never silently fall back to a default.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

from .errors import ConfigError
from .molecule import (BUILTINS, DipoleComponents, RotorConstants,
                       TransitionTable)
from .pulses import (ALPHA1_PROFILES, StapSchedule, StirapSchedule,
                     default_stap_schedule, default_stirap_schedule)

_STIRAP_PULSE_KEYS = {"t1", "t_f", "ps_amplitude", "tau", "ps_width", "q_width"}
_STAP_PULSE_KEYS = {"t_split", "t_f", "alpha_m", "t_alpha2",
                    "alpha1_profile", "q_width"}
_TOP_KEYS = {"protocol", "molecule", "pulses", "n_steps", "shots", "seed",
             "out_dir", "checkpoints_us", "enantiomer", "ps_order",
             "erratum_s_gate", "oracle_steps", "fields"}


@dataclass
class ScenarioConfig:
    protocol: str = "stap"
    molecule: str | dict = "propanediol-corrected"
    pulses: dict = field(default_factory=dict)
    n_steps: int = 20
    shots: int = 5000
    seed: int = 1
    out_dir: str = "out"
    checkpoints_us: list[float] = field(default_factory=lambda: [0.61, 1.24, 2.53])
    enantiomer: str = "both"
    ps_order: str = "ps"
    erratum_s_gate: bool = False
    oracle_steps: int = 2000
    fields: dict | None = None

    def build_schedule(self) -> StirapSchedule | StapSchedule:
        try:
            if self.protocol == "stirap":
                return default_stirap_schedule(**self.pulses)
            return default_stap_schedule(**self.pulses)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid pulse parameters: {exc}") from exc

    def molecule_params(self):
        if isinstance(self.molecule, str):
            return BUILTINS[self.molecule]
        m = self.molecule
        try:
            constants = RotorConstants(**m["constants"])
            dipoles = DipoleComponents(**m["dipoles"])
            table = TransitionTable(**m["table"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid inline molecule spec: {exc}") from exc
        return constants, dipoles, table


def _require_keys(actual: dict, allowed: set, context: str) -> None:
    unknown = set(actual) - allowed
    if unknown:
        raise ConfigError(
            f"unknown key(s) in {context}: {', '.join(sorted(unknown))}")


def validate_config(raw: dict) -> ScenarioConfig:
    if not isinstance(raw, dict):
        raise ConfigError(f"config root must be a mapping, got {type(raw).__name__}")
    _require_keys(raw, _TOP_KEYS, "config")
    cfg = ScenarioConfig(**raw)

    if cfg.protocol not in ("stirap", "stap"):
        raise ConfigError(f"protocol must be 'stirap' or 'stap', got {cfg.protocol!r}")
    if cfg.enantiomer not in ("L", "R", "both"):
        raise ConfigError(f"enantiomer must be 'L', 'R' or 'both', got {cfg.enantiomer!r}")
    if cfg.ps_order not in ("ps", "sp"):
        raise ConfigError(f"ps_order must be 'ps' or 'sp', got {cfg.ps_order!r}")
    for name, minval in (("n_steps", 2), ("shots", 1), ("oracle_steps", 1)):
        v = getattr(cfg, name)
        if not isinstance(v, int) or v < minval:
            raise ConfigError(f"{name} must be an integer >= {minval}, got {v!r}")
    if not isinstance(cfg.seed, int):
        raise ConfigError(f"seed must be an integer, got {cfg.seed!r}")
    if not isinstance(cfg.erratum_s_gate, bool):
        raise ConfigError(f"erratum_s_gate must be a boolean, got {cfg.erratum_s_gate!r}")
    if not isinstance(cfg.checkpoints_us, list) or not all(
            isinstance(t, (int, float)) for t in cfg.checkpoints_us):
        raise ConfigError("checkpoints_us must be a list of numbers")

    if not isinstance(cfg.pulses, dict):
        raise ConfigError("pulses must be a mapping")
    allowed = _STIRAP_PULSE_KEYS if cfg.protocol == "stirap" else _STAP_PULSE_KEYS
    _require_keys(cfg.pulses, allowed, f"pulses ({cfg.protocol})")
    if "alpha1_profile" in cfg.pulses and cfg.pulses["alpha1_profile"] not in ALPHA1_PROFILES:
        raise ConfigError(
            f"alpha1_profile must be one of {ALPHA1_PROFILES}, "
            f"got {cfg.pulses['alpha1_profile']!r}")

    if isinstance(cfg.molecule, str):
        if cfg.molecule not in BUILTINS:
            raise ConfigError(
                f"unknown molecule {cfg.molecule!r}; "
                f"builtins: {', '.join(sorted(BUILTINS))}")
    elif isinstance(cfg.molecule, dict):
        _require_keys(cfg.molecule, {"constants", "dipoles", "table"}, "molecule")
    else:
        raise ConfigError("molecule must be a builtin name or an inline mapping")

    if cfg.fields is not None:
        if not isinstance(cfg.fields, dict):
            raise ConfigError("fields must be a mapping")
        _require_keys(cfg.fields, {"eps_p", "eps_s", "eps_q", "max_field"}, "fields")

    cfg.build_schedule()  # surface bad pulse values at validation time
    cfg.molecule_params()
    return cfg


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
    return validate_config(raw if raw is not None else {})
