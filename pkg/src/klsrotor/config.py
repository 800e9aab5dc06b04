"""Run configuration: YAML file, then command-line overrides, then validation."""

from __future__ import annotations

import copy
import hashlib
import json
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import yaml

from .errors import UsageError

SUITES = ("kls", "vectorize", "ladder", "rotor", "rp", "criterion")
OUT_ENV = "KLSROTOR_OUT"


@dataclass
class ModelConfig:
    d: int = 1
    edge: int = 4
    cutoffs: list = field(default_factory=lambda: [2, 3])
    inertia: float = 1.0
    coupling: float = 1.0


@dataclass
class RandomConfig:
    seed: int = 0
    trials: int = 1000
    max_dim: int = 16
    rp_trials: int = 100
    curvature_trials: int = 20


@dataclass
class TolConfig:
    ineq: float = 1e-10
    identity: float = 1e-12
    obs: float = 1e-8
    sum_rule: float = 1e-10
    symmetry: float = 1e-10
    chi_match: float = 1e-6
    energy: float = 1e-9
    curvature: float = 1e-6
    integral: float = 1e-6
    j0: float = 1e-9


@dataclass
class OutputConfig:
    dir: str | None = None
    format: str = "json"


@dataclass
class RunConfig:
    suites: list = field(default_factory=lambda: list(SUITES))
    model: ModelConfig = field(default_factory=ModelConfig)
    random: RandomConfig = field(default_factory=RandomConfig)
    tol: TolConfig = field(default_factory=TolConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def N(self) -> int:
        return self.model.edge // 2

    def out_dir(self) -> Path | None:
        d = self.output.dir or os.environ.get(OUT_ENV)
        return Path(d) if d else None


_SECTIONS = {"model": ModelConfig, "random": RandomConfig, "tol": TolConfig, "output": OutputConfig}


def _coerce(path: str, value, default):
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise UsageError(f"{path}: expected a boolean, got {value!r}")
        return value
    if isinstance(default, int) and not isinstance(default, bool):
        if isinstance(value, bool) or not isinstance(value, int):
            raise UsageError(f"{path}: expected an integer, got {value!r}")
        return value
    if isinstance(default, float):
        if isinstance(value, str):
            # YAML 1.1 reads exponent-only literals such as 1e-10 as strings
            try:
                value = float(value)
            except ValueError:
                pass
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise UsageError(f"{path}: expected a number, got {value!r}")
        return float(value)
    if isinstance(default, list):
        if isinstance(value, int) and not isinstance(value, bool):
            value = [value]
        if not isinstance(value, list):
            raise UsageError(f"{path}: expected a list, got {value!r}")
        return list(value)
    return value


def from_dict(data: dict) -> RunConfig:
    """Build a config from a nested mapping; unknown keys are rejected with their path."""
    if not isinstance(data, dict):
        raise UsageError("config: top level must be a mapping")
    cfg = RunConfig()
    for key, val in data.items():
        if key == "suites":
            cfg.suites = _coerce("suites", val, [])
        elif key in _SECTIONS:
            if not isinstance(val, dict):
                raise UsageError(f"{key}: expected a mapping")
            section = getattr(cfg, key)
            names = {f.name for f in fields(section)}
            for k, v in val.items():
                if k not in names:
                    raise UsageError(f"{key}.{k}: unknown field")
                default = getattr(section, k)
                if default is None:
                    setattr(section, k, v)
                else:
                    setattr(section, k, _coerce(f"{key}.{k}", v, default))
        else:
            raise UsageError(f"{key}: unknown section")
    validate(cfg)
    return cfg


def load(path) -> RunConfig:
    """Read a YAML config, or the ``config`` block embedded in a JSON report."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {p}: {exc}") from exc
    try:
        if p.suffix == ".json":
            data = json.loads(text)
        else:
            data = yaml.safe_load(text) or {}
    except (yaml.YAMLError, json.JSONDecodeError) as exc:
        raise UsageError(f"config {p} cannot be parsed: {exc}") from exc
    if isinstance(data, dict) and "schema_version" in data and "config" in data:
        data = data["config"]
    return from_dict(data)


def override(cfg: RunConfig, updates: dict) -> RunConfig:
    """Apply dotted-path overrides such as ``{"model.d": 2}``; ``None`` values are skipped."""
    data = cfg.to_dict()
    for dotted, v in updates.items():
        if v is None:
            continue
        node = data
        *head, last = dotted.split(".")
        for h in head:
            node = node[h]
        node[last] = v
    return from_dict(data)


def validate(cfg: RunConfig) -> None:
    for s in cfg.suites:
        if s not in SUITES:
            raise UsageError(f"suites: unknown suite {s!r}; choose from {', '.join(SUITES)}")
    m = cfg.model
    if m.d < 1:
        raise UsageError("model.d: must be >= 1")
    if m.edge < 2 or m.edge % 2:
        raise UsageError("model.edge: must be an even number >= 2")
    if not m.cutoffs or any((not isinstance(c, int)) or c < 1 for c in m.cutoffs):
        raise UsageError("model.cutoffs: need positive integers")
    if sorted(set(m.cutoffs)) != list(m.cutoffs):
        raise UsageError("model.cutoffs: must be strictly ascending")
    if m.inertia <= 0:
        raise UsageError("model.inertia: must be positive")
    if m.coupling < 0:
        raise UsageError("model.coupling: must be >= 0")
    r = cfg.random
    if r.seed < 0:
        raise UsageError("random.seed: must be >= 0")
    for name in ("trials", "rp_trials", "curvature_trials", "max_dim"):
        if getattr(r, name) < 1:
            raise UsageError(f"random.{name}: must be >= 1")
    for f in fields(cfg.tol):
        if not getattr(cfg.tol, f.name) > 0:
            raise UsageError(f"tol.{f.name}: must be positive")
    if cfg.output.format not in ("json", "csv"):
        raise UsageError("output.format: must be json or csv")


def digest(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def clone(cfg: RunConfig) -> RunConfig:
    return copy.deepcopy(cfg)
