"""Experiment configuration and its YAML document format.

A configuration document looks like::

    scenario: bernoulli9        # or give `plays` and an `arms` table instead
    horizon: 100000
    reps: 50
    seed: 7
    stride: 100                 # optional, default max(1, horizon // 1000)
    threads: 1
    out: results/bernoulli9.csv
    policies:
      - orchexplore
      - name: mpsesa
        gamma: 1.0
        xi: 1.0
      - name: orchexplore
        label: orchexplore_hfd
        width: hfd

Inline arms replace ``scenario``::

    plays: 2
    arms:
      - {mean: 0.9, capacity: 2}
      - {mean: 0.5, capacity: 1, distribution: gaussian, variance: 0.5}
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import yaml

from ..env import ArmSpec, Environment, InfeasibleEnvironmentError
from ..policies import UnknownPolicyError, policy_parameters
from .scenarios import SCENARIOS, builtin_scenario

TOP_LEVEL_KEYS = {"scenario", "arms", "plays", "horizon", "reps", "seed", "stride", "threads", "out", "policies"}
ARM_KEYS = {"mean", "capacity", "distribution", "variance"}


class ConfigError(ValueError):
    """Malformed configuration; the message names the file, line and field."""


@dataclass
class PolicySpec:
    name: str
    label: str | None = None
    params: dict = field(default_factory=dict)

    @property
    def key(self) -> str:
        return self.label or self.name

    def to_dict(self) -> dict:
        d = {"name": self.name}
        if self.label:
            d["label"] = self.label
        d.update(self.params)
        return d


@dataclass
class ExperimentConfig:
    scenario: str | None = "bernoulli9"
    arms: list | None = None
    plays: int | None = None
    horizon: int = 10_000
    reps: int = 200
    seed: int = 0
    policies: list = field(default_factory=list)
    stride: int | None = None
    threads: int = 1
    out: str | None = None

    def __post_init__(self):
        if self.reps < 1:
            raise ConfigError(f"reps must be >= 1, got {self.reps}")
        if self.horizon < 0:
            raise ConfigError(f"horizon must be >= 0, got {self.horizon}")
        if self.stride is not None and self.stride < 1:
            raise ConfigError(f"stride must be >= 1, got {self.stride}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        self.policies = [p if isinstance(p, PolicySpec) else PolicySpec(p) for p in self.policies]
        keys = [p.key for p in self.policies]
        dupes = sorted({k for k in keys if keys.count(k) > 1})
        if dupes:
            raise ConfigError(f"duplicate policy labels {dupes}; give each run a distinct label")

    @property
    def log_stride(self) -> int:
        return self.stride if self.stride is not None else max(1, self.horizon // 1000)

    def environment(self) -> Environment:
        if self.arms:
            if self.plays is None:
                raise ConfigError("inline arms need `plays`")
            return Environment(tuple(self.arms), self.plays)
        if self.scenario is None:
            raise ConfigError("either `scenario` or `arms` is required")
        return builtin_scenario(self.scenario)

    def to_dict(self) -> dict:
        d = {
            "horizon": self.horizon,
            "reps": self.reps,
            "seed": self.seed,
            "stride": self.log_stride,
            "threads": self.threads,
            "policies": [p.to_dict() for p in self.policies],
        }
        if self.arms:
            d["plays"] = self.plays
            d["arms"] = [a.to_dict() for a in self.arms]
        else:
            d["scenario"] = self.scenario
        if self.out is not None:
            d["out"] = self.out
        return d


class _Located(dict):
    """Mapping that remembers the source line of each key."""

    line = 0

    def __init__(self):
        super().__init__()
        self.lines = {}


class _Loader(yaml.SafeLoader):
    pass


def _construct_mapping(loader, node):
    loader.flatten_mapping(node)
    out = _Located()
    out.line = node.start_mark.line + 1
    for key_node, value_node in node.value:
        key = loader.construct_object(key_node, deep=True)
        out[key] = loader.construct_object(value_node, deep=True)
        out.lines[key] = key_node.start_mark.line + 1
    return out


_Loader.add_constructor("tag:yaml.org,2002:map", _construct_mapping)


def _where(source, mapping, key=None):
    line = getattr(mapping, "lines", {}).get(key, getattr(mapping, "line", 0))
    return f"{source}:{line}" if line else source


def _fail(source, mapping, key, path, msg):
    raise ConfigError(f"{_where(source, mapping, key)}: {path}: {msg}")


def _integer(source, mapping, key, path, minimum=None):
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        _fail(source, mapping, key, path, f"expected an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        _fail(source, mapping, key, path, f"must be >= {minimum}, got {value}")
    return value


def _parse_arm(source, item, index):
    path = f"arms[{index}]"
    if not isinstance(item, dict):
        raise ConfigError(f"{source}: {path}: expected a mapping with mean/capacity, got {item!r}")
    unknown = set(item) - ARM_KEYS
    if unknown:
        key = sorted(unknown)[0]
        _fail(source, item, key, f"{path}.{key}", f"unknown field; expected one of {sorted(ARM_KEYS)}")
    for key in ("mean", "capacity"):
        if key not in item:
            raise ConfigError(f"{_where(source, item)}: {path}.{key}: missing")
    mean = item["mean"]
    if isinstance(mean, bool) or not isinstance(mean, (int, float)):
        _fail(source, item, "mean", f"{path}.mean", f"expected a number, got {mean!r}")
    capacity = _integer(source, item, "capacity", f"{path}.capacity", minimum=1)
    try:
        return ArmSpec(float(mean), capacity, item.get("distribution", "bernoulli"), item.get("variance"))
    except InfeasibleEnvironmentError as exc:
        raise ConfigError(f"{_where(source, item)}: {path}: {exc}") from None


def _parse_policy(source, parent, item, index):
    path = f"policies[{index}]"
    if isinstance(item, str):
        item = {"name": item}
        where = parent
    elif isinstance(item, dict):
        where = item
    else:
        raise ConfigError(f"{_where(source, parent, 'policies')}: {path}: expected a name or mapping, got {item!r}")
    if "name" not in item:
        raise ConfigError(f"{_where(source, where)}: {path}.name: missing")
    name = item["name"]
    try:
        accepted = policy_parameters(name)
    except UnknownPolicyError as exc:
        _fail(source, where, "name", f"{path}.name", str(exc))
    params = {k: v for k, v in item.items() if k not in ("name", "label")}
    for key in params:
        if key not in accepted:
            _fail(source, where, key, f"{path}.{key}", f"policy {name!r} accepts {sorted(accepted) or 'no parameters'}")
    return PolicySpec(name, item.get("label"), params)


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    try:
        doc = yaml.load(text, Loader=_Loader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = f":{mark.line + 1}" if mark is not None else ""
        raise ConfigError(f"{source}{line}: malformed document: {getattr(exc, 'problem', exc)}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{source}: expected a mapping at the top level")
    if "config" in doc and isinstance(doc["config"], dict):
        doc = doc["config"]  # a results sidecar carries its full config
    unknown = set(doc) - TOP_LEVEL_KEYS
    if unknown:
        key = sorted(unknown)[0]
        _fail(source, doc, key, key, f"unknown field; expected one of {sorted(TOP_LEVEL_KEYS)}")

    kw = {}
    for key, minimum in (("horizon", 0), ("reps", 1), ("seed", None), ("stride", 1), ("threads", 1), ("plays", 1)):
        if key in doc and doc[key] is not None:
            kw[key] = _integer(source, doc, key, key, minimum)
    if "out" in doc:
        kw["out"] = None if doc["out"] is None else str(doc["out"])
    if "arms" in doc:
        if not isinstance(doc["arms"], list) or not doc["arms"]:
            _fail(source, doc, "arms", "arms", "expected a non-empty list of arms")
        kw["arms"] = [_parse_arm(source, a, i) for i, a in enumerate(doc["arms"])]
        kw["scenario"] = None
        if "plays" not in kw:
            _fail(source, doc, "arms", "plays", "inline arms need `plays`")
    elif "scenario" in doc:
        if doc["scenario"] not in SCENARIOS:
            _fail(source, doc, "scenario", "scenario", f"unknown scenario {doc['scenario']!r}; available: {sorted(SCENARIOS)}")
        kw["scenario"] = doc["scenario"]
    policies = doc.get("policies", [])
    if not isinstance(policies, list):
        _fail(source, doc, "policies", "policies", "expected a list")
    kw["policies"] = [_parse_policy(source, doc, p, i) for i, p in enumerate(policies)]
    config = ExperimentConfig(**kw)
    try:
        config.environment()
    except (InfeasibleEnvironmentError, ConfigError) as exc:
        key = "arms" if "arms" in doc else "scenario"
        _fail(source, doc, key, key, str(exc))
    return config


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), os.fspath(path))


def dump_config(config: ExperimentConfig) -> str:
    return yaml.safe_dump(config.to_dict(), sort_keys=False)
