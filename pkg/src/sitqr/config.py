"""Experiment configuration and JSON loading (unknown keys are rejected)."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .dynamics import EpidemicParams
from .metrics import UtilityParams
from .testing import RAPID, RTPCR, TestSpec

# Infection scale that gives a 2-3 day early doubling time and a mean
# no-intervention peak near 320 on the default 1000-node, mu=20 graphs.
CALIBRATED_BETA0 = 0.6
NOMINAL_BETA0 = 0.015

DEFAULT_GRID = tuple(round(0.01 * i, 2) for i in range(11))


@dataclass(frozen=True)
class NetworkConfig:
    n: int = 1000
    mu: int = 20
    k_exp: float = 1.0


@dataclass(frozen=True)
class BudgetConfig:
    b: float = 0.1
    m: float = 1.0
    lambda1: float = 0.067
    lambda1_grid: tuple[float, ...] = DEFAULT_GRID

    def __post_init__(self):
        object.__setattr__(self, "lambda1_grid", tuple(float(x) for x in self.lambda1_grid))
        if self.b < 0 or self.m <= 0:
            raise ValueError("need b >= 0 and m > 0")
        if not (0 <= self.lambda1 <= self.b):
            raise ValueError(f"lambda1={self.lambda1} outside [0, b]")
        bad = [x for x in self.lambda1_grid if not (0 <= x <= self.b + 1e-12)]
        if bad:
            raise ValueError(f"grid points outside [0, b]: {bad}")


@dataclass(frozen=True)
class Thresholds:
    i_t1: int = 10
    i_t2: int = 5


@dataclass(frozen=True)
class OdeConfig:
    beta: float = 0.4
    gamma: float = 0.1
    i_init: float = 0.01
    t_end: float = 100.0
    dt: float = 0.01
    stride: int = 100


@dataclass(frozen=True)
class ExperimentConfig:
    network: NetworkConfig = field(default_factory=NetworkConfig)
    epidemic: EpidemicParams = field(
        default_factory=lambda: EpidemicParams(beta0=CALIBRATED_BETA0))
    tests: tuple[TestSpec, TestSpec] = (RTPCR, RAPID)
    budget: BudgetConfig = field(default_factory=BudgetConfig)
    thresholds: Thresholds = field(default_factory=Thresholds)
    utility: UtilityParams = field(default_factory=UtilityParams)
    ode: OdeConfig = field(default_factory=OdeConfig)
    horizon: int = 100
    step: int = 1
    replicates: int = 21
    master_seed: int = 0

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.step != 1:
            raise ValueError("stochastic runs use a fixed 1-day step")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if len(self.tests) != 2:
            raise ValueError("exactly two tests are required")

    def replace(self, **changes) -> "ExperimentConfig":
        """Shallow replace; nested sections accept dicts of field overrides."""
        for key, val in list(changes.items()):
            cur = getattr(self, key)
            if isinstance(val, dict) and dataclasses.is_dataclass(cur):
                changes[key] = dataclasses.replace(cur, **val)
        return dataclasses.replace(self, **changes)


_NESTED = {
    "network": NetworkConfig,
    "epidemic": EpidemicParams,
    "budget": BudgetConfig,
    "thresholds": Thresholds,
    "utility": UtilityParams,
    "ode": OdeConfig,
}


def _build(cls, data: dict, where: str):
    if not isinstance(data, dict):
        raise ValueError(f"{where}: expected an object")
    names = {f.name for f in dataclasses.fields(cls) if not f.name.startswith("_")}
    unknown = set(data) - names
    if unknown:
        raise ValueError(f"{where}: unknown keys {sorted(unknown)}")
    return cls(**data)


def config_from_dict(data: dict) -> ExperimentConfig:
    data = dict(data)
    top = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(data) - top
    if unknown:
        raise ValueError(f"unknown config keys {sorted(unknown)}")
    kwargs = {}
    for key, val in data.items():
        if key in _NESTED:
            kwargs[key] = _build(_NESTED[key], val, key)
        elif key == "tests":
            if not isinstance(val, list) or len(val) != 2:
                raise ValueError("tests: expected a list of two test objects")
            kwargs[key] = tuple(_build(TestSpec, t, f"tests[{i}]") for i, t in enumerate(val))
        else:
            kwargs[key] = val
    return ExperimentConfig(**kwargs)


def load_config(path) -> ExperimentConfig:
    return config_from_dict(json.loads(Path(path).read_text()))


def config_to_dict(cfg: ExperimentConfig) -> dict:
    d = dataclasses.asdict(cfg)
    d["tests"] = [dataclasses.asdict(t) for t in cfg.tests]
    d["budget"]["lambda1_grid"] = list(cfg.budget.lambda1_grid)
    return d
