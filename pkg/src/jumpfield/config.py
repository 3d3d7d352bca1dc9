"""YAML experiment configuration.

A config file has three sections mirroring ExperimentConfig:

    experiment: chaos_sweep
    model:
      alpha: 0.5
      drift: {kind: mean_tanh, beta: 0.5}
      main_jump: {kind: tanh, kappa: 0.3}
      rate: {kind: tanh, c0: 1.5, c1: 1.0}
      initial: {kind: uniform, lo: -1.0, hi: 1.0}
    doa: {alpha: 0.5, p_plus: 0.5, x0: 1.0}
    run:
      N_grid: [16, 64, 256, 1024]
      M: 2000
      T: 1.0
      h: 1.0e-3
      replicas: 200
      output_times: [1.0]
      root_seed: 1
      out_path: out

Omitted run keys fall back to the ExperimentConfig defaults.  All
validation failures raise ConfigError (CLI exit code 2).
"""

from __future__ import annotations

from pathlib import Path

import yaml

from .experiments import ConfigError, ExperimentConfig
from .model import Drift, InitialLaw, MainJump, ModelSpec, Rate

__all__ = ["load_config", "parse_config", "ConfigError"]

_RUN_KEYS = {
    "N_grid",
    "M",
    "T",
    "h",
    "replicas",
    "output_times",
    "root_seed",
    "out_path",
    "h_drift",
}


def _build(cls, section: dict, rename=None, context=""):
    if not isinstance(section, dict):
        raise ConfigError(f"{context} section must be a mapping")
    kwargs = dict(section)
    if rename:
        for old, new in rename.items():
            if old in kwargs:
                kwargs[new] = kwargs.pop(old)
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {context} section: {exc}") from exc


def parse_config(data: dict, overrides: dict | None = None) -> ExperimentConfig:
    """Build an ExperimentConfig from a parsed YAML mapping."""
    if not isinstance(data, dict):
        raise ConfigError("config file must contain a mapping at top level")
    unknown = set(data) - {"experiment", "model", "doa", "run"}
    if unknown:
        raise ConfigError(f"unknown top-level config keys: {sorted(unknown)}")
    if "experiment" not in data:
        raise ConfigError("config is missing the 'experiment' key")
    model_sec = dict(data.get("model", {}))
    alpha = model_sec.pop("alpha", None)
    if alpha is None:
        raise ConfigError("model section needs an 'alpha' key")
    drift = _build(Drift, model_sec.pop("drift", {"kind": "zero"}), context="model.drift")
    main_jump = _build(
        MainJump, model_sec.pop("main_jump", {"kind": "zero"}), context="model.main_jump"
    )
    rate = _build(Rate, model_sec.pop("rate", {"kind": "constant", "c": 1.0}), context="model.rate")
    initial = _build(
        InitialLaw, model_sec.pop("initial", {"kind": "point", "loc": 0.0}), context="model.initial"
    )
    if model_sec:
        raise ConfigError(f"unknown model keys: {sorted(model_sec)}")
    try:
        model = ModelSpec(
            alpha=alpha, drift=drift, main_jump=main_jump, rate=rate, initial_law=initial
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    doa_sec = dict(data.get("doa", {}))
    doa_sec.pop("kind", None)  # implied by p_plus
    from .stable import DoaLaw

    try:
        doa = DoaLaw(**doa_sec)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid doa section: {exc}") from exc

    run_sec = dict(data.get("run", {}))
    unknown = set(run_sec) - _RUN_KEYS
    if unknown:
        raise ConfigError(f"unknown run keys: {sorted(unknown)}")
    if "N_grid" in run_sec:
        run_sec["N_grid"] = tuple(int(n) for n in run_sec["N_grid"])
    if "output_times" in run_sec:
        run_sec["output_times"] = tuple(float(t) for t in run_sec["output_times"])
    if overrides:
        run_sec.update(overrides)
    try:
        return ExperimentConfig(
            experiment=data["experiment"], model=model, doa=doa, **run_sec
        )
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | Path, overrides: dict | None = None) -> ExperimentConfig:
    """Load and validate a YAML experiment config from disk."""
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed YAML in {path}: {exc}") from exc
    return parse_config(data, overrides)
