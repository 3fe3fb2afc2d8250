"""Versioned JSON configuration for the command-line verbs.

Every config file carries ``schema_version`` (currently 1) and optionally
``kind`` naming the verb it belongs to.  Unknown keys are rejected rather
than ignored so typos fail loudly.  Missing keys fall back to the bundled
defaults below, which are also what runs when no config file is given.
"""

from __future__ import annotations

import json
import math

from .bounds import BoundInputs, GapStudyConfig
from .trainer import ExperimentConfig

SCHEMA_VERSION = 1


class ConfigError(Exception):
    """Invalid configuration file or option set."""


DEFAULT_CONFIGS: dict[str, dict] = {
    "train": {},
    "reproduce-fig5": {
        "loss": "l2",
        "normalizations": ["half", "full", "double"],
    },
    "reproduce-fig6": {
        "arms": [["l2", "half"], ["h1", "half"], ["l2", "full"], ["h1", "full"]],
    },
    "fejer": {
        "u": [0.5 * math.pi, 1.5 * math.pi],
        "delta": 0.125 * math.pi,
        "degrees": [4, 8, 16, 32],
        "n_grid": 4096,
    },
    "norms": {
        "circuit": {},
        "theta": None,
        "seed": 0,
    },
    "bounds": {
        "n_frequencies": 13,
        "xi": 2,
        "sup_bound": 1.0,
        "coeff_bound": 2.0,
        "loss_bound": 4.0,
        "lipschitz": 1.0,
        "n_samples": 10,
        "delta": 0.05,
    },
    "gap-study": {},
    "selftest": {},
}

# keys of the nested experiment config, shared by train/fig5/fig6
_EXPERIMENT_KEYS = set(ExperimentConfig().to_dict())
_GAP_KEYS = {
    "model_degree",
    "target_degree",
    "sample_sizes",
    "n_seeds",
    "deriv_order",
    "target_decay",
    "base_seed",
    "delta",
    "grid_points",
}


def load_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    version = raw.pop("schema_version", None)
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"schema_version must be {SCHEMA_VERSION}, got {version!r}"
        )
    return raw


def for_verb(verb: str, path: str | None = None) -> dict:
    """Bundled defaults for a verb, overridden by a config file if given."""
    if verb not in DEFAULT_CONFIGS:
        raise ConfigError(f"no configuration schema for verb {verb!r}")
    merged = json.loads(json.dumps(DEFAULT_CONFIGS[verb]))  # deep copy
    if path is None:
        return merged
    raw = load_file(path)
    kind = raw.pop("kind", None)
    if kind is not None and kind != verb:
        raise ConfigError(f"config kind {kind!r} does not match verb {verb!r}")
    allowed = set(merged) | (_EXPERIMENT_KEYS if verb in ("train", "reproduce-fig5", "reproduce-fig6") else set())
    if verb == "gap-study":
        allowed |= _GAP_KEYS
    for key, value in raw.items():
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} for verb {verb!r}")
        merged[key] = value
    return merged


def build_experiment(cfg: dict, **overrides) -> ExperimentConfig:
    """ExperimentConfig from a merged config dict plus CLI overrides."""
    d = {k: v for k, v in cfg.items() if k in _EXPERIMENT_KEYS}
    d.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return ExperimentConfig.from_dict(d)
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"invalid experiment configuration: {exc}") from exc


def build_gap_study(cfg: dict, **overrides) -> GapStudyConfig:
    d = {k: v for k, v in cfg.items() if k in _GAP_KEYS}
    d.update({k: v for k, v in overrides.items() if v is not None})
    if "sample_sizes" in d:
        d["sample_sizes"] = tuple(int(v) for v in d["sample_sizes"])
    try:
        return GapStudyConfig(**d)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid gap-study configuration: {exc}") from exc


def build_bound_inputs(cfg: dict, **overrides) -> BoundInputs:
    d = dict(cfg)
    d.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return BoundInputs(
            n_frequencies=int(d["n_frequencies"]),
            xi=int(d["xi"]),
            sup_bound=float(d["sup_bound"]),
            coeff_bound=float(d["coeff_bound"]),
            loss_bound=float(d["loss_bound"]),
            lipschitz=float(d["lipschitz"]),
            n_samples=int(d["n_samples"]),
            delta=float(d["delta"]),
        )
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"invalid bound inputs: {exc}") from exc
