"""Experiment configuration: JSON schema, defaults, validation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

SCENARIO_NAMES = (
    "definetti_roundtrip",
    "decomposition_roundtrip",
    "bound_sweep",
    "swallow_uniformity",
    "inheritance",
    "exchangeability_of_conditioning",
)

_PREDICATE_KINDS = (
    "count_equals",
    "count_at_least",
    "single_pattern",
    "first_symbol_equals",
)

_PARAM_SCHEMAS = {
    "definetti_roundtrip": {
        "type": "object",
        "additionalProperties": False,
        "properties": {
            "source": {"enum": ["polya", "urn_mixture", "triangle"]},
            "length": {"type": "integer", "minimum": 1, "maximum": 8},
            "counts": {
                "type": "array",
                "items": {"type": "integer", "minimum": 0},
                "minItems": 2,
                "maxItems": 2,
            },
            "eta_weights": {
                "type": "array",
                "items": {"type": "number", "minimum": 0},
                "minItems": 2,
            },
            "quantile": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        },
    },
    "decomposition_roundtrip": {
        "type": "object",
        "additionalProperties": False,
        "properties": {
            "m": {"type": "integer", "minimum": 2, "maximum": 4},
            "n": {"type": "integer", "minimum": 1, "maximum": 6},
            "num_dists": {"type": "integer", "minimum": 1},
            "quantile": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
            "reconstruction_tol": {"type": "number", "exclusiveMinimum": 0},
        },
    },
    "bound_sweep": {
        "type": "object",
        "additionalProperties": False,
        "properties": {"max_N": {"type": "integer", "minimum": 1, "maximum": 16}},
    },
    "swallow_uniformity": {
        "type": "object",
        "additionalProperties": False,
        "properties": {
            "n": {"type": "integer", "minimum": 2, "maximum": 7},
            "quantile": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
            "couplings": {
                "type": "array",
                "items": {"enum": ["identity", "data_sort", "skewed"]},
                "minItems": 1,
            },
        },
    },
    "inheritance": {
        "type": "object",
        "additionalProperties": False,
        "properties": {
            "model": {"enum": ["er", "geometric"]},
            "p": {"type": "number", "minimum": 0, "maximum": 1},
            "radius": {"type": "number", "minimum": 0},
            "radii": {"type": "array", "items": {"type": "number", "minimum": 0}},
            "n_grid": {
                "type": "array",
                "items": {"type": "integer", "minimum": 2},
                "minItems": 1,
            },
            "conditions": {"type": "array", "items": {"type": "string"}, "minItems": 1},
            "max_tries": {"type": "integer", "minimum": 1},
            "assert_trend": {"type": "boolean"},
            "trend_metric": {"enum": ["kappa_eq_lambda_eq_delta", "connected"]},
        },
    },
    "exchangeability_of_conditioning": {
        "type": "object",
        "additionalProperties": False,
        "properties": {
            "n": {"type": "integer", "minimum": 1, "maximum": 6},
            "p": {"type": "number", "minimum": 0, "maximum": 1},
            "tol": {"type": "number", "exclusiveMinimum": 0},
            "predicates": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind", "expect_exchangeable"],
                    "properties": {
                        "kind": {"enum": list(_PREDICATE_KINDS)},
                        "value": {"type": ["integer", "string"]},
                        "expect_exchangeable": {"type": "boolean"},
                    },
                },
            },
        },
    },
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "exchlab experiment configuration",
    "type": "object",
    "additionalProperties": False,
    "required": ["scenario", "seed"],
    "properties": {
        "scenario": {"enum": list(SCENARIO_NAMES)},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "replicas": {"type": "integer", "minimum": 1},
        "format": {"enum": ["csv", "jsonl"]},
        "out": {"type": "string"},
        "params": {"type": "object"},
    },
    "$defs": {"params_by_scenario": _PARAM_SCHEMAS},
}

_PARAM_DEFAULTS = {
    "definetti_roundtrip": {
        "source": "polya",
        "length": 4,
        "counts": [1, 1],
        "quantile": 0.99,
    },
    "decomposition_roundtrip": {
        "m": 2,
        "n": 3,
        "num_dists": 20,
        "quantile": 0.99,
        "reconstruction_tol": 1e-12,
    },
    "bound_sweep": {"max_N": 12},
    "swallow_uniformity": {
        "n": 4,
        "quantile": 0.999,
        "couplings": ["identity", "data_sort", "skewed"],
    },
    "inheritance": {
        "model": "er",
        "p": 0.5,
        "n_grid": [10, 20, 40],
        "conditions": ["none", "min_degree_at_least:1"],
        "max_tries": 1000,
        "assert_trend": True,
        "trend_metric": "kappa_eq_lambda_eq_delta",
    },
    "exchangeability_of_conditioning": {
        "n": 4,
        "p": 0.5,
        "tol": 1e-12,
        "predicates": [
            {"kind": "count_equals", "value": 2, "expect_exchangeable": True},
            {"kind": "first_symbol_equals", "value": 1, "expect_exchangeable": False},
        ],
    },
}

DEFAULT_REPLICAS = 1000


class ConfigError(Exception):
    """Invalid experiment configuration (maps to exit code 2)."""


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    seed: int
    replicas: int
    params: dict
    out: str | None = None
    format: str = "csv"

    def echo(self) -> dict:
        """Normalized configuration, echoed into every report header."""
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "replicas": self.replicas,
            "params": self.params,
        }


def load_config(path) -> ExperimentConfig:
    """Read, schema-check and normalize a JSON config file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}") from err
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"config file {path} is not valid JSON: {err}") from err
    return parse_config(raw)


def parse_config(raw: dict) -> ExperimentConfig:
    _validate(raw, CONFIG_SCHEMA, prefix="")
    scenario = raw["scenario"]
    params = dict(_PARAM_DEFAULTS[scenario])
    params.update(raw.get("params", {}))
    _validate(params, _PARAM_SCHEMAS[scenario], prefix="params.")
    _check_semantics(scenario, params)
    return ExperimentConfig(
        scenario=scenario,
        seed=raw["seed"],
        replicas=raw.get("replicas", DEFAULT_REPLICAS),
        params=params,
        out=raw.get("out"),
        format=raw.get("format", "csv"),
    )


def _validate(instance, schema, prefix: str) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(instance), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = prefix + ".".join(str(p) for p in err.absolute_path)
        raise ConfigError(f"config field {where or '<root>'}: {err.message}")


def _check_semantics(scenario: str, params: dict) -> None:
    if scenario == "definetti_roundtrip":
        n = params["length"]
        if params["source"] == "polya" and sum(params["counts"]) < 1:
            raise ConfigError("config field params.counts: need at least one ball")
        if params["source"] == "urn_mixture":
            weights = params.get("eta_weights")
            if weights is None:
                params["eta_weights"] = [1.0 / (n + 1)] * (n + 1)
            elif len(weights) != n + 1:
                raise ConfigError(
                    f"config field params.eta_weights: need {n + 1} weights for length {n}"
                )
            elif sum(weights) <= 0:
                raise ConfigError("config field params.eta_weights: total weight must be positive")
    elif scenario == "inheritance":
        if params["model"] == "geometric":
            if "radius" not in params and "radii" not in params:
                raise ConfigError(
                    "config field params.radius: geometric model needs radius or radii"
                )
            if "radii" in params and len(params["radii"]) != len(params["n_grid"]):
                raise ConfigError(
                    "config field params.radii: need one radius per n_grid entry"
                )
    elif scenario == "exchangeability_of_conditioning":
        n = params["n"]
        for i, pred in enumerate(params["predicates"]):
            kind = pred["kind"]
            value = pred.get("value")
            if kind in ("count_equals", "count_at_least", "first_symbol_equals"):
                if not isinstance(value, int):
                    raise ConfigError(
                        f"config field params.predicates.{i}.value: {kind} needs an integer"
                    )
            elif kind == "single_pattern":
                if not isinstance(value, str) or len(value) != n or any(
                    c not in "01" for c in value
                ):
                    raise ConfigError(
                        f"config field params.predicates.{i}.value: single_pattern needs "
                        f"a length-{n} binary digit string"
                    )
