"""JSON schemas and (de)serialization for configs and design results.

All complex numbers are stored as {"re": ..., "im": ...}; files carry a
schema_version and readers refuse newer major versions. No timestamps are
written, so identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np
from jsonschema import Draft202012Validator

from . import __version__
from .circuit import DEFAULT_M_MAX, FrequencyLattice, UNITARITY_TOL
from .errors import ConfigError
from .gaussian import DEFAULT_R_MAX
from .optimizer import DesignResult, DesignSpace, EvaluatedDesign, PsoConfig

SCHEMA_VERSION = 1

_LATTICE_SCHEMA = {
    "type": "object",
    "required": ["n_modes", "passband", "center_index"],
    "properties": {
        "n_modes": {"type": "integer", "minimum": 1},
        "passband": {"type": "integer", "minimum": 1},
        "center_index": {"type": "integer", "minimum": 0},
    },
}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["lattice", "n_components", "n_squeezed", "target"],
    "properties": {
        "schema_version": {"type": "integer"},
        "lattice": _LATTICE_SCHEMA,
        "n_components": {"type": "integer", "minimum": 1},
        "n_squeezed": {"type": "integer", "minimum": 1, "not": {"multipleOf": 2}},
        "n_s": {"type": "integer", "minimum": 0},
        "n_cutoff": {"type": "integer", "minimum": 0},
        "m_max": {"type": "number", "exclusiveMinimum": 0},
        "r_max": {"type": "number", "exclusiveMinimum": 0},
        "target": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["even_cat"]},
                "alpha": {"type": "number"},
            },
        },
        "pso": {
            "type": "object",
            "properties": {
                "swarm_size": {"type": "integer", "minimum": 1},
                "iterations": {"type": "integer", "minimum": 1},
                "inertia": {"type": "number"},
                "cognitive": {"type": "number"},
                "social": {"type": "number"},
            },
        },
        "tolerances": {
            "type": "object",
            "properties": {"unitarity": {"type": "number", "exclusiveMinimum": 0}},
        },
        "seed": {"type": "integer", "minimum": 0},
    },
}


def complex_to_json(z: complex) -> dict:
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


def complex_from_json(obj: dict) -> complex:
    return complex(obj["re"], obj["im"])


def check_schema_version(doc: dict, what: str) -> None:
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version > SCHEMA_VERSION:
        raise ConfigError(
            f"{what} has schema_version {version}, newest supported is {SCHEMA_VERSION}"
        )


def load_config(path: str) -> dict:
    """Load and schema-validate a run configuration file."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"malformed JSON in {path} at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    errors = sorted(Draft202012Validator(CONFIG_SCHEMA).iter_errors(doc), key=str)
    if errors:
        detail = "; ".join(e.message for e in errors[:3])
        raise ConfigError(f"invalid config {path}: {detail}")
    check_schema_version(doc, "config")
    return doc


def space_from_config(config: dict) -> DesignSpace:
    lat = config["lattice"]
    lattice = FrequencyLattice(
        n_modes=lat["n_modes"],
        passband=lat["passband"],
        center_index=lat["center_index"],
    )
    return DesignSpace(
        n_components=config["n_components"],
        lattice=lattice,
        n_squeezed=config["n_squeezed"],
        n_s=config.get("n_s", 1),
        n_cutoff=config.get("n_cutoff", 40),
        m_max=config.get("m_max", DEFAULT_M_MAX),
        r_max=config.get("r_max", DEFAULT_R_MAX),
    )


def pso_from_config(config: dict, seed: int, threads: int = 1) -> PsoConfig:
    pso = config.get("pso", {})
    return PsoConfig(
        swarm_size=pso.get("swarm_size", 60),
        iterations=pso.get("iterations", 500),
        inertia=pso.get("inertia", 0.729),
        cognitive=pso.get("cognitive", 1.49445),
        social=pso.get("social", 1.49445),
        seed=seed,
        threads=threads,
    )


def unitarity_tol_from_config(config: dict) -> float:
    return config.get("tolerances", {}).get("unitarity", UNITARITY_TOL)


def _design_to_json(design: EvaluatedDesign, space: DesignSpace) -> dict:
    from .herald import normalize_global_phase
    from .optimizer import decode_params

    circuit, r, _ = decode_params(design.params, space)
    doc: dict[str, Any] = {
        "params": [float(x) for x in design.params],
        "circuit": {
            "eoms": [
                {"modulation_index": e.modulation_index, "temporal_phase": e.temporal_phase}
                for e in circuit.eoms
            ],
            "shapers": [{"phases": list(s.phases)} for s in circuit.shapers],
        },
        "squeezing": [float(x) for x in r.r],
        "cost": design.cost,
    }
    if design.state is not None:
        coeffs = normalize_global_phase(design.state.coefficients)
        doc["state"] = {
            "coefficients": [complex_to_json(z) for z in coeffs],
            "probability": design.state.probability,
            "fidelity": design.state.fidelity,
            "cost": design.state.cost,
        }
    return doc


def result_to_json(result: DesignResult, space: DesignSpace, config: dict, tables) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "seed": result.seed,
        "config": config,
        "best_by_cost": _design_to_json(result.best_by_cost, space),
        "best_by_fidelity": (
            _design_to_json(result.best_by_fidelity, space)
            if result.best_by_fidelity is not None
            else None
        ),
        "trace": [float(x) for x in result.trace],
        "evaluations": result.evaluations,
        "tables": {
            "kappa_per_nk": [t.kappa for t in tables.tables],
            "total_rows": int(sum(t.kappa for t in tables.tables)),
        },
    }
    return doc


def dump_json(doc: dict, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_result(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"result file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"malformed JSON in {path} at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    check_schema_version(doc, "result file")
    if "config" not in doc or "best_by_cost" not in doc:
        raise ConfigError(f"{path} is not a design result file")
    return doc
