"""Readers for the design-tool output files (result JSON, report bundles, CSVs).

This package never recomputes any physics: everything plotted is read verbatim
from the files the design CLI writes.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SUPPORTED_SCHEMA = 1


class InputError(Exception):
    """Unusable or missing input file."""


@dataclass(frozen=True)
class StateRecord:
    """One heralded state pulled out of a result file."""

    coefficients: np.ndarray
    probability: float
    fidelity: float | None
    alpha: float | None
    source: str


@dataclass(frozen=True)
class SweepRecord:
    """One point of an F/P-versus-alpha sweep."""

    alpha: float
    n_components: int
    n_squeezed: int
    fidelity: float
    probability: float
    source: str


@dataclass(frozen=True)
class WavefunctionSeries:
    q: np.ndarray
    re: np.ndarray
    im: np.ndarray
    abs2: np.ndarray


@dataclass(frozen=True)
class FockSeries:
    n: np.ndarray
    prob: np.ndarray


def _load_json(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"input file not found: {path}")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc.msg} (line {exc.lineno})") from exc
    version = doc.get("schema_version", SUPPORTED_SCHEMA)
    if version > SUPPORTED_SCHEMA:
        raise InputError(
            f"{path} uses schema_version {version}; this tool reads up to {SUPPORTED_SCHEMA}"
        )
    return doc


def load_state(path: str, which: str = "best_by_cost") -> StateRecord:
    doc = _load_json(path)
    design = doc.get(which)
    if design is None or "state" not in design:
        raise InputError(f"{path} has no heralded state under {which!r}")
    state = design["state"]
    coeffs = np.array([z["re"] + 1j * z["im"] for z in state["coefficients"]])
    alpha = doc.get("config", {}).get("target", {}).get("alpha")
    return StateRecord(
        coefficients=coeffs,
        probability=state["probability"],
        fidelity=state.get("fidelity"),
        alpha=alpha,
        source=str(path),
    )


def load_bundle(path: str) -> list[SweepRecord]:
    doc = _load_json(path)
    if "records" not in doc:
        raise InputError(f"{path} is not a report bundle (no 'records' key)")
    out = []
    for rec in doc["records"]:
        if rec.get("selection") != "best_by_cost":
            continue
        out.append(
            SweepRecord(
                alpha=rec["alpha"],
                n_components=rec["n_components"],
                n_squeezed=rec["n_squeezed"],
                fidelity=rec["fidelity"],
                probability=rec["probability"],
                source=rec.get("source", str(path)),
            )
        )
    return out


def _read_csv(path: str, columns: tuple[str, ...]) -> dict[str, np.ndarray]:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"input file not found: {path}")
    with open(p, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != columns:
            raise InputError(
                f"{path} has columns {reader.fieldnames}, expected {list(columns)}"
            )
        rows = list(reader)
    return {col: np.array([float(r[col]) for r in rows]) for col in columns}


def load_wavefunction_csv(path: str) -> WavefunctionSeries:
    data = _read_csv(path, ("q", "re_psi", "im_psi", "abs2_psi"))
    return WavefunctionSeries(
        q=data["q"], re=data["re_psi"], im=data["im_psi"], abs2=data["abs2_psi"]
    )


def load_fock_csv(path: str) -> FockSeries:
    data = _read_csv(path, ("n", "prob"))
    return FockSeries(n=data["n"].astype(int), prob=data["prob"])
