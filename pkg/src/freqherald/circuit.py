"""Frequency-bin circuit synthesis from electro-optic modulators and pulse shapers.

An EOM applies a time-periodic phase, which in the frequency basis is a
circulant mixing matrix; a pulse shaper applies an independent phase per bin
and doubles as a hard bandpass filter. Alternating these layers builds the
full N x N mode transformation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidCircuitError, InvalidDimensionError

DEFAULT_M_MAX = 5.0
UNITARITY_TOL = 1e-6

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class FrequencyLattice:
    """Geometry of the simulated frequency-bin lattice.

    Attributes
    ----------
    n_modes : total number of simulated bins N.
    passband : number of central bins transmitted by each pulse shaper.
    center_index : index of the undetected output bin; must sit inside the
        passband window.
    """

    n_modes: int
    passband: int
    center_index: int

    def __post_init__(self):
        if self.n_modes < 1:
            raise InvalidDimensionError("n_modes must be positive")
        if not 0 < self.passband <= self.n_modes:
            raise InvalidDimensionError(
                f"passband must be in (0, {self.n_modes}], got {self.passband}"
            )
        if not 0 <= self.center_index < self.n_modes:
            raise InvalidDimensionError(
                f"center_index {self.center_index} outside lattice"
            )
        lo, hi = self.passband_window
        if not lo <= self.center_index < hi:
            raise InvalidDimensionError(
                f"center_index {self.center_index} outside passband window [{lo}, {hi})"
            )

    @property
    def passband_window(self) -> tuple[int, int]:
        """Half-open index range [lo, hi) of the transmitted central bins."""
        lo = (self.n_modes - self.passband) // 2
        return lo, lo + self.passband

    @property
    def passband_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_modes, dtype=bool)
        lo, hi = self.passband_window
        mask[lo:hi] = True
        return mask


@dataclass(frozen=True)
class EomSetting:
    """Single-sinewave EOM drive: phase(t_n) = m * sin(2*pi*n/N + theta)."""

    modulation_index: float
    temporal_phase: float = 0.0

    def __post_init__(self):
        if self.modulation_index < 0:
            raise InvalidCircuitError("modulation_index must be nonnegative")

    def validate_bound(self, m_max: float = DEFAULT_M_MAX) -> None:
        if self.modulation_index > m_max:
            raise InvalidCircuitError(
                f"modulation_index {self.modulation_index} exceeds m_max={m_max}"
            )


@dataclass(frozen=True)
class ShaperSetting:
    """Per-bin phases applied on the passband; blocked bins get amplitude zero."""

    phases: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))


@dataclass(frozen=True)
class QfpCircuit:
    """Alternating EOM / shaper stack, bookended by EOMs.

    Layer order: ``eoms[0], shapers[0], eoms[1], ..., eoms[-1]``, with index 0
    the first layer the light encounters.
    """

    lattice: FrequencyLattice
    eoms: tuple[EomSetting, ...]
    shapers: tuple[ShaperSetting, ...]

    def __post_init__(self):
        object.__setattr__(self, "eoms", tuple(self.eoms))
        object.__setattr__(self, "shapers", tuple(self.shapers))
        if len(self.eoms) != len(self.shapers) + 1:
            raise InvalidCircuitError(
                "layers must alternate EOM, shaper, ..., EOM "
                f"(got {len(self.eoms)} EOMs, {len(self.shapers)} shapers)"
            )
        for shaper in self.shapers:
            if len(shaper.phases) != self.lattice.passband:
                raise InvalidCircuitError(
                    f"shaper has {len(shaper.phases)} phases, "
                    f"passband is {self.lattice.passband}"
                )

    @property
    def n_components(self) -> int:
        return len(self.eoms) + len(self.shapers)


@dataclass(frozen=True)
class UnitaryMatrix:
    """Composed circuit matrix together with its unitarity leakage."""

    entries: np.ndarray
    leakage: float


def dft_matrix(n: int) -> np.ndarray:
    """Unitary DFT with entries exp(2*pi*i*j*k/n) / sqrt(n)."""
    if n < 1:
        raise InvalidDimensionError("DFT dimension must be positive")
    idx = np.arange(n)
    return np.exp(2j * np.pi * np.outer(idx, idx) / n) / np.sqrt(n)


def eom_layer(setting: EomSetting, lattice: FrequencyLattice) -> np.ndarray:
    """Frequency-basis matrix of a sinewave-driven EOM: F diag(e^{i phi}) F^dag."""
    n = lattice.n_modes
    t = np.arange(n)
    phase = setting.modulation_index * np.sin(TWO_PI * t / n + setting.temporal_phase)
    f = dft_matrix(n)
    return (f * np.exp(1j * phase)) @ f.conj().T


def shaper_layer(setting: ShaperSetting, lattice: FrequencyLattice) -> np.ndarray:
    """Diagonal shaper matrix: e^{i phi} on passband bins, 0 on blocked bins."""
    diag = np.zeros(lattice.n_modes, dtype=complex)
    lo, hi = lattice.passband_window
    diag[lo:hi] = np.exp(1j * np.asarray(setting.phases))
    return np.diag(diag)


def leakage_check(u: np.ndarray) -> float:
    """Max absolute deviation from unitarity over U^dag U - I and U U^dag - I."""
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise InvalidDimensionError("leakage_check requires a square matrix")
    eye = np.eye(u.shape[0])
    d1 = np.abs(u.conj().T @ u - eye).max()
    d2 = np.abs(u @ u.conj().T - eye).max()
    return float(max(d1, d2))


def support_leakage(u: np.ndarray, support: np.ndarray) -> float:
    """Deviation from orthonormality of the columns feeding the occupied bins.

    With a bandpass filter the full matrix is never unitary (blocked bins are
    annihilated), but only the columns of the populated input bins enter the
    downstream Gaussian algebra. A design is physical when those columns are
    orthonormal: no amplitude launched from an occupied bin is lost to a
    blocked bin.
    """
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise InvalidDimensionError("support_leakage requires a square matrix")
    cols = u[:, np.asarray(support, dtype=int)]
    if cols.shape[1] == 0:
        return 0.0
    gram = cols.conj().T @ cols
    return float(np.abs(gram - np.eye(cols.shape[1])).max())


def circuit_layers(circuit: QfpCircuit) -> list[np.ndarray]:
    """Layer matrices in the order the light encounters them."""
    layers: list[np.ndarray] = []
    for i, eom in enumerate(circuit.eoms):
        layers.append(eom_layer(eom, circuit.lattice))
        if i < len(circuit.shapers):
            layers.append(shaper_layer(circuit.shapers[i], circuit.lattice))
    return layers


def compose_unitary(circuit: QfpCircuit) -> UnitaryMatrix:
    """Product of all layers (index 0 acts first) with its leakage.

    The matrix is returned even when the leakage exceeds tolerance; the
    caller decides whether to accept the design.
    """
    n = circuit.lattice.n_modes
    u = np.eye(n, dtype=complex)
    for layer in circuit_layers(circuit):
        if layer.shape != (n, n):
            raise InvalidCircuitError(
                f"layer shape {layer.shape} does not match lattice size {n}"
            )
        u = layer @ u
    return UnitaryMatrix(entries=u, leakage=leakage_check(u))
