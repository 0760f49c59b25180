"""Brute-force Fock-basis simulator for validating the hafnian pipeline.

Keeps a dense amplitude tensor over a few modes, decomposes the mode unitary
into two-mode Givens rotations, applies each rotation with exact binomial
beamsplitter amplitudes (photon number conserved sector by sector), and
heralds by slicing the tensor at the detected photon numbers. Correctness
over scale: refuses anything beyond a handful of modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import UNITARITY_TOL, leakage_check
from .errors import (
    HeraldImpossibleError,
    InvalidArgumentsError,
    InvalidDimensionError,
    NonUnitaryInputError,
)
from .gaussian import SqueezingVector
from .herald import DEFAULT_P_FLOOR

MAX_AMPLITUDES = 200_000
TAIL_TOL = 1e-3


@dataclass(frozen=True)
class FockTensor:
    """Dense amplitude tensor indexed by (n_1, ..., n_N), each n_i <= cutoff."""

    amplitudes: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.amplitudes.ndim

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[0] - 1


@dataclass(frozen=True)
class GivensFactor:
    """Two-mode rotation: 2 x 2 unitary acting on the given mode pair."""

    modes: tuple[int, int]
    matrix: np.ndarray


@dataclass(frozen=True)
class ReckFactors:
    """Decomposition U = diag(phases) . rotations[-1] ... rotations[0].

    Rotations are listed in application order (index 0 acts first), with the
    phase layer applied last.
    """

    n_modes: int
    rotations: tuple[GivensFactor, ...]
    phases: np.ndarray

    def recompose(self) -> np.ndarray:
        u = np.eye(self.n_modes, dtype=complex)
        for rot in self.rotations:
            g = np.eye(self.n_modes, dtype=complex)
            (p, q) = rot.modes
            g[np.ix_([p, q], [p, q])] = rot.matrix
            u = g @ u
        return np.diag(self.phases) @ u


def squeezed_vacuum_fock(r: float, cutoff: int) -> np.ndarray:
    """Single-mode squeezed-vacuum amplitudes, even entries only.

    Sign convention (all even amplitudes positive for r > 0) matches the
    q-antisqueezed covariance used by the Gaussian pipeline; the agreement is
    asserted by the cross-validation tests rather than assumed.
    """
    if r < 0:
        raise InvalidArgumentsError("squeezing parameter must be nonnegative")
    amps = np.zeros(cutoff + 1)
    t = math.tanh(r)
    norm = 1.0 / math.sqrt(math.cosh(r))
    for k in range(cutoff // 2 + 1):
        amps[2 * k] = (
            norm * t**k * math.sqrt(math.factorial(2 * k)) / (2**k * math.factorial(k))
        )
    return amps


def product_input_state(
    r: SqueezingVector, cutoff: int, tail_tol: float = TAIL_TOL
) -> FockTensor:
    """Tensor product of per-mode squeezed vacua; guards size and tail mass.

    Photon-number sectors up to the cutoff evolve exactly whatever the tail
    mass, so the guard only rejects inputs where even the compared sectors
    would be meaningless.
    """
    n = r.n_modes
    if (cutoff + 1) ** n > MAX_AMPLITUDES:
        raise InvalidDimensionError(
            f"tensor would hold {(cutoff + 1) ** n} amplitudes, cap is {MAX_AMPLITUDES}"
        )
    amps = np.ones((), dtype=complex)
    for ri in r.r:
        vec = squeezed_vacuum_fock(float(ri), cutoff)
        deficit = 1.0 - float(np.sum(vec**2))
        if deficit > tail_tol:
            raise InvalidArgumentsError(
                f"per-mode tail mass {deficit:.2e} above {tail_tol:.0e}; raise the cutoff"
            )
        amps = np.multiply.outer(amps, vec)
    return FockTensor(amplitudes=amps.astype(complex))


def reck_decompose(u: np.ndarray, tol: float = UNITARITY_TOL) -> ReckFactors:
    """Triangularize a unitary into two-mode Givens rotations plus phases.

    Column rotations eliminate the below-diagonal entries row by row; the
    residue is a diagonal of unit-modulus phases.
    """
    u = np.asarray(u, dtype=complex)
    leak = leakage_check(u)
    if leak > tol:
        raise NonUnitaryInputError(f"leakage {leak:.3e} exceeds tolerance {tol:.3e}")
    n = u.shape[0]
    work = u.copy()
    rotations: list[GivensFactor] = []
    for row in range(n - 1, 0, -1):
        for col in range(row):
            x = work[row, col]
            y = work[row, row]
            nrm = math.hypot(abs(x), abs(y))
            if abs(x) < 1e-15:
                continue
            # right-multiplication zeroing work[row, col]
            g = np.array([[y / nrm, np.conj(x) / nrm], [-x / nrm, np.conj(y) / nrm]])
            work[:, [col, row]] = work[:, [col, row]] @ g
            rotations.append(GivensFactor(modes=(col, row), matrix=g.conj().T))
    phases = np.diag(work).copy()
    return ReckFactors(n_modes=n, rotations=tuple(rotations), phases=phases)


def _two_mode_transfer(u2: np.ndarray, cutoff: int) -> np.ndarray:
    """T[k, l, m, n]: amplitude |m, n> -> |k, l> for the 2 x 2 mode unitary u2.

    Input creation operators map to the columns of u2; sectors with total
    photons above 2*cutoff that would overflow a mode are truncated (such
    sectors are already incomplete in the tensor and never used).
    """
    c = cutoff
    t = np.zeros((c + 1, c + 1, c + 1, c + 1), dtype=complex)
    u00, u01, u10, u11 = u2[0, 0], u2[0, 1], u2[1, 0], u2[1, 1]
    for m in range(c + 1):
        for n in range(c + 1):
            total = m + n
            base = 1.0 / math.sqrt(math.factorial(m) * math.factorial(n))
            for k in range(max(0, total - c), min(c, total) + 1):
                l = total - k
                acc = 0j
                for j in range(max(0, k - n), min(m, k) + 1):
                    # j photons of the first input op go to mode p
                    acc += (
                        math.comb(m, j)
                        * math.comb(n, k - j)
                        * u00**j
                        * u10 ** (m - j)
                        * u01 ** (k - j)
                        * u11 ** (n - k + j)
                    )
                t[k, l, m, n] = (
                    acc * base * math.sqrt(math.factorial(k) * math.factorial(l))
                )
    return t


def apply_circuit_fock(state: FockTensor, factors: ReckFactors) -> FockTensor:
    """Apply each Givens rotation exactly per photon-number sector, then phases."""
    if factors.n_modes != state.n_modes:
        raise InvalidArgumentsError("factor count does not match tensor modes")
    amps = state.amplitudes
    cutoff = state.cutoff
    for rot in factors.rotations:
        p, q = rot.modes
        transfer = _two_mode_transfer(rot.matrix, cutoff)
        amps = np.tensordot(transfer, amps, axes=([2, 3], [p, q]))
        # tensordot puts the new (k, l) axes in front; restore mode order
        amps = np.moveaxis(amps, (0, 1), (p, q))
    n = np.arange(cutoff + 1)
    for mode, phase in enumerate(factors.phases):
        shape = [1] * state.n_modes
        shape[mode] = cutoff + 1
        amps = amps * (phase**n).reshape(shape)
    return FockTensor(amplitudes=amps)


def herald_fock(
    state: FockTensor,
    pattern,
    undetected_index: int,
    p_floor: float = DEFAULT_P_FLOOR,
    n_max: int | None = None,
) -> tuple[np.ndarray, float]:
    """Project the detected modes onto ``pattern`` (normalized slice, P).

    ``pattern`` lists photon counts for every mode except ``undetected_index``
    (in mode order). ``n_max`` optionally truncates the undetected axis before
    normalizing, for comparison at a fixed cutoff.
    """
    counts = list(int(n) for n in pattern)
    if len(counts) != state.n_modes - 1:
        raise InvalidArgumentsError("pattern must cover all detected modes")
    index: list[object] = []
    it = iter(counts)
    for mode in range(state.n_modes):
        if mode == undetected_index:
            index.append(slice(None))
        else:
            c = next(it)
            if not 0 <= c <= state.cutoff:
                raise InvalidArgumentsError(f"detected count {c} outside cutoff")
            index.append(c)
    slice_vec = state.amplitudes[tuple(index)]
    if n_max is not None:
        slice_vec = slice_vec[: n_max + 1]
    probability = float(np.sum(np.abs(slice_vec) ** 2))
    if probability <= p_floor:
        raise HeraldImpossibleError(
            f"herald probability {probability:.3e} at or below floor {p_floor:.3e}"
        )
    return slice_vec / math.sqrt(probability), probability


def oracle_heralded_state(
    u: np.ndarray,
    r: SqueezingVector,
    n_s: int,
    n_squeezed: int,
    center_index: int,
    cutoff: int,
    n_cutoff: int,
) -> tuple[np.ndarray, float]:
    """Full oracle pipeline: input product state -> circuit -> herald.

    Returns the heralded coefficients (length n_cutoff + 1) and P restricted
    to the same cutoff as the hafnian path.
    """
    state = product_input_state(r, cutoff)
    factors = reck_decompose(u)
    out = apply_circuit_fock(state, factors)
    half = n_squeezed // 2
    pattern = []
    for mode in range(r.n_modes):
        if mode == center_index:
            continue
        pattern.append(n_s if abs(mode - center_index) <= half else 0)
    coeffs, probability = herald_fock(out, pattern, center_index, n_max=n_cutoff)
    return coeffs, probability
