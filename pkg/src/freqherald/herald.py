"""Heralded-state assembly: probabilities, Fock coefficients, fidelity, cost.

Detection of n_s photons in each ancilla bin (and vacuum elsewhere) projects
the undetected center bin onto a pure state whose unnormalized amplitudes are

    a_{n_K} = I_n / prod_i sqrt(n_i! 2^{n_i} cosh r_i),

with I_n the Gaussian moment from the loop hafnian. The success probability
is P = sum |a|^2 and the normalized coefficients c = a / sqrt(P).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import HeraldImpossibleError, InvalidArgumentsError
from .gaussian import SqueezingVector
from .hafnian import (
    HafnianTables,
    PhotonPattern,
    herald_pattern,
    moment_integral,
    precompute_tables,
)

DEFAULT_P_FLOOR = 1e-12
DEFAULT_N_CUTOFF = 40
FIDELITY_CLAMP = 1e-16
PHASE_SUPPORT_FLOOR = 1e-6


@dataclass(frozen=True)
class TargetState:
    """Fock coefficients of the design target, possibly truncated."""

    coefficients: np.ndarray
    label: str
    parameters: dict

    @property
    def truncation_error(self) -> float:
        return float(1.0 - np.sum(np.abs(self.coefficients) ** 2))


@dataclass(frozen=True)
class HeraldedState:
    """Normalized Fock coefficients of the undetected bin plus run metrics."""

    coefficients: np.ndarray
    probability: float
    fidelity: float | None
    cost: float | None
    n_s: int
    n_squeezed: int
    center_index: int | None

    @property
    def n_cutoff(self) -> int:
        return self.coefficients.size - 1

    def with_metrics(self, fidelity: float, cost: float) -> "HeraldedState":
        return HeraldedState(
            coefficients=self.coefficients,
            probability=self.probability,
            fidelity=fidelity,
            cost=cost,
            n_s=self.n_s,
            n_squeezed=self.n_squeezed,
            center_index=self.center_index,
        )


def pattern_probability(
    sigma: np.ndarray,
    r: SqueezingVector,
    pattern: PhotonPattern,
    tables=None,
) -> float:
    """Probability of one full-length PNR pattern: |I|^2 / prod(n! 2^n cosh r)."""
    if pattern.n_modes != r.n_modes:
        raise InvalidArgumentsError("pattern length must match the number of modes")
    moment = moment_integral(sigma, pattern, tables)
    denom = float(np.prod(np.cosh(r.r)))
    for n in pattern.counts:
        denom *= math.factorial(n) * 2**n
    return float(abs(moment) ** 2 / denom)


def heralded_coefficients(
    sigma_center: np.ndarray,
    r: SqueezingVector,
    n_s: int,
    n_squeezed: int,
    n_cutoff: int,
    tables: HafnianTables | None = None,
    center_index: int | None = None,
    p_floor: float = DEFAULT_P_FLOOR,
) -> HeraldedState:
    """Heralded Fock coefficients and success probability of the center bin.

    ``sigma_center`` is the N_s x N_s center block of sigma; ``r`` is the
    full-lattice squeezing vector (its cosh product covers all modes; the
    unsqueezed ones contribute factors of one).
    """
    if sigma_center.shape != (n_squeezed, n_squeezed):
        raise InvalidArgumentsError(
            f"sigma center block must be {n_squeezed} x {n_squeezed}"
        )
    if tables is None:
        tables = precompute_tables(n_s, n_squeezed, n_cutoff)
    if (tables.n_s, tables.n_squeezed) != (n_s, n_squeezed) or tables.n_cutoff < n_cutoff:
        raise InvalidArgumentsError("tables do not cover the requested pattern family")

    cosh_prod = float(np.prod(np.cosh(r.r)))
    ancilla = (math.factorial(n_s) * 2**n_s) ** (n_squeezed - 1)
    amps = np.zeros(n_cutoff + 1, dtype=complex)
    for n_k in range(n_cutoff + 1):
        pattern = herald_pattern(n_s, n_squeezed, n_k)
        moment = moment_integral(sigma_center, pattern, tables.table_for(n_k))
        if moment == 0:
            continue
        denom = math.sqrt(math.factorial(n_k) * 2**n_k * ancilla * cosh_prod)
        amps[n_k] = moment / denom
    probability = float(np.sum(np.abs(amps) ** 2))
    if probability <= p_floor:
        raise HeraldImpossibleError(
            f"herald probability {probability:.3e} at or below floor {p_floor:.3e}"
        )
    return HeraldedState(
        coefficients=amps / math.sqrt(probability),
        probability=probability,
        fidelity=None,
        cost=None,
        n_s=n_s,
        n_squeezed=n_squeezed,
        center_index=center_index,
    )


def convergence_check(
    state: HeraldedState,
    n_c_probe: int,
    sigma_center: np.ndarray,
    r: SqueezingVector,
    tables_probe: HafnianTables | None = None,
    tol: float = 1e-9,
) -> bool:
    """True iff raising the cutoff to ``n_c_probe`` leaves P unchanged within tol."""
    if n_c_probe <= state.n_cutoff:
        raise InvalidArgumentsError("probe cutoff must exceed the state's cutoff")
    probe = heralded_coefficients(
        sigma_center,
        r,
        state.n_s,
        state.n_squeezed,
        n_c_probe,
        tables=tables_probe,
        center_index=state.center_index,
    )
    return abs(probe.probability - state.probability) < tol


def fidelity(c: np.ndarray, tau: np.ndarray) -> float:
    """|<target|state>|^2, invariant under a global phase of either vector."""
    c = np.asarray(c)
    tau = np.asarray(tau)
    if c.shape != tau.shape:
        raise InvalidArgumentsError("coefficient vectors must have equal length")
    return float(abs(np.vdot(tau, c)) ** 2)


def cost(probability: float, fid: float) -> float:
    """Objective C = P log10(1 - F), clamped at 1 - F = 1e-16 to stay finite."""
    return float(probability * math.log10(max(1.0 - fid, FIDELITY_CLAMP)))


def cat_target(alpha: complex, n_cutoff: int = DEFAULT_N_CUTOFF) -> TargetState:
    """Even cat (|alpha> + |-alpha>) / sqrt(2(1 + e^{-2|alpha|^2})), truncated.

    The truncated vector keeps the analytic normalization, so its norm
    deficit equals the truncation error.
    """
    if n_cutoff < 0:
        raise InvalidArgumentsError("cutoff must be nonnegative")
    n = np.arange(n_cutoff + 1)
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1, n_cutoff + 1)))))
    amp = np.zeros(n_cutoff + 1, dtype=complex)
    even = n % 2 == 0
    # tau_n = 2 e^{-|a|^2/2} a^n / sqrt(n!) / sqrt(2(1+e^{-2|a|^2})) on even n
    alpha = complex(alpha)
    if alpha == 0:
        amp[0] = 1.0
    else:
        log_mag = -0.5 * abs(alpha) ** 2 + n * np.log(abs(alpha)) - 0.5 * log_fact
        phase = np.exp(1j * n * np.angle(alpha))
        amp[even] = 2.0 * np.exp(log_mag[even]) * phase[even]
        amp /= math.sqrt(2.0 * (1.0 + math.exp(-2.0 * abs(alpha) ** 2)))
    return TargetState(
        coefficients=amp, label="even_cat", parameters={"alpha": alpha}
    )


def quadrature_wavefunction(c: np.ndarray, q_grid: np.ndarray) -> np.ndarray:
    """psi(q) = sum_n c_n (2^n n! sqrt(pi))^{-1/2} H_n(q) e^{-q^2/2}.

    Uses the stable recurrence on the normalized Hermite functions
    psi_n = sqrt(2/n) q psi_{n-1} - sqrt((n-1)/n) psi_{n-2}.
    """
    c = np.asarray(c, dtype=complex)
    q = np.asarray(q_grid, dtype=float)
    psi_prev = np.pi ** (-0.25) * np.exp(-0.5 * q**2)
    out = c[0] * psi_prev
    psi_prev2 = np.zeros_like(psi_prev)
    for n in range(1, c.size):
        psi = np.sqrt(2.0 / n) * q * psi_prev - np.sqrt((n - 1) / n) * psi_prev2
        out = out + c[n] * psi
        psi_prev2, psi_prev = psi_prev, psi
    return out


def phase_flatness(c: np.ndarray, support_floor: float = PHASE_SUPPORT_FLOOR) -> float:
    """Max deviation (radians) of arg(c_n) from a best-fit constant phase.

    Only coefficients with magnitude above ``support_floor`` participate.
    """
    c = np.asarray(c, dtype=complex)
    mask = np.abs(c) > support_floor
    if not np.any(mask):
        return 0.0
    sel = c[mask]
    # magnitude-weighted mean direction as the reference phase
    ref = np.angle(np.sum(sel * np.abs(sel)))
    dev = np.angle(sel * np.exp(-1j * ref))
    return float(np.max(np.abs(dev)))


def normalize_global_phase(c: np.ndarray) -> np.ndarray:
    """Rotate so the largest-magnitude coefficient is real positive."""
    c = np.asarray(c, dtype=complex)
    k = int(np.argmax(np.abs(c)))
    if c[k] == 0:
        return c.copy()
    return c * np.exp(-1j * np.angle(c[k]))
