"""Particle-swarm search over circuit, shaper, and squeezing parameters.

Minimizes C = P log10(1 - F) for a fixed target state. Invalid designs
(leakage above tolerance or an impossible herald) receive a sentinel cost of
+1 so they can never beat a valid design. Runs are deterministic for a fixed
seed: each particle draws from its own stream spawned from the master seed,
and ties break toward the lower particle index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import (
    DEFAULT_M_MAX,
    EomSetting,
    FrequencyLattice,
    QfpCircuit,
    ShaperSetting,
    UNITARITY_TOL,
    compose_unitary,
    support_leakage,
)
from .errors import ConfigError, HeraldImpossibleError, InvalidArgumentsError
from .gaussian import (
    DEFAULT_R_MAX,
    SqueezingVector,
    SymplecticOrthogonal,
    gamma_inverse_blocks,
    h_inverse,
    sigma_from_h_inverse,
)
from .hafnian import HafnianTables, precompute_tables
from .herald import HeraldedState, TargetState, cost, fidelity, heralded_coefficients

SENTINEL_COST = 1.0
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DesignSpace:
    """Search-space geometry and per-parameter bounds."""

    n_components: int
    lattice: FrequencyLattice
    n_squeezed: int
    n_s: int = 1
    n_cutoff: int = 40
    m_max: float = DEFAULT_M_MAX
    r_max: float = DEFAULT_R_MAX

    def __post_init__(self):
        if self.n_components < 1 or self.n_components % 2 == 0:
            raise ConfigError("component count Q must be odd and positive")
        if self.n_squeezed < 1 or self.n_squeezed % 2 == 0:
            raise ConfigError("N_s must be odd and positive")
        half = self.n_squeezed // 2
        k = self.lattice.center_index
        if k - half < 0 or k + half >= self.lattice.n_modes:
            raise ConfigError("squeezed bins do not fit around the center index")

    @property
    def n_eoms(self) -> int:
        return (self.n_components + 1) // 2

    @property
    def n_shapers(self) -> int:
        return (self.n_components - 1) // 2

    @property
    def n_params(self) -> int:
        return (
            2 * self.n_eoms
            + self.n_shapers * self.lattice.passband
            + self.n_squeezed
        )

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.zeros(self.n_params)
        hi = np.empty(self.n_params)
        i = 0
        for _ in range(self.n_eoms):
            hi[i] = self.m_max
            hi[i + 1] = TWO_PI
            i += 2
        for _ in range(self.n_shapers):
            hi[i : i + self.lattice.passband] = TWO_PI
            i += self.lattice.passband
        hi[i:] = self.r_max
        return lo, hi


@dataclass(frozen=True)
class PsoConfig:
    swarm_size: int = 60
    iterations: int = 500
    inertia: float = 0.729
    cognitive: float = 1.49445
    social: float = 1.49445
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.swarm_size < 1:
            raise ConfigError("swarm must contain at least one particle")
        if self.iterations < 1:
            raise ConfigError("iteration count must be positive")
        if self.threads < 1:
            raise ConfigError("thread count must be positive")


@dataclass(frozen=True)
class EvaluatedDesign:
    params: np.ndarray
    state: HeraldedState | None
    cost: float

    @property
    def valid(self) -> bool:
        return self.state is not None


@dataclass(frozen=True)
class DesignResult:
    best_by_cost: EvaluatedDesign
    best_by_fidelity: EvaluatedDesign | None
    trace: np.ndarray
    seed: int
    evaluations: int


def decode_params(
    vector: np.ndarray, space: DesignSpace
) -> tuple[QfpCircuit, SqueezingVector, bool]:
    """Parameter vector -> (circuit, squeezing, clamped flag).

    Out-of-bounds entries are clamped to the box; the flag records whether
    clamping happened.
    """
    vector = np.asarray(vector, dtype=float)
    if vector.size != space.n_params:
        raise InvalidArgumentsError(
            f"expected {space.n_params} parameters, got {vector.size}"
        )
    lo, hi = space.bounds()
    clipped = np.clip(vector, lo, hi)
    clamped = bool(np.any(clipped != vector))
    i = 0
    eoms = []
    for _ in range(space.n_eoms):
        eoms.append(EomSetting(modulation_index=clipped[i], temporal_phase=clipped[i + 1]))
        i += 2
    shapers = []
    for _ in range(space.n_shapers):
        shapers.append(ShaperSetting(phases=tuple(clipped[i : i + space.lattice.passband])))
        i += space.lattice.passband
    circuit = QfpCircuit(lattice=space.lattice, eoms=tuple(eoms), shapers=tuple(shapers))
    r = SqueezingVector.centered(
        space.lattice.n_modes,
        space.lattice.center_index,
        clipped[i:],
        r_max=space.r_max,
    )
    return circuit, r, clamped


def encode_params(circuit: QfpCircuit, r: SqueezingVector, space: DesignSpace) -> np.ndarray:
    """Inverse of decode_params for an in-space circuit and squeezing vector."""
    if len(circuit.eoms) != space.n_eoms or len(circuit.shapers) != space.n_shapers:
        raise InvalidArgumentsError("circuit layer counts do not match the space")
    parts = []
    for eom in circuit.eoms:
        parts.extend([eom.modulation_index, eom.temporal_phase])
    for shaper in circuit.shapers:
        parts.extend(shaper.phases)
    k = space.lattice.center_index
    half = space.n_squeezed // 2
    parts.extend(r.r[k - half : k + half + 1])
    vec = np.array(parts, dtype=float)
    if vec.size != space.n_params:
        raise InvalidArgumentsError("encoded vector has the wrong length")
    return vec


def evaluate_design(
    params: np.ndarray,
    space: DesignSpace,
    target: TargetState,
    tables: HafnianTables,
    unitarity_tol: float = UNITARITY_TOL,
) -> EvaluatedDesign:
    """Full pipeline evaluation; invalid designs get the sentinel cost +1."""
    params = np.asarray(params, dtype=float)
    circuit, r, _ = decode_params(params, space)
    unitary = compose_unitary(circuit)
    # only the columns feeding the squeezed bins must be lossless; the
    # bandpass always annihilates the blocked (vacuum) columns
    if support_leakage(unitary.entries, r.support) > unitarity_tol:
        return EvaluatedDesign(params=params, state=None, cost=SENTINEL_COST)
    s = SymplecticOrthogonal(s_a=unitary.entries.real, s_b=-unitary.entries.imag)
    blocks = gamma_inverse_blocks(s, r)
    sigma = sigma_from_h_inverse(h_inverse(blocks))
    sigma_center = sigma.center_block(space.lattice.center_index, space.n_squeezed)
    try:
        state = heralded_coefficients(
            sigma_center,
            r,
            space.n_s,
            space.n_squeezed,
            space.n_cutoff,
            tables=tables,
            center_index=space.lattice.center_index,
        )
    except HeraldImpossibleError:
        return EvaluatedDesign(params=params, state=None, cost=SENTINEL_COST)
    fid = fidelity(state.coefficients, target.coefficients)
    c = cost(state.probability, fid)
    return EvaluatedDesign(params=params, state=state.with_metrics(fid, c), cost=c)


def pso_run(
    space: DesignSpace,
    target: TargetState,
    config: PsoConfig,
    tables: HafnianTables | None = None,
    initial_positions: np.ndarray | None = None,
) -> DesignResult:
    """Global-best PSO with reflecting bounds.

    ``initial_positions`` optionally seeds the first rows of the swarm (e.g.
    to include a known design). Tracks the best design by cost and, as a
    separate archive, the best design by fidelity among those with F > 0.9.
    """
    if tables is None:
        tables = precompute_tables(space.n_s, space.n_squeezed, space.n_cutoff)
    lo, hi = space.bounds()
    dim = space.n_params
    streams = [
        np.random.Generator(np.random.PCG64(s))
        for s in np.random.SeedSequence(config.seed).spawn(config.swarm_size)
    ]
    positions = np.empty((config.swarm_size, dim))
    velocities = np.empty((config.swarm_size, dim))
    span = hi - lo
    for p, rng in enumerate(streams):
        positions[p] = lo + span * rng.random(dim)
        velocities[p] = span * (rng.random(dim) - 0.5)
    if initial_positions is not None:
        seeds = np.atleast_2d(np.asarray(initial_positions, dtype=float))
        positions[: seeds.shape[0]] = np.clip(seeds, lo, hi)

    def evaluate(vec: np.ndarray) -> EvaluatedDesign:
        return evaluate_design(vec, space, target, tables)

    if config.threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        pool = ThreadPoolExecutor(max_workers=config.threads)

        def evaluate_swarm() -> list[EvaluatedDesign]:
            # map preserves particle order, so the reduction is deterministic
            return list(pool.map(evaluate, [positions[p].copy() for p in range(config.swarm_size)]))

    else:
        pool = None

        def evaluate_swarm() -> list[EvaluatedDesign]:
            return [evaluate(positions[p].copy()) for p in range(config.swarm_size)]

    evals = evaluate_swarm()
    personal_best = list(evals)
    best_idx = min(range(config.swarm_size), key=lambda p: (evals[p].cost, p))
    global_best = evals[best_idx]
    best_by_fid: EvaluatedDesign | None = None

    def consider_fidelity(candidate: EvaluatedDesign) -> None:
        nonlocal best_by_fid
        if candidate.state is None or candidate.state.fidelity is None:
            return
        if candidate.state.fidelity <= 0.9:
            return
        if best_by_fid is None or candidate.state.fidelity > best_by_fid.state.fidelity:
            best_by_fid = candidate

    for e in evals:
        consider_fidelity(e)

    trace = [global_best.cost]
    evaluations = config.swarm_size
    for _ in range(config.iterations):
        for p, rng in enumerate(streams):
            r_cog = rng.random(dim)
            r_soc = rng.random(dim)
            velocities[p] = (
                config.inertia * velocities[p]
                + config.cognitive * r_cog * (personal_best[p].params - positions[p])
                + config.social * r_soc * (global_best.params - positions[p])
            )
            positions[p] += velocities[p]
            # reflect off the box, flipping the velocity component
            for _bounce in range(4):
                below = positions[p] < lo
                above = positions[p] > hi
                if not (below.any() or above.any()):
                    break
                positions[p][below] = 2 * lo[below] - positions[p][below]
                positions[p][above] = 2 * hi[above] - positions[p][above]
                velocities[p][below | above] *= -1.0
            np.clip(positions[p], lo, hi, out=positions[p])
        new_evals = evaluate_swarm()
        evaluations += config.swarm_size
        for p in range(config.swarm_size):
            if new_evals[p].cost < personal_best[p].cost:
                personal_best[p] = new_evals[p]
            consider_fidelity(new_evals[p])
        for p in range(config.swarm_size):
            if new_evals[p].cost < global_best.cost:
                global_best = new_evals[p]
        trace.append(global_best.cost)

    if pool is not None:
        pool.shutdown()
    return DesignResult(
        best_by_cost=global_best,
        best_by_fidelity=best_by_fid,
        trace=np.array(trace),
        seed=config.seed,
        evaluations=evaluations,
    )
