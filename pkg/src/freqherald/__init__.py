"""Design and simulation of frequency-bin circuits heralding non-Gaussian states."""

__version__ = "0.1.0"

from .circuit import (
    EomSetting,
    FrequencyLattice,
    QfpCircuit,
    ShaperSetting,
    UnitaryMatrix,
    compose_unitary,
    dft_matrix,
    eom_layer,
    leakage_check,
    support_leakage,
    shaper_layer,
)
from .gaussian import (
    GammaBlocks,
    HInverse,
    SigmaMatrix,
    SqueezingVector,
    SymplecticOrthogonal,
    b_matrix,
    det_gamma,
    gamma_inverse_blocks,
    h_inverse,
    sigma_for_state,
    sigma_from_h_inverse,
    unitary_to_symplectic,
)
from .hafnian import (
    HafnianTables,
    PatternTable,
    PhotonPattern,
    loop_hafnian,
    loop_hafnian_wick,
    moment_integral,
    pattern_table,
    precompute_tables,
)
from .herald import (
    HeraldedState,
    TargetState,
    cat_target,
    convergence_check,
    cost,
    fidelity,
    heralded_coefficients,
    pattern_probability,
    phase_flatness,
    quadrature_wavefunction,
)
from .optimizer import (
    DesignResult,
    DesignSpace,
    PsoConfig,
    decode_params,
    encode_params,
    evaluate_design,
    pso_run,
)
