"""Covariance-matrix algebra for squeezed-vacuum inputs through a passive circuit.

All quantities use the qqpp quadrature ordering with hbar = 1 (vacuum
covariance I/2). The mode unitary U maps to the orthogonal symplectic

    S_p = [[Re U, -Im U], [Im U, Re U]],

and with T = diag(tanh r_i) the inverse of Gamma = S_p V0 S_p^T + I/2 has
the closed-form blocks

    A = I - S_A T S_A^T + S_B T S_B^T,    C = S_A T S_B^T + S_B T S_A^T,

assembled as [[A, C], [C, 2I - A]]. From A and C the complex moment matrix
sigma feeding the loop hafnian follows without any numerical inversion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import UNITARITY_TOL, leakage_check, support_leakage
from .errors import InvalidDimensionError, NonUnitaryInputError

DEFAULT_R_MAX = 1.5


@dataclass(frozen=True)
class SqueezingVector:
    """Per-bin squeezing parameters r_i >= 0 with contiguous support."""

    r: np.ndarray
    r_max: float = DEFAULT_R_MAX

    def __post_init__(self):
        r = np.atleast_1d(np.asarray(self.r, dtype=float))
        object.__setattr__(self, "r", r)
        if np.any(r < 0):
            raise ValueError("squeezing parameters must be nonnegative")
        if np.any(r > self.r_max + 1e-12):
            raise ValueError(f"squeezing parameters must not exceed r_max={self.r_max}")
        support = np.flatnonzero(r)
        if support.size and np.any(np.diff(support) != 1):
            raise ValueError("nonzero squeezing entries must be contiguous")

    @classmethod
    def centered(
        cls,
        n_modes: int,
        center_index: int,
        values: np.ndarray,
        r_max: float = DEFAULT_R_MAX,
    ) -> "SqueezingVector":
        """Place ``values`` (odd length) on the bins centered on ``center_index``."""
        values = np.atleast_1d(np.asarray(values, dtype=float))
        half = values.size // 2
        if values.size % 2 != 1:
            raise ValueError("centered support must have odd length")
        lo = center_index - half
        if lo < 0 or lo + values.size > n_modes:
            raise ValueError("centered support does not fit in the lattice")
        r = np.zeros(n_modes)
        r[lo : lo + values.size] = values
        return cls(r=r, r_max=r_max)

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.r)

    @property
    def n_modes(self) -> int:
        return self.r.size


@dataclass(frozen=True)
class SymplecticOrthogonal:
    """Real blocks of S_p = [[S_A, S_B], [-S_B, S_A]] in qqpp ordering."""

    s_a: np.ndarray
    s_b: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.s_a.shape[0]

    def matrix(self) -> np.ndarray:
        return np.block([[self.s_a, self.s_b], [-self.s_b, self.s_a]])


@dataclass(frozen=True)
class GammaBlocks:
    """Symmetric blocks A, C with Gamma^{-1} = [[A, C], [C, 2I - A]]."""

    a: np.ndarray
    c: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.a.shape[0]

    def assemble(self) -> np.ndarray:
        eye2 = 2.0 * np.eye(self.n_modes)
        return np.block([[self.a, self.c], [self.c, eye2 - self.a]])


@dataclass(frozen=True)
class HInverse:
    """Complex symmetric 2N x 2N inverse of H = B + I/2."""

    matrix: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2


@dataclass(frozen=True)
class SigmaMatrix:
    """Complex symmetric second-moment matrix sigma_ij = <s_i s_j>."""

    matrix: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0]

    def center_block(self, center_index: int, width: int) -> np.ndarray:
        """The width x width submatrix on the bins centered on center_index.

        Sufficient for heralding because the detection pattern vanishes on
        every other bin.
        """
        half = width // 2
        lo = center_index - half
        hi = lo + width
        if lo < 0 or hi > self.n_modes:
            raise InvalidDimensionError("center block does not fit in sigma")
        return self.matrix[lo:hi, lo:hi]


def unitary_to_symplectic(
    u: np.ndarray, tol: float = UNITARITY_TOL
) -> SymplecticOrthogonal:
    """Convert a mode unitary to its qqpp symplectic-orthogonal blocks.

    Equivalent to W diag(U, U*) W^dag with W = (1/sqrt(2))[[I, I], [-iI, iI]];
    the result is exactly real, so the blocks are Re(U) and -Im(U).
    """
    u = np.asarray(u, dtype=complex)
    leak = leakage_check(u)
    if leak > tol:
        raise NonUnitaryInputError(f"input leakage {leak:.3e} exceeds tolerance {tol:.3e}")
    return SymplecticOrthogonal(s_a=u.real.copy(), s_b=-u.imag.copy())


def gamma_inverse_blocks(s: SymplecticOrthogonal, r: SqueezingVector) -> GammaBlocks:
    """Closed-form blocks of Gamma^{-1} for squeezing r through S_p.

    Exploits the sparsity of T = diag(tanh r): only the squeezed bins
    contribute. Blocks are symmetrized to suppress float drift before the
    hafnian stage.
    """
    n = s.n_modes
    if r.n_modes != n:
        raise InvalidDimensionError("squeezing vector length does not match S_p")
    supp = r.support
    t = np.tanh(r.r[supp])
    sa = s.s_a[:, supp]
    sb = s.s_b[:, supp]
    a = np.eye(n) - (sa * t) @ sa.T + (sb * t) @ sb.T
    c = (sa * t) @ sb.T + (sb * t) @ sa.T
    a = 0.5 * (a + a.T)
    c = 0.5 * (c + c.T)
    return GammaBlocks(a=a, c=c)


def det_gamma(r: SqueezingVector) -> float:
    """det Gamma = prod_i cosh^2 r_i, independent of the passive circuit."""
    return float(np.prod(np.cosh(r.r) ** 2))


def b_matrix(blocks: GammaBlocks) -> np.ndarray:
    """The complex matrix B with H = B + I/2; satisfies det(B + I/2) = 1."""
    a, c = blocks.a, blocks.c
    eye = np.eye(blocks.n_modes)
    top_left = a + 1j * c
    off = c - 1j * (a - eye)
    bottom_right = 2.0 * eye - a - 1j * c
    return 0.5 * np.block([[top_left, off], [off, bottom_right]])


def h_inverse(blocks: GammaBlocks) -> HInverse:
    """Closed-form inverse of H = B + I/2."""
    a, c = blocks.a, blocks.c
    eye = np.eye(blocks.n_modes)
    g = a - eye + 1j * c
    top_left = 3.0 * eye - a - 1j * c
    off = 1j * g
    bottom_right = eye + a + 1j * c
    return HInverse(matrix=0.5 * np.block([[top_left, off], [off, bottom_right]]))


def sigma_from_h_inverse(h: HInverse) -> SigmaMatrix:
    """sigma_ij = 2 (Hinv_ij - Hinv_{i+N, j+N}), symmetrized."""
    n = h.n_modes
    m = h.matrix
    sigma = 2.0 * (m[:n, :n] - m[n:, n:])
    sigma = 0.5 * (sigma + sigma.T)
    return SigmaMatrix(matrix=sigma)


def sigma_for_state(u: np.ndarray, r: SqueezingVector, tol: float = UNITARITY_TOL) -> SigmaMatrix:
    """Full pipeline U, r -> sigma (convenience wrapper).

    Only the columns of U on the squeezed bins enter the algebra, so the
    unitarity requirement is restricted to those columns: a bandpassed
    circuit whose blocked bins carry vacuum is perfectly physical as long as
    no squeezed light is lost.
    """
    u = np.asarray(u, dtype=complex)
    leak = support_leakage(u, r.support) if r.support.size else leakage_check(u)
    if leak > tol:
        raise NonUnitaryInputError(
            f"leakage {leak:.3e} on the squeezed columns exceeds tolerance {tol:.3e}"
        )
    s = SymplecticOrthogonal(s_a=u.real.copy(), s_b=-u.imag.copy())
    blocks = gamma_inverse_blocks(s, r)
    return sigma_from_h_inverse(h_inverse(blocks))
