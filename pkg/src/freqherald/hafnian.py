"""Loop-hafnian evaluation of Gaussian moments <s_1^{n_1} ... s_N^{n_N}>.

The fast path uses the alternating-binomial closed form (Kan's identity):

    Hf(sigma) = 1/(Sigma/2)! * sum_i (-1)^{W_i} X_i (h_i^T sigma h_i / 2)^{Sigma/2}

with one row i per combination of indices nu_j in {0..n_j}. The sign
exponents W, binomial products X, and half-integer vectors Z = n/2 - nu are
independent of sigma, so they are precomputed once per detection pattern and
reused for every evaluation. A Wick perfect-matching enumeration serves as
the independent reference oracle for small photon totals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentsError, TableTooLargeError

DEFAULT_ROW_CAP = 5_000_000
WICK_TOTAL_CAP = 12


@dataclass(frozen=True)
class PhotonPattern:
    """Photon counts per mode for one PNR outcome."""

    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(n) for n in self.counts)
        if any(n < 0 for n in counts):
            raise InvalidArgumentsError("photon counts must be nonnegative")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def n_modes(self) -> int:
        return len(self.counts)


@dataclass(frozen=True)
class PatternTable:
    """Precomputed summation rows for one photon pattern.

    Attributes
    ----------
    counts : the pattern the table was built for.
    signs : (-1)^{row sum of nu}, one entry per row.
    binom : product of binomials C(n_j, nu_j) per row.
    z : half-integer vectors n_j/2 - nu_j, shape (kappa, n_modes).
    half_total : Sigma/2.
    factorial : (Sigma/2)! as float.
    """

    counts: tuple[int, ...]
    signs: np.ndarray
    binom: np.ndarray
    z: np.ndarray
    half_total: int
    factorial: float

    @property
    def kappa(self) -> int:
        return self.signs.size


def pattern_table(counts, row_cap: int = DEFAULT_ROW_CAP) -> PatternTable:
    """Build the summation table for an arbitrary photon pattern."""
    counts = tuple(int(n) for n in counts)
    total = sum(counts)
    kappa = 1
    for n in counts:
        kappa *= n + 1
    if kappa > row_cap:
        raise TableTooLargeError(f"table needs {kappa} rows, cap is {row_cap}")
    grids = np.meshgrid(*[np.arange(n + 1) for n in counts], indexing="ij")
    d = np.stack([g.ravel() for g in grids], axis=1) if counts else np.zeros((1, 0), int)
    signs = np.where(d.sum(axis=1) % 2 == 0, 1.0, -1.0)
    binom = np.ones(d.shape[0])
    for j, n in enumerate(counts):
        col = np.array([math.comb(n, k) for k in range(n + 1)], dtype=float)
        binom *= col[d[:, j]]
    z = 0.5 * np.asarray(counts, dtype=float) - d
    return PatternTable(
        counts=counts,
        signs=signs,
        binom=binom,
        z=z,
        half_total=total // 2,
        factorial=float(math.factorial(total // 2)),
    )


@dataclass(frozen=True)
class HafnianTables:
    """Tables for the herald family (n_s, ..., n_s, n_K, n_s, ..., n_s).

    One table per undetected photon number n_K in {0..n_c}; shared read-only
    across all optimizer evaluations.
    """

    n_s: int
    n_squeezed: int
    n_cutoff: int
    tables: tuple[PatternTable, ...]

    def table_for(self, n_k: int) -> PatternTable:
        if not 0 <= n_k <= self.n_cutoff:
            raise InvalidArgumentsError(f"n_K={n_k} outside cutoff {self.n_cutoff}")
        return self.tables[n_k]

    def lookup(self, counts) -> PatternTable:
        """Find the table whose pattern matches ``counts`` exactly."""
        counts = tuple(int(n) for n in counts)
        if len(counts) == self.n_squeezed:
            n_k = counts[self.n_squeezed // 2]
            if 0 <= n_k <= self.n_cutoff and counts == self.tables[n_k].counts:
                return self.tables[n_k]
        raise InvalidArgumentsError(
            f"pattern {counts} does not belong to the precomputed family"
        )


def herald_pattern(n_s: int, n_squeezed: int, n_k: int) -> PhotonPattern:
    """The detection pattern with n_K photons in the center bin."""
    counts = [n_s] * n_squeezed
    counts[n_squeezed // 2] = n_k
    return PhotonPattern(counts=tuple(counts))


def precompute_tables(
    n_s: int, n_squeezed: int, n_cutoff: int, row_cap: int = DEFAULT_ROW_CAP
) -> HafnianTables:
    """Tables for every n_K in {0..n_c}; kappa = (n_s+1)^(N_s-1) (n_K+1)."""
    if n_s < 0 or n_cutoff < 0:
        raise InvalidArgumentsError("n_s and n_c must be nonnegative")
    if n_squeezed < 1 or n_squeezed % 2 == 0:
        raise InvalidArgumentsError("number of squeezed bins must be odd and >= 1")
    kappa_max = (n_s + 1) ** (n_squeezed - 1) * (n_cutoff + 1)
    if kappa_max > row_cap:
        raise TableTooLargeError(f"largest table needs {kappa_max} rows, cap is {row_cap}")
    tables = tuple(
        pattern_table(herald_pattern(n_s, n_squeezed, n_k).counts, row_cap=row_cap)
        for n_k in range(n_cutoff + 1)
    )
    return HafnianTables(
        n_s=n_s, n_squeezed=n_squeezed, n_cutoff=n_cutoff, tables=tables
    )


def _resolve_table(pattern: PhotonPattern, tables) -> PatternTable:
    if tables is None:
        return pattern_table(pattern.counts)
    if isinstance(tables, PatternTable):
        if tables.counts != pattern.counts:
            raise InvalidArgumentsError(
                f"table built for {tables.counts}, pattern is {pattern.counts}"
            )
        return tables
    if isinstance(tables, HafnianTables):
        return tables.lookup(pattern.counts)
    raise InvalidArgumentsError(f"unsupported table object {type(tables)!r}")


def loop_hafnian(sigma_block: np.ndarray, pattern: PhotonPattern, tables=None) -> complex:
    """Gaussian moment of ``pattern`` under the symmetric matrix ``sigma_block``.

    Returns exactly 0 for odd photon totals. ``tables`` may be a PatternTable,
    a HafnianTables family, or None (table built on the fly).
    """
    if pattern.total % 2 == 1:
        return 0j
    sigma_block = np.asarray(sigma_block, dtype=complex)
    if sigma_block.shape != (pattern.n_modes, pattern.n_modes):
        raise InvalidArgumentsError(
            f"sigma block shape {sigma_block.shape} does not match "
            f"{pattern.n_modes}-mode pattern"
        )
    table = _resolve_table(pattern, tables)
    if pattern.total == 0:
        return 1.0 + 0j
    quad = 0.5 * np.einsum("ij,jk,ik->i", table.z, sigma_block, table.z)
    terms = table.signs * table.binom * quad**table.half_total
    return complex(terms.sum() / table.factorial)


def loop_hafnian_wick(
    sigma: np.ndarray, pattern: PhotonPattern, total_cap: int = WICK_TOTAL_CAP
) -> complex:
    """Reference oracle: explicit perfect-matching enumeration.

    Expands the pattern into Sigma repeated factors and sums products of
    pairings sigma_{ij}; repeated factors pairing with themselves produce the
    diagonal (loop) contributions.
    """
    if pattern.total % 2 == 1:
        return 0j
    if pattern.total > total_cap:
        raise InvalidArgumentsError(
            f"Wick enumeration capped at {total_cap} photons, got {pattern.total}"
        )
    sigma = np.asarray(sigma, dtype=complex)
    modes = [i for i, n in enumerate(pattern.counts) for _ in range(n)]

    def matchings(items: tuple[int, ...]) -> complex:
        if not items:
            return 1.0 + 0j
        first, rest = items[0], items[1:]
        acc = 0j
        for k in range(len(rest)):
            partner = rest[k]
            acc += sigma[first, partner] * matchings(rest[:k] + rest[k + 1 :])
        return acc

    return complex(matchings(tuple(modes)))


def moment_integral(sigma_block: np.ndarray, pattern: PhotonPattern, tables=None) -> complex:
    """The moment integral: 0 for odd totals, loop hafnian otherwise."""
    if pattern.total % 2 == 1:
        return 0j
    return loop_hafnian(sigma_block, pattern, tables)
