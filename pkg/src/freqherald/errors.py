"""Exception types shared across the package."""


class FreqHeraldError(Exception):
    """Base class for all package errors."""


class InvalidDimensionError(FreqHeraldError):
    """Matrix or vector dimension is invalid for the requested operation."""


class InvalidCircuitError(FreqHeraldError):
    """Circuit layers are inconsistent with each other or the lattice."""


class NonUnitaryInputError(FreqHeraldError):
    """A matrix expected to be unitary exceeds the leakage tolerance."""


class TableTooLargeError(FreqHeraldError):
    """Requested precomputed table exceeds the configured row cap."""


class InvalidArgumentsError(FreqHeraldError):
    """Mismatched or out-of-contract arguments."""


class HeraldImpossibleError(FreqHeraldError):
    """The requested detection pattern has (numerically) zero probability."""


class ConfigError(FreqHeraldError):
    """Run configuration is missing, malformed, or violates an invariant."""
