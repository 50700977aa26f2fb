"""Exception types raised across the package."""


class MultiopError(Exception):
    """Base class for all package errors."""


class DimensionError(MultiopError, ValueError):
    """Operands have incompatible shapes."""


class ArityError(MultiopError, ValueError):
    """Wrong number of vectors/operators, or an index parameter out of range."""


class PairSetError(MultiopError, ValueError):
    """Invalid pair set, e.g. a repeated or self-referencing pair."""


class HermiticityError(MultiopError, ValueError):
    pass


class NormalizationError(MultiopError, ValueError):
    pass


class PositivityError(MultiopError, ValueError):
    """A quantity that must be nonnegative came out negative beyond tolerance."""


class ModeError(MultiopError, ValueError):
    """Inputs do not satisfy the requirements of the requested relation mode."""


class PurityError(MultiopError, ValueError):
    pass


class ParameterError(MultiopError, ValueError):
    pass


class TruncationError(MultiopError, ValueError):
    """Too much probability weight sits at the edge of a truncated Fock space."""
