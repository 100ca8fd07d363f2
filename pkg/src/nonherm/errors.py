"""Exception hierarchy shared by every module of the package."""


class NonHermError(Exception):
    """Base class for all errors raised by :mod:`nonherm`."""


class NumericError(NonHermError):
    """A numerical precondition or postcondition failed."""


class DimensionError(NumericError, ValueError):
    pass


class SymmetryError(NumericError):
    pass


class ConvergenceError(NumericError):
    pass


class DegenerateSpectrumError(NumericError):
    """Two eigenvalues are closer than the configured gap tolerance."""


class SingularMatrixError(NumericError):
    pass


class NotPositiveDefiniteError(NumericError):
    pass


class IllConditionedBasisError(NumericError):
    pass


class NormalizationError(NumericError, ValueError):
    pass


class NotFixedError(NumericError):
    """An antilinear operator does not fix the supplied basis."""


class NotEigenpairError(NumericError):
    pass


class ConstructionError(NumericError):
    """A derived operator violates one of its defining identities."""


class DegenerateParamError(NumericError, ValueError):
    """Model parameters hit a singular point (e.g. alpha*beta = 2 or E1 = E2)."""


class NotBrokenRegimeError(NumericError, ValueError):
    pass


class RegimeError(NumericError, ValueError):
    pass


class ConfigError(NonHermError):
    """Invalid configuration file or command-line arguments."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
