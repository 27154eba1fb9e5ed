"""Exception types shared across the package."""


class XXZError(Exception):
    """Base class for all package errors."""


class DomainError(XXZError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class CapacityError(XXZError, ValueError):
    """The requested system is too large for dense exact diagonalization."""


class ConfigError(XXZError, ValueError):
    """A run configuration is invalid.

    ``problems`` lists every offending field so a single diagnostic can
    report all of them at once.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class EigensolverError(XXZError, RuntimeError):
    """The dense eigensolver failed to converge."""
