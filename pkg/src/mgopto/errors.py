class MgOptoError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MgOptoError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class InstabilityError(MgOptoError):
    """The requested configuration is dynamically or geometrically unstable."""


class NoLightError(MgOptoError):
    """A quantity that diverges without optical power was requested at zero power."""


class DesignError(MgOptoError):
    """A suspension design violates a constraint or has no feasible solution."""

    def __init__(self, message: str, constraint: str | None = None):
        super().__init__(message)
        self.constraint = constraint


class ConfigError(MgOptoError):
    """Invalid configuration text or simulation settings."""

    def __init__(self, message: str, section: str | None = None, line: int | None = None):
        where = []
        if section is not None:
            where.append(f"section [{section}]")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.section = section
        self.line = line


class ConsistencyError(MgOptoError, AssertionError):
    """Two independent evaluation routes of the same quantity disagree."""
