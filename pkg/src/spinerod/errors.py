"""Exception types raised by the rod model, solver, and scenario layer."""


class SpineRodError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(SpineRodError, ValueError):
    """A physical or numerical parameter is non-finite, non-positive, or inconsistent."""


class InvalidCommandError(InvalidParameterError):
    """A pressure command is outside the admissible range."""


class SingularStiffnessError(SpineRodError):
    """A stiffness matrix has a zero diagonal entry and cannot be inverted."""


class DomainError(SpineRodError, ValueError):
    """An evaluation point lies outside the admissible domain (e.g. arc length beyond the rod)."""


class EnvelopeError(DomainError):
    """A requested configuration lies outside the calibrated envelope."""


class ZeroDeflectionError(InvalidParameterError):
    """A zero measured deflection implies an unbounded modulus."""


class IntegrationDivergedError(SpineRodError):
    """The spatial march produced a non-finite state."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"non-finite state detected at grid index {index}")


class SolverFailureError(SpineRodError):
    """The shooting solver could not proceed (e.g. singular Jacobian)."""

    def __init__(self, message, diagnostics=None):
        self.diagnostics = dict(diagnostics or {})
        super().__init__(message)


class ScenarioParseError(SpineRodError, ValueError):
    """A scenario file contains an unknown key, a malformed value, or an inconsistent pair."""

    def __init__(self, message, key=None, line_no=None):
        self.key = key
        self.line_no = line_no
        if key is not None or line_no is not None:
            where = []
            if key is not None:
                where.append(f"key {key!r}")
            if line_no is not None:
                where.append(f"line {line_no}")
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
