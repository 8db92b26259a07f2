"""Exception hierarchy.

Split by how the CLI maps failures to exit codes: usage problems (bad
arguments, parse errors), violated preconditions (membership, inclusion,
range evidence), and non-convergence.
"""


class HypermetricError(Exception):
    """Base class for all library errors."""


class UsageError(HypermetricError):
    """Bad arguments or malformed input (CLI exit code 1)."""


class ArgumentError(UsageError):
    pass


class ParseError(UsageError):
    """Syntax error in map source text, annotated with a character offset."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class PreconditionError(HypermetricError):
    """A documented precondition failed (CLI exit code 2)."""


class MembershipError(PreconditionError):
    """Point not in the domain it was claimed to belong to."""


class InclusionError(PreconditionError):
    """Inclusion is not relatively compact (gap below tolerance)."""


class RangeError(PreconditionError):
    """Range evidence for a map was refuted or inconclusive."""


class PathInvalidError(PreconditionError):
    """A quadrature node along a path escapes the domain."""


class ConnectivityError(PreconditionError):
    """No in-domain seed polyline between the two endpoints was found."""


class UnsupportedDomainError(PreconditionError):
    """Operation not available for this domain variant (e.g. unbounded box)."""


class SamplingExhaustedError(HypermetricError):
    """Rejection sampling failed to produce enough points."""


class SingularityError(HypermetricError):
    """Division by a complex value of modulus below 1e-300 during evaluation."""


class ConfigurationError(HypermetricError):
    """Required recorded data missing (e.g. no first-step distance bound)."""


class NonConvergenceError(HypermetricError):
    """Iteration hit max_iter before the stopping rule fired (exit code 3)."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
