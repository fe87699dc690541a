"""Exception hierarchy with stable machine-parsable codes.

The CLI prints failures as ``ERROR[<code>]: <message>`` on stderr, so every
exception class carries a short code.
"""


class CenfracError(Exception):
    code = "INTERNAL"


class DomainError(CenfracError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""

    code = "DOMAIN"


class DivergenceError(CenfracError, ValueError):
    """The requested series has no convergent representation.

    Raised for envelope exponent alpha <= 0: the kernel iterates all have
    unit mass, so the Neumann series of a bounded-below input diverges.
    """

    code = "DIVERGENCE"


class ContractError(CenfracError, ValueError):
    """A declared certificate (envelope, band, interpolation data) is violated."""

    code = "CONTRACT"


class NonConvergenceError(CenfracError, RuntimeError):
    """An iteration exceeded its budget without meeting its tolerance."""

    code = "NONCONVERGENCE"


class RunawayError(CenfracError, RuntimeError):
    """A simulated path exceeded max_steps; carries the partial result."""

    code = "RUNAWAY"

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class UsageError(CenfracError, ValueError):
    """Invalid flag, route label, or call pattern."""

    code = "USAGE"
