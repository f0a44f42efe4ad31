"""
Exception types raised by impatient-queue.

Every exception derives from ImpatientQueueError and from the builtin
exception it specialises, so callers can catch either.
"""


class ImpatientQueueError(Exception):
    """Base class for all package errors."""


class DomainError(ImpatientQueueError, ValueError):
    """An argument lies outside a function's mathematical domain."""


class ContractViolation(ImpatientQueueError, ValueError):
    """A caller broke an ordering or consistency precondition."""


class ConfigurationError(ImpatientQueueError, ValueError):
    """A scenario or CLI configuration is invalid."""


class UnknownScenarioError(ImpatientQueueError, LookupError):
    """A scenario name is not in the catalog."""

    def __init__(self, name: str, valid_names: list[str]):
        self.name = name
        self.valid_names = valid_names
        super().__init__(f"Unknown scenario '{name}'. Valid names: {', '.join(valid_names)}")


class NumericalError(ImpatientQueueError, ArithmeticError):
    """A numerical routine (quadrature, bracketing) failed to converge."""
