"""Exception types shared across the package.

Three failure modes are distinguished so that callers (and the CLI exit-code
contract) can react differently to bad inputs versus numerical breakdown:

* :class:`DomainError` -- an argument violates a documented precondition.
* :class:`ConvergenceError` -- an iteration or quadrature failed to reach its
  tolerance within its node/iteration budget.
* :class:`SchemaError` -- an input file does not match its documented format.
"""

__all__ = ["DomainError", "ConvergenceError", "SchemaError"]


class DomainError(ValueError):
    """An argument lies outside the documented domain of an operation."""


class ConvergenceError(RuntimeError):
    """A numerical procedure exhausted its budget before reaching tolerance."""


class SchemaError(ValueError):
    """An input document does not conform to its file-format contract."""
