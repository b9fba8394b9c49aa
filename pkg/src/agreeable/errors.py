"""Exception hierarchy shared by the solvers, checkers and the CLI."""


class AgreeableError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgument(AgreeableError, ValueError):
    """An argument violates an operation's precondition."""


class InstanceTooLarge(AgreeableError):
    """An exhaustive routine was asked to enumerate beyond its guard."""


class InconsistentOracle(AgreeableError):
    """Oracle answers are not consistent with any total preorder."""


class NotResponsive(AgreeableError):
    """A routine needs responsive players but the oracle does not declare it."""


class OracleViolation(AgreeableError):
    """The oracle's answers contradict its declared responsiveness.

    ``details`` carries the sets and the query transcript that exposed the
    contradiction.
    """

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


class TheoremViolation(AgreeableError):
    """An exhaustive check found an instance exceeding a proven bound."""

    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance
