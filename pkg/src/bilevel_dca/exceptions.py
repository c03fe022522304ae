"""Exception hierarchy shared by the solver, parsers and CLI."""


class BilevelError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(BilevelError, ValueError):
    """Operands have incompatible shapes."""


class DomainError(BilevelError, ValueError):
    """A parameter lies outside the domain where the operation is defined."""


class ParseError(BilevelError, ValueError):
    """Malformed input file. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(BilevelError, ValueError):
    """Invalid or inconsistent run configuration."""


class NumericalFailure(BilevelError, ArithmeticError):
    """An oracle produced a non-finite matrix.

    ``iteration`` is the inner DCA step and ``outer`` the continuation step
    (``None`` when the failure happened outside a continuation loop).
    """

    def __init__(self, message, iteration=None, outer=None):
        self.iteration = iteration
        self.outer = outer
        self.reason = message
        parts = []
        if outer is not None:
            parts.append(f"outer {outer}")
        if iteration is not None:
            parts.append(f"inner {iteration}")
        if parts:
            message = f"{message} ({', '.join(parts)})"
        super().__init__(message)
