"""Exception hierarchy shared by the package."""


class DFAError(Exception):
    """Base class for all errors raised by :mod:`dfa`."""


class ModelError(DFAError, ValueError):
    """A model declaration violates its invariants."""


class DeclarationError(DFAError, KeyError):
    """An expression refers to a test function or functional that is not declared."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ModelMismatchError(DFAError, ValueError):
    """Operands were built over different models."""


class MissingParameterError(DFAError, ValueError):
    """A field construction needs a parameter the model does not provide."""


class TermCountError(DFAError, MemoryError):
    """An expansion exceeded the configured term cap."""


class InvalidStateError(DFAError, ValueError):
    """A conjugating element contains more than displacement operators."""


class NonConvergenceError(DFAError, ArithmeticError):
    """A series or quadrature failed to reach the requested accuracy."""


class DomainError(DFAError, ValueError):
    """A special function was called outside its domain."""


class NoiseFloorError(DFAError, ArithmeticError):
    """A numerical derivative is dominated by rounding noise."""


class ParseError(DFAError, ValueError):
    """Syntax error in an expression, with 1-based line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column
