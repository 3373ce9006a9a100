"""Exception hierarchy shared by every quivoa module."""


class QuivoaError(Exception):
    """Base class for domain errors (the CLI maps these to exit code 1)."""


class PreconditionError(QuivoaError, ValueError):
    """An argument violates an operation's precondition."""


class CapacityError(QuivoaError):
    """An input exceeds one of the enumeration guards."""


class GraphMismatchError(PreconditionError):
    """Operands live over different graphs."""


class DescriptorError(QuivoaError):
    """A (blinded) maximal ideal space descriptor is internally inconsistent."""


class ParseError(QuivoaError):
    """Syntax or semantic error in a graph file or an expression.

    ``line`` and ``column`` are 1-based positions into the source text.
    """

    def __init__(self, message, line=1, column=1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")
