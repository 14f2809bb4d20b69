"""Exception hierarchy shared by every module."""


class MMToeplitzError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MMToeplitzError, ValueError):
    """A point or parameter lies outside the domain an operation is defined on."""


class DegenerateInputError(DomainError):
    """Point lies on the measure-zero set where group-moment coordinates break down."""


class DivergenceError(MMToeplitzError, ValueError):
    """The requested integral does not converge for the given exponents."""


class SymbolError(MMToeplitzError, ValueError):
    """Base class for symbol-language errors."""


class SymbolSyntaxError(SymbolError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
            if text is not None:
                message += f"\n  {text}\n  {' ' * position}^"
        super().__init__(message)


class SymbolArityError(SymbolError):
    """Symbol uses variables that the target case does not provide."""


class SymbolEvalError(SymbolError, ArithmeticError):
    """Evaluation left the domain of an elementary function."""


class SymbolBoundError(SymbolError):
    """Sampled values exceed the declared sup-bound of a symbol."""


class NearBoundaryWarning(RuntimeWarning):
    """Point is so close to the boundary that the Kahler form loses precision."""
