"""Exception types raised by the solvers and loaders."""


class InvalidInputError(ValueError):
    """Input array contains non-finite entries or has the wrong shape."""


class ConfigurationError(ValueError):
    """A parameter is outside its admissible range."""


class NumericalError(ArithmeticError):
    """A factorization or evaluation produced a non-finite quantity."""

    def __init__(self, message, strategy=None):
        super().__init__(message)
        self.strategy = strategy


class LineSearchError(RuntimeError):
    """Backtracking exhausted its budget without sufficient decrease."""


class UnsupportedSizeError(ValueError):
    """Problem is too large for a brute-force routine."""


class LibsvmParseError(ValueError):
    """Malformed LIBSVM text; ``lineno`` is 1-based."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno
