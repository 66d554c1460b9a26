class VQSLError(Exception):
    """Base class for errors raised by vqsl."""


class NonHermitianInput(VQSLError, ValueError):
    pass


class DimensionMismatch(VQSLError, ValueError):
    pass


class InvalidState(VQSLError, ValueError):
    pass


class ParamOutOfRange(VQSLError, ValueError):
    pass


class GridError(VQSLError, ValueError):
    pass


class QuadratureNotConverged(VQSLError, ArithmeticError):
    pass


class EigenNotConverged(VQSLError, ArithmeticError):
    pass


class ParseError(VQSLError, ValueError):
    """Malformed configuration document; carries the offending line number."""

    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class ValidationError(VQSLError, ValueError):
    """A configuration field holds a value outside its domain."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class EmptyInput(VQSLError, ValueError):
    pass


class IoError(VQSLError, OSError):
    pass
