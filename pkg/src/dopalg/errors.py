"""Exception hierarchy shared by the library and the command line."""


class DopalgError(Exception):
    """Base class for all library errors."""


class ModeError(DopalgError):
    """Exact and approximate scalars were mixed, or a float reached exact data."""


class DimensionError(DopalgError):
    pass


class PreconditionError(DopalgError):
    """An operation was called outside its domain (order too high, i < deg, ...)."""


class NotClosedError(PreconditionError):
    def __init__(self, i, j):
        super().__init__(f"1-form is not closed: d/dx{j+1} w{i+1} != d/dx{i+1} w{j+1}")
        self.pair = (i, j)


class ExactnessUnavailable(PreconditionError):
    """Exact mode was requested for data whose flow is not polynomial in t."""


class UnsupportedFlow(PreconditionError):
    """Completeness of a non-affine vector field is not decided by this library."""


class ParseError(DopalgError):
    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        self.text = text
        if pos is not None and text is not None:
            message = f"{message} at position {pos}\n  {text}\n  {' ' * pos}^"
        super().__init__(message)
