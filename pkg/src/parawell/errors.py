"""Exception types shared across the toolkit."""


class ParawellError(Exception):
    """Base class for all toolkit errors."""


class DomainError(ParawellError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InterpolationRangeError(DomainError):
    """A tabulated function was queried outside its table range."""


class InvariantViolationError(ParawellError):
    """A structural invariant that should hold by construction was violated."""


class NormRangeError(ParawellError):
    """A norm computation overflowed.  Carries the offending mode index."""

    def __init__(self, message, mode=None):
        super().__init__(message)
        self.mode = mode


class RootSplitError(ParawellError):
    """Splitting roots by the sign of their imaginary part is undefined
    because some root lies too close to the real axis."""


class RootFindingError(ParawellError):
    """The companion-matrix eigenvalue solver failed to converge."""


class StructuralError(ParawellError):
    """The problem shape does not admit the requested operation."""


class ExceptionalRegularityError(ParawellError):
    """The regularity order sits in the exceptional set where the data space
    must be defined by interpolation; direct generation of the compatibility
    conditions is refused at such orders."""


class SpecFormatError(ParawellError):
    """A problem or config file failed to parse."""

    def __init__(self, message, path=None, line=None):
        loc = f"{path or '<input>'}:{line}" if line is not None else str(path or "<input>")
        super().__init__(f"{loc}: {message}")
        self.path = path
        self.line = line
