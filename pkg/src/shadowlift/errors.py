"""Exception hierarchy for shadowlift."""


class ShadowError(Exception):
    """Base class for every error raised by this package."""


class CodeError(ShadowError, ValueError):
    pass


class NotDoubleOccurrence(CodeError):
    pass


class MarkerInconsistent(CodeError):
    pass


class NotSpherical(CodeError):
    pass


class NonRealizable(CodeError):
    pass


class UnknownCrossing(ShadowError, KeyError):
    pass


class InvalidSite(ShadowError, ValueError):
    pass


class NotAnEar(InvalidSite):
    pass


class NotABigon(InvalidSite):
    pass


class NotATriangle(InvalidSite):
    pass


class DegenerateTriangle(InvalidSite):
    pass


class TraceMismatch(ShadowError, ValueError):
    pass


class TooManyVariables(ShadowError, ValueError):
    pass


class PopOnEmpty(ShadowError, IndexError):
    pass


class AssignmentInvalid(ShadowError, ValueError):
    pass


class NotUnliftable(ShadowError, ValueError):
    pass


class MovieSyntaxError(ShadowError, ValueError):
    """Malformed diagram or movie text; ``line`` is 1-based."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ReplayError(ShadowError, ValueError):
    """A movie step could not be applied; ``step`` is 0-based."""

    def __init__(self, message, step):
        self.step = step
        super().__init__(f"step {step}: {message}")
