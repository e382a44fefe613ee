"""Error types raised across the package.

Every exception derives from SnmapError so callers can catch broadly.
InputError subclasses indicate bad user input (CLI exit code 2),
NumericError subclasses indicate a computation that could not proceed
(CLI exit code 4).
"""


class SnmapError(Exception):
    pass


class InputError(SnmapError):
    pass


class NumericError(SnmapError):
    pass


class ShapeMismatch(InputError):
    """Two sequences disagree on frame dimensions."""


class ParseError(InputError):
    """A cell could not be parsed; carries 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class TruncatedFrame(InputError):
    """A frame body ended before nrow full rows were read."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NoFramesFound(InputError):
    """The scan finished without locating a single frame."""


class DegenerateFit(NumericError):
    """Every EM restart collapsed a component variance."""


class NoValley(NumericError):
    """Mixture density has no interior minimum between the two lowest means.

    Carries the midpoint of the two means as a manual-cutoff suggestion.
    """

    def __init__(self, message: str, suggestion: float):
        super().__init__(message)
        self.suggestion = suggestion


class TooShort(NumericError):
    """Not enough frames remain after head exclusion to align."""


class NoContent(NumericError):
    """Fewer than two columns contain nonzero pixels; no midline fit."""


class CoincidentPoints(InputError):
    """The two registration points coincide; direction is undefined."""


class OutOfBounds(InputError):
    """A region or point lies outside the frame."""


class EmptyGrid(InputError):
    """Bandwidth search space is empty."""


class NonPositiveDf(NumericError):
    """Degrees-of-freedom estimate came out non-positive."""


class BindError(SnmapError):
    """Server could not bind the requested host/port."""
