"""Exception hierarchy.

Every data-level failure derives from :class:`TimeBellError` (itself a
``ValueError``) so callers can catch one type; the CLI maps it to exit code 3.
"""


class TimeBellError(ValueError):
    """Base class for all data and parameter errors raised by timebell."""


class EmptyInput(TimeBellError):
    pass


class MalformedLine(TimeBellError):
    def __init__(self, line_no, detail=""):
        self.line_no = line_no
        super().__init__(f"line {line_no}: malformed{': ' + detail if detail else ''}")


class NonMonotone(TimeBellError):
    def __init__(self, line_no):
        self.line_no = line_no
        super().__init__(f"line {line_no}: event times do not strictly increase")


class InconsistentColumns(TimeBellError):
    def __init__(self, line_no):
        self.line_no = line_no
        super().__init__(
            f"line {line_no}: interval column disagrees with cumulative column")


class TooFewEvents(TimeBellError):
    pass


class NoFullCycle(TimeBellError):
    pass


class OutOfRange(TimeBellError):
    pass


class EmptySubsample(TimeBellError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"pair {pair} has an empty subsample")


class DomainError(TimeBellError):
    pass


class TooFewSamples(TimeBellError):
    pass


class DegenerateSample(TimeBellError):
    pass


class EmptyResult(TimeBellError):
    pass


class InvariantBreach(AssertionError):
    """An internal consistency check failed (a bug, not bad data)."""
