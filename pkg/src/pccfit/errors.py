"""Exception hierarchy shared by all pccfit modules."""


class PccError(Exception):
    """Base class for every error raised by pccfit."""


class DuplicatePoints(PccError):
    pass


class DegenerateInput(PccError):
    pass


class CenterHitsPoint(PccError):
    """A candidate center coincides with a data point."""


class DenominatorZero(PccError):
    pass


class Inadmissible(PccError):
    """No single biarc exists for the end conditions."""


class NegativeBeta(PccError):
    pass


class CollinearControls(PccError):
    pass


class OutOfDomain(PccError):
    pass


class TooFewPoints(PccError):
    pass


class GapUnfillable(PccError):
    pass


class DeltaTooLarge(PccError):
    pass


class DeltaTooSmall(PccError):
    pass


class NeighborTooShort(PccError):
    pass


class NoFilletExists(PccError):
    pass


class InsufficientPoints(PccError):
    pass


class NoIntersection(PccError):
    pass


class StepTooLarge(PccError):
    pass


class DisconnectedCurve(PccError):
    pass


class ParseError(PccError):
    """Malformed input file. ``line`` is 1-based."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateConsecutive(ParseError):
    pass
