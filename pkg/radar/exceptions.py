"""
Errors raised by the radar, optimizer and experiments apps.

Every error is a ValueError so callers that only care about "bad input"
can catch that, and the management commands turn any RadarError into a
CommandError with a nonzero exit status.
"""


class RadarError(ValueError):
    """
    Base class for all domain errors
    """


class InfeasibleLayout(RadarError):
    """
    Spacings or aperture violate the minimum spacing or the aperture budget
    """


class CodeError(RadarError):
    """
    Frequency hopping code has the wrong shape or entries outside 1..K
    """


class OrthogonalityError(RadarError):
    """
    A code or configuration breaks subpulse orthogonality
    """


class VisibleRegionError(RadarError):
    """
    The main lobe of the requested look direction leaves [-pi/2, pi/2]
    """


class QueryError(RadarError):
    """
    Ambiguity function query or slice range out of its domain
    """


class NullNotFound(RadarError):
    """
    No null below the threshold on one side of the main lobe
    """


class GridMismatch(RadarError):
    """
    A slice and a bound were evaluated on different grids
    """


class CalibrationError(RadarError):
    """
    Too few Monte-Carlo trials to calibrate the requested false alarm rate
    """


class RankDeficient(RadarError):
    """
    Active constraint rows are linearly dependent
    """


class StepSizeError(RadarError):
    """
    Backtracking line search fell below the smallest admissible step
    """
