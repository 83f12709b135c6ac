"""Exceptions raised by sgsvp.

Every exception carries the exit status that `sgsvp.__main__.main` uses when
it reaches the command line: 2 for bad input, 3 for missing or corrupt run
artifacts, 4 for solver failures.
"""


class SgsvpError(Exception):
    exit_status = 1


class InputError(SgsvpError, ValueError):
    exit_status = 2


class ShapeError(InputError):
    pass


class SplitError(InputError):
    pass


class CurveTooShortError(InputError):
    pass


class UndefinedMetricError(InputError):
    pass


class ArtifactError(SgsvpError):
    exit_status = 3


class SolverError(SgsvpError, ArithmeticError):
    exit_status = 4


class DegenerateDenominatorError(SolverError):
    """The denominator ||A_den z||^2 of the Rayleigh quotient fell below
    DENOMINATOR_FLOOR."""

    def __init__(self, denominator, iteration=None):
        self.denominator = denominator
        self.iteration = iteration
        where = "initial iterate" if iteration is None else f"iterate {iteration}"
        super().__init__(
            f"degenerate denominator ||A_den z||^2 = {denominator!r} at {where}"
        )


class DivergenceError(SolverError):
    def __init__(self, iteration, alpha):
        self.iteration = iteration
        self.alpha = alpha
        super().__init__(
            f"objective is not finite at iterate {iteration}; "
            f"try a smaller step size than alpha={alpha!r}"
        )


class EmptyModelError(SolverError):
    pass


class ExhaustedGridError(SolverError):
    pass


class DegenerateCurveError(SgsvpError):
    """Raised by find_elbow when the sorted curve has no elbow (it is a
    straight line, or constant). Callers decide what to do."""
