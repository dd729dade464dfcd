"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input is out of range; ``field`` names the offending parameter."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ConvergenceError(RuntimeError):
    """Quadrature did not reach the requested tolerance within its budget."""

    def __init__(self, message: str, best_estimate: float, achieved_rel_tol: float):
        self.best_estimate = best_estimate
        self.achieved_rel_tol = achieved_rel_tol
        super().__init__(
            f"{message} (best estimate {best_estimate:.6g}, "
            f"achieved rel. tol {achieved_rel_tol:.3g})"
        )


class UsageError(RuntimeError):
    """An operation was called on an object in the wrong state."""


class SaturationError(OverflowError):
    """A Monte Carlo count accumulator would overflow."""


class UndefinedGapError(ValueError):
    """The shot-noise gap is undefined for a zero mean."""
