from typing import Optional


class UnsupportedStabilityIndex(Exception):
    def __init__(self, alpha: float):
        self.alpha = alpha
        super().__init__(f"Stability index {alpha} is not supported here")

class NotClosedForm(Exception):
    def __init__(self, alpha: float):
        self.alpha = alpha
        super().__init__(f"No closed form for alpha={alpha}")

class QuadratureNonConvergence(Exception):
    def __init__(self, error: float, tol: float):
        self.error = error
        self.tol = tol
        super().__init__(
            f"Oscillatory quadrature did not converge (error {error:.3e} > tol {tol:.3e})"
        )

class DerivativeMismatch(Exception):
    def __init__(self, quadrature: float, finite_difference: float, tol: float):
        self.quadrature = quadrature
        self.finite_difference = finite_difference
        super().__init__(
            f"Derivative methods disagree: {quadrature!r} vs {finite_difference!r} (tol {tol:.3e})"
        )

class RouteMismatch(Exception):
    def __init__(self, dilated: float, reduced: float, tol: float):
        self.dilated = dilated
        self.reduced = reduced
        super().__init__(
            f"OU kernel routes disagree: {dilated!r} vs {reduced!r} (tol {tol:.3e})"
        )

class GridHeadroomError(Exception):
    def __init__(self, message: str, suggested_half_width: Optional[float] = None):
        self.suggested_half_width = suggested_half_width
        if suggested_half_width is not None:
            message = f"{message} (suggested L={suggested_half_width:.6g})"
        super().__init__(message)

class TailBudgetExceeded(Exception):
    def __init__(self, tail: float, tol: float, suggested_half_width: Optional[float] = None):
        self.tail = tail
        self.tol = tol
        self.suggested_half_width = suggested_half_width
        message = f"Tail mass {tail:.3e} outside the grid exceeds budget {tol:.3e}"
        if suggested_half_width is not None:
            message = f"{message} (suggested L={suggested_half_width:.6g})"
        super().__init__(message)

class GridMismatch(Exception):
    def __init__(self):
        super().__init__("Fields live on different grids")

class NotContinuityPoint(Exception):
    def __init__(self, point):
        self.point = point
        super().__init__(f"{point} is not a continuity point of the initial data")

class UnsupportedDimension(Exception):
    def __init__(self, dim: int, operation: str):
        super().__init__(f"{operation} is not available for dim={dim}")

class UsageError(Exception):
    def __init__(self, message: str):
        super().__init__(message)

class OutOfGridMassWarning(UserWarning):
    def __init__(self, fraction: float, limit: float):
        self.fraction = fraction
        super().__init__(f"{fraction:.3%} of the samples fall outside the grid (limit {limit:.0%})")
