"""Exception and warning types shared across the package."""


class DomlenError(Exception):
    """Base class for all package errors."""


class GridError(DomlenError):
    """Invalid grid construction or mismatched grids."""


class ZeroPivotError(DomlenError):
    """Tridiagonal elimination hit a zero pivot (non-dominant system)."""


class SolverFailure(DomlenError):
    """Base class for forward-solver aborts."""


class BlowUpError(SolverFailure):
    """The discrete state became non-finite."""

    def __init__(self, step: int, field: str = "u"):
        self.step = step
        self.field = field
        super().__init__(f"non-finite {field}-state at time step {step}")


class CFLViolationError(SolverFailure):
    """Explicit transport step exceeded its Courant limit."""

    def __init__(self, step: int, courant: float):
        self.step = step
        self.courant = courant
        super().__init__(
            f"upwind Courant number {courant:.3g} > 1 at step {step}; "
            "increase the step count"
        )


class DensityBoundsError(SolverFailure):
    """Transported density left its admissible min-max range."""

    def __init__(self, step: int):
        self.step = step
        super().__init__(f"density left its inflow/initial range at step {step}")


class ConfigError(DomlenError):
    """One or more experiment-configuration errors, collected together."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ExpressionError(DomlenError):
    """Malformed data-expression string."""


class CFLResolutionWarning(UserWarning):
    """Advection resolution heuristic exceeded for an implicit solve."""


class CompatibilityWarning(UserWarning):
    """Initial profile does not match the boundary data at a corner."""
