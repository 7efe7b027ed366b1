"""Time-stepping solvers for the three governing systems.

All three use the same linearly implicit core: Crank-Nicolson diffusion
with the transport coefficient frozen at the previous level, one
tridiagonal solve per field per step. At the data magnitudes handled here
(|u| of order 5) a Newton iteration would add cost without moving the
reconstruction accuracy, and keeping each cost evaluation to a single
sweep matters because the optimizer calls the solver hundreds of times.

The coupled system is operator-split, temperature first, then velocity
with the fresh temperature as source; the splitting error is first order
in dt and sits below the reconstruction tolerances at the default step
counts. Density transport is explicit first-order upwind, which respects
the transport maximum principle under its Courant limit.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

from . import backend
from .errors import (BlowUpError, CFLResolutionWarning, CFLViolationError,
                     CompatibilityWarning, DensityBoundsError, DomlenError)
from .grids import BoundaryTrace, SpatialGrid, SpatialProfile, TimeGrid, Trajectory
from .kernels_numpy import DENSITY_BOUNDS, NONFINITE_THETA, NONFINITE_U, UPWIND_CFL

# heuristic advection-resolution limit for the implicit schemes; the
# explicit upwind sweep has the hard limit 1 instead
IMPLICIT_COURANT_LIMIT = 2.0

COMPAT_TOL = 1e-8


@dataclass(frozen=True)
class SolverParams:
    """Discretization: fixed cell count (spacing scales with length)."""

    cells: int = 200
    steps: int = 1000
    cfl_guard: bool = True

    def __post_init__(self):
        if self.cells < 3:
            raise DomlenError(f"need at least 3 cells, got {self.cells}")
        if self.steps < 1:
            raise DomlenError(f"need at least 1 step, got {self.steps}")


class BCVariant(enum.Enum):
    DIRICHLET_DIRICHLET = "dirichlet_dirichlet"
    DIRICHLET_NEUMANN = "dirichlet_neumann"


def _check_corner_compat(u0: SpatialProfile, eta: BoundaryTrace, label: str):
    # incompatible corners are smoothed by the parabolic flow; warn only
    if (abs(u0.values[0] - eta.values[0]) > COMPAT_TOL
            or abs(u0.values[-1]) > COMPAT_TOL):
        warnings.warn(
            f"{label}: initial profile does not match the boundary data at "
            "a corner; proceeding (parabolic smoothing applies)",
            CompatibilityWarning, stacklevel=3)


@dataclass(frozen=True)
class BurgersProblem:
    """u_t - u_xx + u u_x = 0 on (0, length) x (0, horizon), with
    u(0,t) = eta(t), u(length,t) = 0, u(x,0) = u0(x).

    ``linear`` drops the transport term, making the solve exactly
    superposable in (u0, eta).
    """

    length: float
    horizon: float
    eta: BoundaryTrace
    u0: SpatialProfile
    linear: bool = False

    def __post_init__(self):
        if self.u0.grid.length != self.length:
            raise DomlenError("u0 grid length differs from problem length")
        if self.eta.grid.horizon != self.horizon:
            raise DomlenError("eta grid horizon differs from problem horizon")
        _check_corner_compat(self.u0, self.eta, "BurgersProblem")


@dataclass(frozen=True)
class BurgersHeatProblem:
    """The coupled system u_t - u_xx + u u_x = k theta with a transported
    temperature.

    DIRICHLET_DIRICHLET: theta(0,t) = lambda(t), theta(l,t) = 0 and no
    gradient-squared source. DIRICHLET_NEUMANN: theta_x(0,t) = chi(t),
    theta_x(l,t) = 0 and the source u_x^2 is active. ``linear`` drops
    u u_x, u theta_x and the source.
    """

    length: float
    horizon: float
    coupling: float
    bc_variant: BCVariant
    eta: BoundaryTrace
    lam_or_chi: BoundaryTrace
    u0: SpatialProfile
    theta0: SpatialProfile
    linear: bool = False
    dissipation_source: bool | None = None

    def __post_init__(self):
        for prof in (self.u0, self.theta0):
            if prof.grid.length != self.length:
                raise DomlenError("profile grid length differs from problem length")
        for tr in (self.eta, self.lam_or_chi):
            if tr.grid.horizon != self.horizon:
                raise DomlenError("trace grid horizon differs from problem horizon")
        if self.dissipation_source is None:
            object.__setattr__(self, "dissipation_source",
                               self.bc_variant is BCVariant.DIRICHLET_NEUMANN)
        elif (self.dissipation_source
              and self.bc_variant is BCVariant.DIRICHLET_DIRICHLET):
            raise DomlenError("the Dirichlet-Dirichlet system carries no "
                              "gradient-squared source")
        _check_corner_compat(self.u0, self.eta, "BurgersHeatProblem")


@dataclass(frozen=True)
class VariableDensityProblem:
    """rho (u_t + u u_x) - u_xx = 0 coupled to rho_t + u rho_x = 0.

    The inflow value rhobar applies at x=0 only while ubar > 0; density
    must start strictly positive and inflow data non-negative.
    """

    length: float
    horizon: float
    ubar: BoundaryTrace
    rhobar: BoundaryTrace
    u0: SpatialProfile
    rho0: SpatialProfile

    def __post_init__(self):
        for prof in (self.u0, self.rho0):
            if prof.grid.length != self.length:
                raise DomlenError("profile grid length differs from problem length")
        for tr in (self.ubar, self.rhobar):
            if tr.grid.horizon != self.horizon:
                raise DomlenError("trace grid horizon differs from problem horizon")
        if self.rho0.values.min() <= 0.0:
            raise DomlenError("initial density must be strictly positive")
        if self.rhobar.values.min() < 0.0:
            raise DomlenError("inflow density must be non-negative")
        _check_corner_compat(self.u0, self.ubar, "VariableDensityProblem")


def _grids(length: float, horizon: float, params: SolverParams):
    return SpatialGrid(length, params.cells), TimeGrid(horizon, params.steps)


def _require_shapes(params: SolverParams, profiles, traces):
    for p in profiles:
        if p.grid.cells != params.cells:
            raise DomlenError(f"profile sampled on {p.grid.cells} cells but "
                              f"params request {params.cells}")
    for t in traces:
        if t.grid.steps != params.steps:
            raise DomlenError(f"trace sampled on {t.grid.steps} steps but "
                              f"params request {params.steps}")


def _warn_courant(max_c: float, guard: bool, label: str):
    if guard and max_c > IMPLICIT_COURANT_LIMIT:
        warnings.warn(
            f"{label}: advection Courant number reached {max_c:.3g} "
            f"(heuristic limit {IMPLICIT_COURANT_LIMIT:g}); the implicit "
            "scheme remains stable but the step count is small for this "
            "velocity magnitude",
            CFLResolutionWarning, stacklevel=3)


def solve_burgers(problem: BurgersProblem, params: SolverParams) -> Trajectory:
    """March the Burgers system and return the full trajectory."""
    _require_shapes(params, (problem.u0,), (problem.eta,))
    sgrid, tgrid = _grids(problem.length, problem.horizon, params)
    u, status, bad, max_c = backend.kernels().burgers_loop(
        problem.u0.values, problem.eta.values, sgrid.spacing, tgrid.dt,
        1.0, problem.linear)
    if status == NONFINITE_U:
        raise BlowUpError(bad, "u")
    _warn_courant(max_c, params.cfl_guard, "solve_burgers")
    return Trajectory(sgrid, tgrid, u)


def solve_burgers_heat(problem: BurgersHeatProblem,
                       params: SolverParams) -> tuple[Trajectory, Trajectory]:
    """March the coupled system; returns (velocity, temperature)."""
    _require_shapes(params, (problem.u0, problem.theta0),
                    (problem.eta, problem.lam_or_chi))
    sgrid, tgrid = _grids(problem.length, problem.horizon, params)
    neumann = problem.bc_variant is BCVariant.DIRICHLET_NEUMANN
    u, th, status, bad, max_c = backend.kernels().burgers_heat_loop(
        problem.u0.values, problem.theta0.values, problem.eta.values,
        problem.lam_or_chi.values, problem.coupling, sgrid.spacing, tgrid.dt,
        neumann, bool(problem.dissipation_source), problem.linear)
    if status == NONFINITE_THETA:
        raise BlowUpError(bad, "theta")
    if status == NONFINITE_U:
        raise BlowUpError(bad, "u")
    _warn_courant(max_c, params.cfl_guard, "solve_burgers_heat")
    return Trajectory(sgrid, tgrid, u), Trajectory(sgrid, tgrid, th)


def solve_variable_density(problem: VariableDensityProblem,
                           params: SolverParams) -> tuple[Trajectory, Trajectory]:
    """March the variable-density system; returns (velocity, density)."""
    _require_shapes(params, (problem.u0, problem.rho0),
                    (problem.ubar, problem.rhobar))
    sgrid, tgrid = _grids(problem.length, problem.horizon, params)
    u, rho, status, bad, max_c = backend.kernels().vardensity_loop(
        problem.u0.values, problem.rho0.values, problem.ubar.values,
        problem.rhobar.values, sgrid.spacing, tgrid.dt, params.cfl_guard)
    if status == UPWIND_CFL:
        raise CFLViolationError(bad, max_c)
    if status == DENSITY_BOUNDS:
        raise DensityBoundsError(bad)
    if status == NONFINITE_U:
        raise BlowUpError(bad, "u")
    return Trajectory(sgrid, tgrid, u), Trajectory(sgrid, tgrid, rho)
