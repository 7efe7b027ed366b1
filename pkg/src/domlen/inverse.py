"""Observation assembly, noise injection, misfit functionals, and bounded
scalar minimization over the interval length.

Target observations are generated with the same solver and the same cell
and step counts later used inside the cost loop (the usual synthetic-data
protocol), so at zero noise the cost floor at the true length is exactly
zero and reconstruction accuracy is limited only by the optimizer
tolerances.

The paper-style minimization is done with projected finite-difference
gradient descent (Armijo backtracking, central differences); a
golden-section bracket shrink is available as a derivative-free fallback.
A 1D bound-constrained problem does not warrant anything heavier.
"""

from __future__ import annotations

import dataclasses
import enum
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomlenError, SolverFailure
from .grids import (BoundaryTrace, SpatialGrid, TimeGrid, boundary_flux,
                    l2_time_misfit, sample_space, sample_time)
from .solvers import (BCVariant, BurgersHeatProblem, BurgersProblem,
                      SolverParams, VariableDensityProblem, solve_burgers,
                      solve_burgers_heat, solve_variable_density)

logger = logging.getLogger(__name__)

ARMIJO_C = 1e-4


class System(enum.Enum):
    BURGERS = "burgers"
    BURGERS_HEAT_DD = "burgers_heat_dd"
    BURGERS_HEAT_DN = "burgers_heat_dn"
    VARIABLE_DENSITY = "variable_density"


class Functional(enum.Enum):
    J1 = "J1"    # velocity-flux misfit under the Burgers system
    J2 = "J2"    # velocity-flux plus temperature-flux misfit
    J3 = "J3"    # velocity-flux misfit under the Neumann-temperature system
    JVD = "Jvd"  # velocity-flux plus masked-density misfit


DEFAULT_FUNCTIONAL = {
    System.BURGERS: Functional.J1,
    System.BURGERS_HEAT_DD: Functional.J2,
    System.BURGERS_HEAT_DN: Functional.J3,
    System.VARIABLE_DENSITY: Functional.JVD,
}

_FUNCTIONAL_SYSTEM = {
    Functional.J1: System.BURGERS,
    Functional.J2: System.BURGERS_HEAT_DD,
    Functional.J3: System.BURGERS_HEAT_DN,
    Functional.JVD: System.VARIABLE_DENSITY,
}


@dataclass(frozen=True)
class ObservationSet:
    """Boundary traces extracted from one forward solve.

    ``beta`` is the velocity flux at x=0 and is always present; ``alpha``
    (temperature flux), ``zeta`` (temperature value) and ``gamma``
    (density value masked to the instants with non-positive inflow
    velocity) appear per system.
    """

    time: TimeGrid
    beta: BoundaryTrace
    alpha: Optional[BoundaryTrace] = None
    zeta: Optional[BoundaryTrace] = None
    gamma: Optional[BoundaryTrace] = None

    def __post_init__(self):
        for name, tr in self.traces().items():
            if tr.grid != self.time:
                raise DomlenError(f"trace {name} does not share the "
                                  "observation time grid")

    def traces(self) -> dict[str, BoundaryTrace]:
        out = {"beta": self.beta}
        for name in ("alpha", "zeta", "gamma"):
            tr = getattr(self, name)
            if tr is not None:
                out[name] = tr
        return out


@dataclass(frozen=True)
class NoiseSpec:
    """Multiplicative uniform noise: v -> v * (1 + (percent/100) * xi),
    xi i.i.d. uniform on [-1, 1] from a seeded generator."""

    percent: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.percent < 0.0:
            raise DomlenError(f"noise percent must be >= 0, got {self.percent}")


def add_noise(obs: ObservationSet, noise: NoiseSpec) -> ObservationSet:
    """Perturb every present trace; zero percent returns the input bit-exactly.

    One generator per call, traces consumed in the fixed order beta,
    alpha, zeta, gamma, so identical inputs give identical outputs.
    """
    if noise.percent == 0.0:
        return obs
    rng = np.random.Generator(np.random.PCG64(noise.seed))
    scale = noise.percent / 100.0
    new = {}
    for name in ("beta", "alpha", "zeta", "gamma"):
        tr = getattr(obs, name)
        if tr is None:
            new[name] = None
            continue
        xi = rng.uniform(-1.0, 1.0, tr.values.shape[0])
        new[name] = BoundaryTrace(tr.grid, tr.values * (1.0 + scale * xi))
    return ObservationSet(obs.time, **new)


@dataclass(frozen=True)
class ProblemTemplate:
    """Everything that defines a forward problem except the length.

    Data enter as scalar functions and are sampled onto the grids implied
    by (length, params) when a concrete problem is built.
    """

    system: System
    horizon: float
    eta: Callable[[float], float]
    u0: Callable[[float], float]
    lam_or_chi: Optional[Callable[[float], float]] = None
    theta0: Optional[Callable[[float], float]] = None
    rhobar: Optional[Callable[[float], float]] = None
    rho0: Optional[Callable[[float], float]] = None
    coupling: float = 1.0
    linear: bool = False

    def __post_init__(self):
        if self.system in (System.BURGERS_HEAT_DD, System.BURGERS_HEAT_DN):
            if self.lam_or_chi is None or self.theta0 is None:
                raise DomlenError(f"{self.system.value} needs lam_or_chi and theta0")
        if self.system is System.VARIABLE_DENSITY:
            if self.rhobar is None or self.rho0 is None:
                raise DomlenError("variable_density needs rhobar and rho0")

    def time_grid(self, params: SolverParams) -> TimeGrid:
        return TimeGrid(self.horizon, params.steps)

    def build(self, length: float, params: SolverParams):
        """Sample the data and assemble the concrete problem at ``length``."""
        sgrid = SpatialGrid(length, params.cells)
        tgrid = self.time_grid(params)
        eta = sample_time(self.eta, tgrid)
        u0 = sample_space(self.u0, sgrid)
        if self.system is System.BURGERS:
            return BurgersProblem(length, self.horizon, eta, u0,
                                  linear=self.linear)
        if self.system in (System.BURGERS_HEAT_DD, System.BURGERS_HEAT_DN):
            variant = (BCVariant.DIRICHLET_DIRICHLET
                       if self.system is System.BURGERS_HEAT_DD
                       else BCVariant.DIRICHLET_NEUMANN)
            return BurgersHeatProblem(
                length, self.horizon, self.coupling, variant, eta,
                sample_time(self.lam_or_chi, tgrid),
                u0, sample_space(self.theta0, sgrid), linear=self.linear)
        return VariableDensityProblem(
            length, self.horizon, eta, sample_time(self.rhobar, tgrid),
            u0, sample_space(self.rho0, sgrid))

    def solve(self, length: float, params: SolverParams) -> ObservationSet:
        """Forward-solve at ``length`` and extract this system's observations."""
        problem = self.build(length, params)
        if self.system is System.BURGERS:
            traj = solve_burgers(problem, params)
            return ObservationSet(traj.time, boundary_flux(traj))
        if self.system is System.BURGERS_HEAT_DD:
            u, th = solve_burgers_heat(problem, params)
            return ObservationSet(u.time, boundary_flux(u),
                                  alpha=boundary_flux(th))
        if self.system is System.BURGERS_HEAT_DN:
            u, th = solve_burgers_heat(problem, params)
            return ObservationSet(u.time, boundary_flux(u),
                                  zeta=th.left_values())
        u, rho = solve_variable_density(problem, params)
        ubar = problem.ubar.values
        masked = np.where(ubar <= 0.0, rho.snapshots[:, 0], 0.0)
        return ObservationSet(u.time, boundary_flux(u),
                              gamma=BoundaryTrace(u.time, masked))


def make_target(template: ProblemTemplate, length: float, params: SolverParams,
                noise: NoiseSpec = NoiseSpec()) -> ObservationSet:
    """Synthesize the observation set at the desired length, then perturb it."""
    return add_noise(template.solve(length, params), noise)


@dataclass(frozen=True)
class CostSpec:
    """A misfit functional bound to a problem template and a fixed target."""

    functional: Functional
    template: ProblemTemplate
    target: ObservationSet
    params: SolverParams

    def __post_init__(self):
        want = _FUNCTIONAL_SYSTEM[self.functional]
        if self.template.system is not want:
            raise DomlenError(f"functional {self.functional.value} runs under "
                              f"{want.value}, template is {self.template.system.value}")
        if self.target.time != self.template.time_grid(self.params):
            raise DomlenError("target traces do not match the template time grid")
        for name in _functional_traces(self.functional):
            if getattr(self.target, name) is None:
                raise DomlenError(f"functional {self.functional.value} needs "
                                  f"target trace {name!r}")


def _functional_traces(functional: Functional) -> tuple[str, ...]:
    if functional is Functional.J2:
        return ("beta", "alpha")
    if functional is Functional.JVD:
        return ("beta", "gamma")
    return ("beta",)


def evaluate_cost(spec: CostSpec, length: float) -> float:
    """Half the summed squared-L2 boundary misfits at a candidate length.

    Solver aborts are reported as an infinite cost so a line search can
    retreat instead of dying.
    """
    if not (length > 0.0 and math.isfinite(length)):
        raise DomlenError(f"candidate length must be positive, got {length}")
    try:
        obs = spec.template.solve(length, spec.params)
    except SolverFailure as exc:
        logger.warning("forward solve failed at length %.6g (%s); "
                       "reporting infinite cost", length, exc)
        return math.inf
    total = 0.0
    for name in _functional_traces(spec.functional):
        total += l2_time_misfit(getattr(obs, name), getattr(spec.target, name))
    return 0.5 * total


class Method(enum.Enum):
    FD_GRADIENT_DESCENT = "fd_gradient_descent"
    GOLDEN_SECTION = "golden_section"


class StopReason(enum.Enum):
    COST_TOL = "cost_tol"
    STEP_TOL = "step_tol"
    INTERVAL_TOL = "interval_tol"
    MAX_ITERS = "max_iters"
    FAILED = "failed"


@dataclass(frozen=True)
class OptimizerConfig:
    lower: float
    upper: float
    start: float
    method: Method = Method.FD_GRADIENT_DESCENT
    tol_step: float = 1e-6
    tol_cost: float = 1e-14
    max_iters: int = 100
    fd_step: float = 1e-4

    def __post_init__(self):
        if not (self.lower < self.start < self.upper):
            raise DomlenError(f"need lower < start < upper, got "
                              f"{self.lower}, {self.start}, {self.upper}")
        if self.fd_step <= 0.0:
            raise DomlenError("fd_step must be positive")


@dataclass(frozen=True)
class OptResult:
    """Outcome of one bounded scalar minimization."""

    length: float
    cost: float
    iterates: tuple[tuple[float, float], ...]
    evaluations: int
    converged: bool
    reason: StopReason

    @property
    def iterations(self) -> int:
        return len(self.iterates)


def _fd_gradient_descent(fn: Callable[[float], float],
                         cfg: OptimizerConfig) -> OptResult:
    h = cfg.fd_step
    lo, hi = cfg.lower + h, cfg.upper - h
    # clamp every trial displacement to a tenth of the interval so a
    # descent run stays inside the attraction basin of its start; the
    # landscapes here can hold several minima
    disp_cap = 0.1 * (cfg.upper - cfg.lower)
    evals = 0

    def f(x: float) -> float:
        nonlocal evals
        evals += 1
        return fn(x)

    x = min(max(cfg.start, lo), hi)
    fx = f(x)
    iterates = [(x, fx)]
    alpha = None
    reason, converged = StopReason.MAX_ITERS, False
    for _ in range(cfg.max_iters):
        if fx < cfg.tol_cost:
            reason, converged = StopReason.COST_TOL, True
            break
        fp, fm = f(x + h), f(x - h)
        if math.isfinite(fp) and math.isfinite(fm):
            g = (fp - fm) / (2.0 * h)
        elif math.isfinite(fm):
            g = (fx - fm) / h
        elif math.isfinite(fp):
            g = (fp - fx) / h
        else:
            reason, converged = StopReason.FAILED, False
            break
        if g == 0.0:
            reason, converged = StopReason.STEP_TOL, True
            break
        if alpha is None:
            alpha = disp_cap / abs(g)
        else:
            alpha = min(2.0 * alpha, disp_cap / abs(g))
        accepted = False
        step = 0.0
        while True:
            xt = min(max(x - alpha * g, lo), hi)
            step = xt - x
            if abs(step) < cfg.tol_step:
                break
            ft = f(xt)
            if ft <= fx + ARMIJO_C * g * step:
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            reason, converged = StopReason.STEP_TOL, True
            break
        x, fx = xt, ft
        iterates.append((x, fx))
    return OptResult(x, fx, tuple(iterates), evals, converged, reason)


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_section(fn: Callable[[float], float],
                    cfg: OptimizerConfig) -> OptResult:
    evals = 0

    def f(x: float) -> float:
        nonlocal evals
        evals += 1
        return fn(x)

    a, b = cfg.lower, cfg.upper
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    iterates = [(c, fc), (d, fd)]
    reason, converged = StopReason.MAX_ITERS, False
    for _ in range(cfg.max_iters):
        if min(fc, fd) < cfg.tol_cost:
            reason, converged = StopReason.COST_TOL, True
            break
        if b - a <= cfg.tol_step:
            reason, converged = StopReason.INTERVAL_TOL, True
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
            iterates.append((c, fc))
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
            iterates.append((d, fd))
    if fc < fd:
        x, fx = c, fc
    else:
        x, fx = d, fd
    return OptResult(x, fx, tuple(iterates), evals, converged, reason)


def minimize_scalar(fn: Callable[[float], float],
                    cfg: OptimizerConfig) -> OptResult:
    """Minimize an arbitrary scalar function on [lower, upper]."""
    if cfg.method is Method.FD_GRADIENT_DESCENT:
        return _fd_gradient_descent(fn, cfg)
    return _golden_section(fn, cfg)


def minimize(spec: CostSpec, cfg: OptimizerConfig) -> OptResult:
    """Reconstruct the interval length by minimizing the misfit cost."""
    return minimize_scalar(lambda length: evaluate_cost(spec, length), cfg)


def multi_start(spec: CostSpec, starts: Sequence[float],
                cfg: OptimizerConfig) -> list[OptResult]:
    """Independent minimizations from several starts, results in order."""
    out = []
    for s in starts:
        run_cfg = dataclasses.replace(cfg, start=float(s))
        out.append(minimize(spec, run_cfg))
    return out
