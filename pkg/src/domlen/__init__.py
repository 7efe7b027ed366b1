"""Forward solvers and length reconstruction for 1D viscous-flow models.

The library solves Burgers-type systems on an interval (0, l), extracts
boundary observations, and recovers l by bounded scalar minimization of a
boundary-misfit cost. Exact one-mode solutions and a zero-flux spectral
heat solution serve as ground truth, including matched pairs of lengths
whose observations coincide (the non-uniqueness regime).
"""

from .backend import active as active_backend, available as available_backends, use as use_backend
from .errors import (BlowUpError, CFLResolutionWarning, CFLViolationError,
                     CompatibilityWarning, ConfigError, DensityBoundsError,
                     DomlenError, ExpressionError, GridError, SolverFailure,
                     ZeroPivotError)
from .grids import (BoundaryTrace, SpatialGrid, SpatialProfile, TimeGrid,
                    Trajectory, boundary_flux, l2_time_misfit, sample_space,
                    sample_time, tridiag_solve)
from .oracle import (ColeHopfSolution, CounterExamplePair,
                     NeumannHeatSolution, build_counterexample,
                     cole_hopf_flux0, cole_hopf_forward, cole_hopf_u,
                     initial_profile, neumann_heat_solve)
from .solvers import (BCVariant, BurgersHeatProblem, BurgersProblem,
                      SolverParams, VariableDensityProblem, solve_burgers,
                      solve_burgers_heat, solve_variable_density)
from .inverse import (CostSpec, Functional, Method, NoiseSpec,
                      ObservationSet, OptResult, OptimizerConfig,
                      ProblemTemplate, StopReason, System, add_noise,
                      evaluate_cost, make_target, minimize, minimize_scalar,
                      multi_start)
from .expressions import Expression, parse_expression
from .config import (ExperimentConfig, list_cases, load_case, load_config,
                     parse_config, serialize_config)
from .runner import RunReport, reproduce_table, run, write_csv, write_plotdata

__version__ = "0.1.0"
