"""Experiment execution: dispatches a parsed config to a forward solve, a
reconstruction, a table reproduction, a convergence study, or a cost scan,
and writes the CSV outputs.

Every output is deterministic for a fixed config and seed: rerunning a job
reproduces each file byte for byte. Wall-clock time lives only in the
returned report, never in the files.
"""

from __future__ import annotations

import dataclasses
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .config import ExperimentConfig, load_case
from .errors import DomlenError
from .grids import BoundaryTrace, SpatialGrid, TimeGrid, Trajectory
from .inverse import (CostSpec, NoiseSpec, ObservationSet, OptResult,
                      evaluate_cost, make_target, minimize, multi_start)
from .oracle import ColeHopfSolution, cole_hopf_u, initial_profile
from .solvers import (BurgersHeatProblem, BurgersProblem, SolverParams,
                      solve_burgers, solve_burgers_heat,
                      solve_variable_density)

TABLE_NOISE_LEVELS = (1.0, 0.1, 0.01, 0.001, 0.0)
TABLE_CASES = {"table1": "case1_1", "table2": "case1_2"}

ORACLE_CELL_LADDER = (100, 200, 400)
ORACLE_DT_FACTOR = 0.5  # dt = factor * dx^2 keeps the march second order


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float) or isinstance(value, np.floating):
        return f"{float(value):.9g}"
    return str(value)


def write_csv(rows: Iterable[Sequence], path, header: Sequence[str]) -> Path:
    """Write rows with a fixed header; floats carry 9 significant digits,
    line endings are LF."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(",".join(str(h) for h in header) + "\n")
            for row in rows:
                handle.write(",".join(_fmt(v) for v in row) + "\n")
    except OSError as exc:
        raise DomlenError(f"cannot write {path}: {exc}") from exc
    return path


def write_plotdata(series: dict[str, Sequence], path) -> Path:
    """Write named columns side by side (first column is the abscissa)."""
    names = list(series)
    columns = [np.asarray(series[n]) for n in names]
    n_rows = len(columns[0])
    for name, col in zip(names, columns):
        if len(col) != n_rows:
            raise DomlenError(f"plot series {name!r} has length {len(col)}, "
                              f"expected {n_rows}")
    rows = zip(*columns)
    return write_csv(rows, path, names)


def trajectory_rows(traj: Trajectory):
    t = traj.time.instants()
    for j in range(traj.time.instant_count):
        yield (t[j], *traj.snapshots[j])


def write_trajectory(traj: Trajectory, path) -> Path:
    header = ["t"] + [f"x{i}" for i in range(traj.space.node_count)]
    return write_csv(trajectory_rows(traj), path, header)


def write_observation(obs: ObservationSet, path) -> Path:
    columns = {"t": obs.time.instants()}
    for name, trace in obs.traces().items():
        columns[name] = trace.values
    return write_plotdata(columns, path)


def write_iterates(results: Sequence[OptResult], path) -> Path:
    rows = []
    for run, res in enumerate(results):
        for it, (length, cost) in enumerate(res.iterates):
            rows.append((run, it, length, cost))
    return write_csv(rows, path, ["run", "iter", "l", "cost"])


def write_results(results: Sequence[OptResult], path) -> Path:
    rows = [(run, r.length, r.cost, r.iterations, r.evaluations,
             r.converged, r.reason.value)
            for run, r in enumerate(results)]
    return write_csv(rows, path, ["run", "L_c", "final_cost", "iterations",
                                  "evaluations", "converged", "reason"])


@dataclass
class RunReport:
    """What a job did: the config it ran, its results, and every file it wrote."""

    config: ExperimentConfig
    mode: str
    results: list[OptResult] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    wall_clock: float = 0.0
    manifest: list[Path] = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return all(r.converged for r in self.results) if self.results else True


def _noise(config: ExperimentConfig) -> NoiseSpec:
    return NoiseSpec(config.noise_percent, config.seed)


def _cost_spec(config: ExperimentConfig) -> CostSpec:
    template = config.template()
    params = config.solver_params()
    target = make_target(template, config.desired_length, params,
                         _noise(config))
    return CostSpec(config.functional(), template, target, params)


def _run_forward(config: ExperimentConfig, out: Path, report: RunReport):
    template = config.template()
    params = config.solver_params()
    problem = template.build(config.desired_length, params)
    if isinstance(problem, BurgersProblem):
        trajs = {"trajectory.csv": solve_burgers(problem, params)}
    elif isinstance(problem, BurgersHeatProblem):
        u, th = solve_burgers_heat(problem, params)
        trajs = {"trajectory.csv": u, "theta_trajectory.csv": th}
    else:
        u, rho = solve_variable_density(problem, params)
        trajs = {"trajectory.csv": u, "rho_trajectory.csv": rho}
    for name, traj in trajs.items():
        report.manifest.append(write_trajectory(traj, out / name))
    obs = template.solve(config.desired_length, params)
    report.manifest.append(write_observation(obs, out / "observation.csv"))
    report.summary["max_abs_u"] = float(
        np.abs(trajs["trajectory.csv"].snapshots).max())


def _run_invert(config: ExperimentConfig, out: Path, report: RunReport):
    spec = _cost_spec(config)
    result = minimize(spec, config.optimizer_config())
    report.results.append(result)
    report.manifest.append(write_observation(spec.target,
                                             out / "observation.csv"))
    report.manifest.append(write_iterates([result], out / "iterates.csv"))
    report.manifest.append(write_results([result], out / "result.csv"))
    report.summary["L_c"] = result.length
    report.summary["final_cost"] = result.cost


def _run_multistart(config: ExperimentConfig, out: Path, report: RunReport):
    spec = _cost_spec(config)
    cfg = config.optimizer_config(start=config.starts[0])
    results = multi_start(spec, config.starts, cfg)
    report.results.extend(results)
    report.manifest.append(write_observation(spec.target,
                                             out / "observation.csv"))
    report.manifest.append(write_iterates(results, out / "iterates.csv"))
    report.manifest.append(write_results(results, out / "result.csv"))
    report.summary["L_c"] = [r.length for r in results]


def _run_scan(config: ExperimentConfig, out: Path, report: RunReport):
    spec = _cost_spec(config)
    lo = config.scan_lo if config.scan_lo is not None else config.lower
    hi = config.scan_hi if config.scan_hi is not None else config.upper
    count = int(math.floor((hi - lo) / config.scan_step + 1e-9)) + 1
    lengths = [lo + i * config.scan_step for i in range(count)]
    costs = [evaluate_cost(spec, l) for l in lengths]
    report.manifest.append(write_csv(zip(lengths, costs), out / "scan.csv",
                                     ["l", "cost"]))
    report.summary["min_cost"] = min(costs)
    report.summary["argmin"] = lengths[costs.index(min(costs))]


def _run_table(config: ExperimentConfig, out: Path, report: RunReport):
    template = config.template()
    params = config.solver_params()
    rows = []
    for index, percent in enumerate(TABLE_NOISE_LEVELS):
        noise = NoiseSpec(percent, config.seed + index)
        target = make_target(template, config.desired_length, params, noise)
        spec = CostSpec(config.functional(), template, target, params)
        result = minimize(spec, config.optimizer_config())
        report.results.append(result)
        rows.append((percent, result.cost, result.iterations, result.length))
    report.manifest.append(write_csv(
        rows, out / "result.csv",
        ["noise_percent", "final_cost", "iterates", "L_c"]))
    report.summary["L_c"] = [row[3] for row in rows]


def _run_oracle_check(config: ExperimentConfig, out: Path, report: RunReport):
    length = config.desired_length if config.desired_length else 4.0
    horizon = config.horizon
    sol = ColeHopfSolution(length, config.oracle_mode, config.oracle_offset)
    rows = []
    errors = []
    for cells in ORACLE_CELL_LADDER:
        sgrid = SpatialGrid(length, cells)
        dx = sgrid.spacing
        steps = max(1, round(horizon / (ORACLE_DT_FACTOR * dx * dx)))
        tgrid = TimeGrid(horizon, steps)
        params = SolverParams(cells, steps)
        u0 = initial_profile(sol, sgrid)
        eta = BoundaryTrace(tgrid, np.zeros(steps + 1))
        problem = BurgersProblem(length, horizon, eta, u0)
        traj = solve_burgers(problem, params)
        mesh_x, mesh_t = np.meshgrid(sgrid.nodes(), tgrid.instants())
        exact = cole_hopf_u(sol, mesh_x, mesh_t)
        err = float(np.abs(traj.snapshots - exact).max())
        order = "" if not errors else math.log2(errors[-1] / err)
        errors.append(err)
        rows.append((cells, steps, dx, tgrid.dt, err, order))
    report.manifest.append(write_csv(
        rows, out / "convergence.csv",
        ["N", "M", "dx", "dt", "linf_error", "order"]))
    report.summary["errors"] = errors
    report.summary["orders"] = [math.log2(a / b)
                                for a, b in zip(errors, errors[1:])]


_MODE_RUNNERS = {
    "forward": _run_forward,
    "invert": _run_invert,
    "multistart": _run_multistart,
    "scan": _run_scan,
    "table": _run_table,
    "oracle_check": _run_oracle_check,
}


def run(config: ExperimentConfig, out_dir=None) -> RunReport:
    """Execute one experiment config and write its outputs."""
    mode = config.mode
    if mode not in _MODE_RUNNERS:
        raise DomlenError(f"unknown mode {mode!r}")
    out = Path(out_dir if out_dir is not None else config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = RunReport(config=config, mode=mode)
    started = time.perf_counter()
    _MODE_RUNNERS[mode](config, out, report)
    report.wall_clock = time.perf_counter() - started
    return report


def reproduce_table(name: str, out_dir=None, seed: int | None = None) -> RunReport:
    """Rebuild one of the two noise tables from its shipped case setup."""
    if name not in TABLE_CASES:
        raise DomlenError(f"unknown table {name!r}; choose from "
                          f"{', '.join(TABLE_CASES)}")
    config = load_case(TABLE_CASES[name])
    config = dataclasses.replace(config, mode="table", table=name)
    if seed is not None:
        config = dataclasses.replace(config, seed=seed)
    return run(config, out_dir)
