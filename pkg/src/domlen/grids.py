"""Grids, sampled fields, and the small linear-algebra and quadrature
kernels shared by every solver.

Grids are uniform with a fixed cell count, so the spacing scales with the
interval length. That choice keeps the boundary-misfit cost a smooth
function of the length during optimization; refining by adding cells would
introduce staircase jumps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import backend
from .errors import GridError, ZeroPivotError


def _frozen_array(values, expected_len: int, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != expected_len:
        raise GridError(f"{what} must be a 1-d array of length {expected_len}, "
                        f"got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise GridError(f"{what} contains non-finite entries")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform nodes x_i = i*length/cells on [0, length], i = 0..cells."""

    length: float
    cells: int

    def __post_init__(self):
        if not (self.length > 0.0 and np.isfinite(self.length)):
            raise GridError(f"grid length must be positive, got {self.length}")
        if int(self.cells) != self.cells or self.cells < 1:
            raise GridError(f"cell count must be a positive integer, got {self.cells}")
        object.__setattr__(self, "cells", int(self.cells))

    @property
    def spacing(self) -> float:
        return self.length / self.cells

    @property
    def node_count(self) -> int:
        return self.cells + 1

    def nodes(self) -> np.ndarray:
        # linspace pins both endpoints exactly
        return np.linspace(0.0, self.length, self.cells + 1)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform instants t_j = j*horizon/steps on [0, horizon], j = 0..steps."""

    horizon: float
    steps: int

    def __post_init__(self):
        if not (self.horizon > 0.0 and np.isfinite(self.horizon)):
            raise GridError(f"time horizon must be positive, got {self.horizon}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise GridError(f"step count must be a positive integer, got {self.steps}")
        object.__setattr__(self, "steps", int(self.steps))

    @property
    def dt(self) -> float:
        return self.horizon / self.steps

    @property
    def instant_count(self) -> int:
        return self.steps + 1

    def instants(self) -> np.ndarray:
        return np.linspace(0.0, self.horizon, self.steps + 1)


@dataclass(frozen=True)
class BoundaryTrace:
    """A boundary time series aligned to a TimeGrid (one value per instant)."""

    grid: TimeGrid
    values: np.ndarray = field(compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "values",
            _frozen_array(self.values, self.grid.instant_count, "trace values"))


@dataclass(frozen=True)
class SpatialProfile:
    """A spatial field aligned to a SpatialGrid (one value per node)."""

    grid: SpatialGrid
    values: np.ndarray = field(compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "values",
            _frozen_array(self.values, self.grid.node_count, "profile values"))


@dataclass(frozen=True)
class Trajectory:
    """Full space-time solution of one field.

    Row j of ``snapshots`` is the field at instant t_j; row 0 is the
    sampled initial profile and, for Dirichlet fields, the boundary
    columns carry the sampled boundary data.
    """

    space: SpatialGrid
    time: TimeGrid
    snapshots: np.ndarray = field(compare=False)

    def __post_init__(self):
        arr = np.asarray(self.snapshots, dtype=float)
        want = (self.time.instant_count, self.space.node_count)
        if arr.shape != want:
            raise GridError(f"snapshot array must have shape {want}, got {arr.shape}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "snapshots", arr)

    def left_values(self) -> BoundaryTrace:
        """The field value at x=0 over time."""
        return BoundaryTrace(self.time, self.snapshots[:, 0])

    def initial_profile(self) -> SpatialProfile:
        return SpatialProfile(self.space, self.snapshots[0])


def tridiag_solve(lower, diag, upper, rhs) -> np.ndarray:
    """Solve the tridiagonal system in a single elimination pass.

    ``diag`` and ``rhs`` have length n >= 1, ``lower``/``upper`` length
    n-1. Intended for the diagonally dominant systems the schemes here
    assemble; a vanishing pivot is rejected because it signals a
    non-dominant system (a scheme bug or resolution failure), not a
    condition to recover from.
    """
    diag = np.ascontiguousarray(diag, dtype=float)
    lower = np.ascontiguousarray(lower, dtype=float)
    upper = np.ascontiguousarray(upper, dtype=float)
    rhs = np.ascontiguousarray(rhs, dtype=float)
    n = diag.shape[0]
    if n < 1:
        raise GridError("empty diagonal")
    if lower.shape[0] != n - 1 or upper.shape[0] != n - 1:
        raise GridError(f"off-diagonals must have length {n - 1}, got "
                        f"{lower.shape[0]} and {upper.shape[0]}")
    if rhs.shape[0] != n:
        raise GridError(f"rhs must have length {n}, got {rhs.shape[0]}")
    x, ok = backend.kernels().thomas(lower, diag, upper, rhs)
    if not ok:
        raise ZeroPivotError("zero pivot in tridiagonal elimination")
    return x


def sample_time(f: Callable[[float], float], grid: TimeGrid) -> BoundaryTrace:
    """Sample a scalar function of t on the grid instants."""
    vals = np.array([float(f(t)) for t in grid.instants()])
    if not np.isfinite(vals).all():
        raise GridError("time sampling produced non-finite values")
    return BoundaryTrace(grid, vals)


def sample_space(f: Callable[[float], float], grid: SpatialGrid) -> SpatialProfile:
    """Sample a scalar function of x on the grid nodes."""
    vals = np.array([float(f(x)) for x in grid.nodes()])
    if not np.isfinite(vals).all():
        raise GridError("space sampling produced non-finite values")
    return SpatialProfile(grid, vals)


def boundary_flux(traj: Trajectory, side: str = "left") -> BoundaryTrace:
    """Spatial derivative of the field at the boundary, one value per instant.

    Second-order one-sided stencil, (-3w0 + 4w1 - w2)/(2 dx) at x=0 and its
    mirror at x=length; exact for fields quadratic in x. The flux
    observation drives the whole reconstruction, so a first-order stencil
    would pollute the attainable cost floor.
    """
    if traj.space.cells < 3:
        raise GridError("boundary flux needs at least 3 cells")
    s = traj.snapshots
    inv = 1.0 / (2.0 * traj.space.spacing)
    if side == "left":
        vals = (-3.0 * s[:, 0] + 4.0 * s[:, 1] - s[:, 2]) * inv
    elif side == "right":
        vals = (3.0 * s[:, -1] - 4.0 * s[:, -2] + s[:, -3]) * inv
    else:
        raise GridError(f"side must be 'left' or 'right', got {side!r}")
    return BoundaryTrace(traj.time, vals)


def l2_time_misfit(a: BoundaryTrace, b: BoundaryTrace) -> float:
    """Squared L2(0,T) distance between two traces on the same grid,
    by the composite trapezoidal rule."""
    if a.grid != b.grid:
        raise GridError(f"traces live on different grids: {a.grid} vs {b.grid}")
    d = a.values - b.values
    sq = d * d
    return float((sq[0] + sq[-1]) * 0.5 + sq[1:-1].sum()) * a.grid.dt
