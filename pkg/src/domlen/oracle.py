"""Closed-form solutions used as ground truth for the solvers and as the
factory for the non-uniqueness experiments.

Two families live here. The first is a one-mode family of exact viscous
Burgers solutions obtained by applying u = -2 phi_x / phi to a single
cosine mode of the zero-flux heat equation,

    u(x,t) = (2 k pi / l) * exp(-lam t) sin(k pi x / l)
             / (exp(-lam t) cos(k pi x / l) + a),      lam = k^2 pi^2 / l^2,

well defined whenever |a| > 1. The second is the truncated cosine-series
solution of the zero-flux heat problem itself, with coefficients taken
from the sampled initial profile by trapezoidal quadrature.

Two family members on different intervals l < L share the same initial
profile and the same flux at x=0 whenever their mode ratios align
(k/l == n/L); ``build_counterexample`` constructs such pairs, which is
what makes the length unidentifiable from flux data alone in that regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomlenError, GridError
from .grids import SpatialGrid, SpatialProfile


@dataclass(frozen=True)
class ColeHopfSolution:
    """One-mode exact Burgers solution on (0, length).

    ``mode`` is the cosine mode number and ``offset`` the additive
    constant in the transformed field; |offset| > 1 keeps the denominator
    exp(-lam t) cos(...) + offset away from zero for all x and t >= 0.
    """

    length: float
    mode: int
    offset: float

    def __post_init__(self):
        if not (self.length > 0.0 and math.isfinite(self.length)):
            raise DomlenError(f"length must be positive, got {self.length}")
        if int(self.mode) != self.mode or self.mode < 1:
            raise DomlenError(f"mode must be a positive integer, got {self.mode}")
        if not abs(self.offset) > 1.0:
            raise DomlenError(
                f"|offset| must exceed 1 to keep the solution defined, "
                f"got {self.offset}")
        object.__setattr__(self, "mode", int(self.mode))

    @property
    def decay_rate(self) -> float:
        """lam = mode^2 pi^2 / length^2, the rate of the single heat mode."""
        return (self.mode * math.pi / self.length) ** 2

    @property
    def wavenumber(self) -> float:
        return self.mode * math.pi / self.length


def cole_hopf_u(sol: ColeHopfSolution, x, t):
    """Evaluate the exact velocity field; accepts scalars or arrays."""
    kap = sol.wavenumber
    decay = np.exp(-sol.decay_rate * np.asarray(t, dtype=float))
    x = np.asarray(x, dtype=float)
    num = 2.0 * kap * decay * np.sin(kap * x)
    den = decay * np.cos(kap * x) + sol.offset
    out = num / den
    return float(out) if out.ndim == 0 else out


def cole_hopf_flux0(sol: ColeHopfSolution, t):
    """Exact u_x at x=0: 2 kap^2 exp(-lam t) / (exp(-lam t) + a)."""
    kap = sol.wavenumber
    decay = np.exp(-sol.decay_rate * np.asarray(t, dtype=float))
    out = 2.0 * kap * kap * decay / (decay + sol.offset)
    return float(out) if out.ndim == 0 else out


def initial_profile(sol: ColeHopfSolution, grid: SpatialGrid) -> SpatialProfile:
    """The exact initial datum sampled on a grid of the same length."""
    if grid.length != sol.length:
        raise GridError(f"grid length {grid.length} differs from solution "
                        f"length {sol.length}")
    return SpatialProfile(grid, cole_hopf_u(sol, grid.nodes(), 0.0))


@dataclass(frozen=True)
class CounterExamplePair:
    """Two one-mode solutions on intervals of different lengths that share
    their initial datum on the shorter interval and their flux at x=0."""

    short: ColeHopfSolution
    long: ColeHopfSolution
    m0: int
    n0: int

    def __post_init__(self):
        if not self.short.length < self.long.length:
            raise DomlenError("pair must have short.length < long.length")
        if self.short.mode * self.m0 != self.long.mode * self.n0:
            raise DomlenError("mode/ratio mismatch: need k1*m0 == n1*n0")
        if self.short.offset != self.long.offset:
            raise DomlenError("pair members must share the offset")


def build_counterexample(L: float, m0: int, n0: int, k1: int,
                         a: float) -> CounterExamplePair:
    """Construct the matched pair for lengths l = n0*L/m0 and L.

    Requires m0 > n0 >= 1 and n0 | k1*m0, so that the long-interval mode
    n1 = k1*m0/n0 is an integer; the mode ratios then satisfy
    k1/l == n1/L and both members share the decay rate, the initial datum
    on (0, l), and the flux trace at x=0, for every t.
    """
    if int(m0) != m0 or int(n0) != n0 or int(k1) != k1:
        raise DomlenError("m0, n0, k1 must be integers")
    m0, n0, k1 = int(m0), int(n0), int(k1)
    if not (m0 > n0 >= 1):
        raise DomlenError(f"need m0 > n0 >= 1, got m0={m0}, n0={n0}")
    if k1 < 1:
        raise DomlenError(f"k1 must be a positive integer, got {k1}")
    if (k1 * m0) % n0 != 0:
        raise DomlenError(
            f"n0={n0} does not divide k1*m0={k1 * m0}; the matched mode "
            "would not be an integer")
    n1 = (k1 * m0) // n0
    ell = n0 * L / m0
    return CounterExamplePair(
        short=ColeHopfSolution(ell, k1, a),
        long=ColeHopfSolution(float(L), n1, a),
        m0=m0, n0=n0)


@dataclass(frozen=True)
class NeumannHeatSolution:
    """Truncated cosine-series solution of the zero-flux heat problem.

    The basis is phi_0 = 1/sqrt(l), phi_n = sqrt(2/l) cos(n pi x / l) with
    rates lam_n = n^2 pi^2 / l^2; ``coefficients[n]`` is the projection of
    the initial profile onto phi_n.
    """

    length: float
    order: int
    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=float).copy()
        if coeffs.shape != (self.order + 1,):
            raise DomlenError(f"need {self.order + 1} coefficients, "
                              f"got shape {coeffs.shape}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    def _modes(self):
        n = np.arange(self.order + 1)
        rates = (n * math.pi / self.length) ** 2
        return n, rates

    def value(self, x, t):
        """Series value at (x, t); scalars or arrays, broadcast together."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        t = np.atleast_1d(np.asarray(t, dtype=float))
        n, rates = self._modes()
        amp = np.empty(self.order + 1)
        amp[0] = 1.0 / math.sqrt(self.length)
        amp[1:] = math.sqrt(2.0 / self.length)
        # sum_n c_n e^{-lam_n t} amp_n cos(n pi x / l)
        phase = np.cos(np.outer(x, n * math.pi / self.length))
        decay = np.exp(-np.outer(t, rates))
        out = np.einsum("n,tn,xn->tx", self.coefficients * amp, decay, phase)
        return out[0, 0] if out.size == 1 else np.squeeze(out)

    def flux(self, x, t):
        """Series derivative in x at (x, t), term-by-term."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        t = np.atleast_1d(np.asarray(t, dtype=float))
        n, rates = self._modes()
        amp = np.empty(self.order + 1)
        amp[0] = 0.0
        amp[1:] = -math.sqrt(2.0 / self.length) * n[1:] * math.pi / self.length
        phase = np.sin(np.outer(x, n * math.pi / self.length))
        decay = np.exp(-np.outer(t, rates))
        out = np.einsum("n,tn,xn->tx", self.coefficients * amp, decay, phase)
        return out[0, 0] if out.size == 1 else np.squeeze(out)

    def mean(self, t) -> float:
        """Spatial mean at time t; only the stationary 0-mode contributes."""
        return float(self.coefficients[0] / math.sqrt(self.length))


def neumann_heat_solve(phi0: SpatialProfile, order: int) -> NeumannHeatSolution:
    """Project a sampled initial profile onto the cosine basis.

    Coefficients are trapezoidal quadratures of phi0 * phi_n over the
    profile's grid; the profile must carry at least 4*order nodes so the
    highest mode is resolved.
    """
    if int(order) != order or order < 1:
        raise DomlenError(f"order must be a positive integer, got {order}")
    order = int(order)
    if phi0.grid.node_count < 4 * order:
        raise DomlenError(
            f"profile has {phi0.grid.node_count} nodes; need at least "
            f"{4 * order} to resolve mode {order}")
    ell = phi0.grid.length
    x = phi0.grid.nodes()
    dx = phi0.grid.spacing
    coeffs = np.empty(order + 1)
    coeffs[0] = np.trapezoid(phi0.values / math.sqrt(ell), dx=dx)
    for n in range(1, order + 1):
        basis = math.sqrt(2.0 / ell) * np.cos(n * math.pi * x / ell)
        coeffs[n] = np.trapezoid(phi0.values * basis, dx=dx)
    return NeumannHeatSolution(ell, order, coeffs)


def cole_hopf_forward(u0: SpatialProfile) -> SpatialProfile:
    """Map a velocity profile to the transformed field phi0 = exp(-0.5 int u0).

    Cumulative trapezoidal integration from x=0, then exponentiation, so
    phi0(0) = 1 exactly.
    """
    vals = u0.values
    dx = u0.grid.spacing
    cum = np.empty_like(vals)
    cum[0] = 0.0
    np.cumsum(0.5 * dx * (vals[1:] + vals[:-1]), out=cum[1:])
    return SpatialProfile(u0.grid, np.exp(-0.5 * cum))
