"""The numba kernels must agree with the pure-numpy fallback."""

import math

import numpy as np
import pytest

from domlen import backend
from domlen import kernels_numpy

numba_kernels = pytest.importorskip("domlen.kernels_numba")


@pytest.fixture
def restore_backend():
    previous = backend.active()
    yield
    backend.use(previous)


def test_both_backends_available():
    assert set(backend.available()) == {"numba", "numpy"}


def test_use_switches(restore_backend):
    backend.use("numpy")
    assert backend.kernels() is kernels_numpy
    backend.use("numba")
    assert backend.kernels() is numba_kernels


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        backend.use("fortran")


def test_thomas_agrees():
    rng = np.random.default_rng(11)
    for n in (1, 2, 5, 64, 200):
        lower = rng.uniform(-1, 1, n - 1)
        upper = rng.uniform(-1, 1, n - 1)
        diag = np.sign(rng.normal(size=n)) * (2.5 + rng.uniform(0, 1, n))
        rhs = rng.uniform(-5, 5, n)
        x_np, ok_np = kernels_numpy.thomas(lower, diag, upper, rhs)
        x_nb, ok_nb = numba_kernels.thomas(lower, diag, upper, rhs)
        assert ok_np and ok_nb
        assert np.array_equal(x_np, x_nb)


def _data(cells, steps, horizon=1.0, length=2.0):
    x = np.linspace(0.0, length, cells + 1)
    t = np.linspace(0.0, horizon, steps + 1)
    dx = length / cells
    dt = horizon / steps
    return x, t, dx, dt


def test_burgers_loop_agrees():
    x, t, dx, dt = _data(60, 150)
    u0 = 0.3 * np.sin(math.pi * x / 2.0)
    eta = 0.5 * np.sin(3.0 * t)
    u0[0] = eta[0]
    a = kernels_numpy.burgers_loop(u0, eta, dx, dt, 1.0, False)
    b = numba_kernels.burgers_loop(u0, eta, dx, dt, 1.0, False)
    assert a[1] == b[1] == 0
    assert np.allclose(a[0], b[0], rtol=1e-13, atol=1e-15)
    assert a[3] == pytest.approx(b[3], rel=1e-13)


@pytest.mark.parametrize("neumann,dissipation", [(False, False),
                                                 (True, True)])
def test_burgers_heat_loop_agrees(neumann, dissipation):
    x, t, dx, dt = _data(60, 150)
    u0 = 0.1 * x * (2.0 - x)
    th0 = 0.1 * (1.0 + x * x * (x - 3.0))
    eta = np.sin(t)
    lam = 0.2 * np.cos(t) * np.sin(t)
    u0[0] = eta[0]
    a = kernels_numpy.burgers_heat_loop(u0, th0, eta, lam, 1.0, dx, dt,
                                        neumann, dissipation, False)
    b = numba_kernels.burgers_heat_loop(u0, th0, eta, lam, 1.0, dx, dt,
                                        neumann, dissipation, False)
    assert a[2] == b[2] == 0
    assert np.allclose(a[0], b[0], rtol=1e-13, atol=1e-15)
    assert np.allclose(a[1], b[1], rtol=1e-13, atol=1e-15)


def test_vardensity_loop_agrees():
    x, t, dx, dt = _data(60, 400)
    u0 = np.zeros_like(x)
    rho0 = 1.2 + 0.4 * np.sin(2.0 * x)
    ubar = np.sin(3.0 * t)
    rhobar = np.full_like(t, 1.3)
    a = kernels_numpy.vardensity_loop(u0, rho0, ubar, rhobar, dx, dt, True)
    b = numba_kernels.vardensity_loop(u0, rho0, ubar, rhobar, dx, dt, True)
    assert a[2] == b[2] == 0
    assert np.allclose(a[0], b[0], rtol=1e-13, atol=1e-15)
    assert np.allclose(a[1], b[1], rtol=1e-13, atol=1e-15)


def test_solver_results_match_across_backends(restore_backend):
    from domlen.grids import sample_space, sample_time, SpatialGrid, TimeGrid
    from domlen.solvers import BurgersProblem, SolverParams, solve_burgers

    tgrid, sgrid = TimeGrid(1.0, 200), SpatialGrid(2.0, 80)
    p = BurgersProblem(2.0, 1.0,
                       sample_time(lambda t: 0.4 * math.sin(t), tgrid),
                       sample_space(lambda x: 0.0, sgrid))
    params = SolverParams(80, 200)
    backend.use("numpy")
    reference = solve_burgers(p, params).snapshots
    backend.use("numba")
    compiled = solve_burgers(p, params).snapshots
    assert np.allclose(reference, compiled, rtol=1e-13, atol=1e-15)
