import math

import numpy as np
import pytest

from domlen.errors import DomlenError
from domlen.grids import SpatialGrid, SpatialProfile
from domlen.oracle import (ColeHopfSolution, build_counterexample,
                           cole_hopf_flux0, cole_hopf_forward, cole_hopf_u,
                           initial_profile, neumann_heat_solve)

SOL_4 = ColeHopfSolution(4.0, 2, 2.0)


class TestColeHopfSolution:
    def test_offset_bound_enforced(self):
        for bad in (1.0, -1.0, 0.5, 0.0):
            with pytest.raises(DomlenError):
                ColeHopfSolution(4.0, 2, bad)

    def test_boundary_value_zero(self):
        for t in (0.0, 0.3, 2.0):
            assert cole_hopf_u(SOL_4, 0.0, t) == 0.0

    def test_right_boundary_zero(self):
        # sin(k pi) vanishes so the right Dirichlet condition holds too
        assert abs(cole_hopf_u(SOL_4, 4.0, 0.5)) < 1e-15

    def test_point_value(self):
        # (2*2*pi/4) sin(pi/2) / (cos(pi/2) + 2) = pi/2 at x=1, t=0
        assert cole_hopf_u(SOL_4, 1.0, 0.0) == pytest.approx(math.pi / 2,
                                                             rel=1e-15)

    def test_initial_profile_formula(self):
        grid = SpatialGrid(4.0, 64)
        prof = initial_profile(SOL_4, grid)
        kap = 2.0 * math.pi / 4.0
        x = grid.nodes()
        expected = 2.0 * kap * np.sin(kap * x) / (np.cos(kap * x) + 2.0)
        assert np.allclose(prof.values, expected, rtol=1e-14, atol=1e-14)

    def test_flux0_value(self):
        # 2 k^2 pi^2 / l^2 / (1 + a) = pi^2/6 for (l=4, k=2, a=2) at t=0
        assert cole_hopf_flux0(SOL_4, 0.0) == pytest.approx(math.pi ** 2 / 6,
                                                            rel=1e-15)

    def test_flux0_shared_across_pair(self):
        other = ColeHopfSolution(6.0, 3, 2.0)
        assert cole_hopf_flux0(other, 0.0) == pytest.approx(math.pi ** 2 / 6,
                                                            rel=1e-15)

    def test_flux0_decay(self):
        assert cole_hopf_flux0(SOL_4, 50.0) < 1e-30

    def test_matches_flux_of_u_numerically(self):
        # independent check: differentiate u in x at 0 by a fine central stencil
        h = 1e-6
        for t in (0.0, 0.7):
            num = (cole_hopf_u(SOL_4, h, t) - cole_hopf_u(SOL_4, 0.0, t)) / h
            assert num == pytest.approx(cole_hopf_flux0(SOL_4, t), rel=1e-5)

    def test_pde_residual_second_order(self):
        # u_t - u_xx + u u_x evaluated with central differences must shrink
        # like dx^2 under refinement
        res = []
        for n in (64, 128):
            dx = 4.0 / n
            dt = dx
            x = np.linspace(0.0, 4.0, n + 1)
            t = np.array([0.5 - dt, 0.5, 0.5 + dt])
            u = cole_hopf_u(SOL_4, x[None, :], t[:, None])
            ut = (u[2, 1:-1] - u[0, 1:-1]) / (2 * dt)
            ux = (u[1, 2:] - u[1, :-2]) / (2 * dx)
            uxx = (u[1, 2:] - 2 * u[1, 1:-1] + u[1, :-2]) / dx ** 2
            res.append(np.abs(ut - uxx + u[1, 1:-1] * ux).max())
        assert res[0] / res[1] > 3.0


class TestCounterExample:
    def test_case_construction(self):
        pair = build_counterexample(6.0, 3, 2, 2, 2.0)
        assert pair.short.length == 4.0
        assert pair.short.mode == 2
        assert pair.long.mode == 3
        # the shared initial datum is pi sin(pi x/2) / (2 + cos(pi x/2))
        x = np.linspace(0.0, 4.0, 33)
        expected = (math.pi * np.sin(math.pi * x / 2)
                    / (2.0 + np.cos(math.pi * x / 2)))
        assert np.allclose(cole_hopf_u(pair.short, x, 0.0), expected,
                           rtol=1e-13, atol=1e-13)

    def test_small_pair(self):
        pair = build_counterexample(2.0, 2, 1, 1, 2.0)
        assert pair.short.length == 1.0
        assert pair.long.mode == 2
        assert pair.short.decay_rate == pytest.approx(math.pi ** 2, rel=1e-15)
        assert pair.long.decay_rate == pytest.approx(math.pi ** 2, rel=1e-15)

    def test_divisibility_rejected(self):
        with pytest.raises(DomlenError):
            build_counterexample(6.0, 3, 2, 1, 2.0)

    def test_ordering_rejected(self):
        with pytest.raises(DomlenError):
            build_counterexample(6.0, 2, 3, 2, 2.0)

    def test_offset_rejected(self):
        with pytest.raises(DomlenError):
            build_counterexample(6.0, 3, 2, 2, 0.5)

    def test_flux_traces_identical(self):
        pair = build_counterexample(6.0, 3, 2, 2, 2.0)
        t = np.linspace(0.0, 6.0, 1000)
        fa = cole_hopf_flux0(pair.short, t)
        fb = cole_hopf_flux0(pair.long, t)
        assert np.abs(fa - fb).max() <= 1e-13

    def test_initial_data_identical_on_overlap(self):
        pair = build_counterexample(6.0, 3, 2, 2, 2.0)
        x = np.linspace(0.0, pair.short.length, 257)
        ua = cole_hopf_u(pair.short, x, 0.0)
        ub = cole_hopf_u(pair.long, x, 0.0)
        assert np.abs(ua - ub).max() <= 1e-14


class TestNeumannHeat:
    def test_constant_profile(self):
        grid = SpatialGrid(3.0, 60)
        sol = neumann_heat_solve(SpatialProfile(grid, np.ones(61)), 8)
        assert sol.coefficients[0] == pytest.approx(math.sqrt(3.0), rel=1e-13)
        assert np.abs(sol.coefficients[1:]).max() < 1e-13
        x = grid.nodes()[5:20]
        assert np.allclose(sol.value(x, 0.0), 1.0, rtol=0, atol=1e-12)
        assert np.allclose(sol.value(x, 4.0), 1.0, rtol=0, atol=1e-12)

    def test_single_mode_profile(self):
        # cos(k pi x / l) + a evolves as a + e^{-lam t} cos(k pi x / l)
        ell, k, a = 4.0, 2, 2.0
        grid = SpatialGrid(ell, 200)
        x = grid.nodes()
        phi0 = SpatialProfile(grid, np.cos(k * math.pi * x / ell) + a)
        sol = neumann_heat_solve(phi0, 12)
        lam = (k * math.pi / ell) ** 2
        for t in (0.0, 0.3, 1.5):
            expected = a + math.exp(-lam * t) * np.cos(k * math.pi * x / ell)
            assert np.allclose(sol.value(x, t), expected, rtol=0, atol=1e-12)

    def test_single_mode_flux_vanishes_at_zero(self):
        ell, k, a = 4.0, 2, 2.0
        grid = SpatialGrid(ell, 200)
        x = grid.nodes()
        phi0 = SpatialProfile(grid, np.cos(k * math.pi * x / ell) + a)
        sol = neumann_heat_solve(phi0, 12)
        t = np.linspace(0.0, 6.0, 500)
        assert np.abs(sol.flux(0.0, t)).max() <= 1e-10

    def test_under_resolved_rejected(self):
        grid = SpatialGrid(1.0, 10)
        phi0 = SpatialProfile(grid, np.ones(11))
        with pytest.raises(DomlenError):
            neumann_heat_solve(phi0, 5)

    def test_mean_conserved(self):
        grid = SpatialGrid(2.0, 160)
        x = grid.nodes()
        phi0 = SpatialProfile(grid, 1.0 / (1.0 + x))
        sol = neumann_heat_solve(phi0, 16)
        xs = np.linspace(0.0, 2.0, 801)
        means = [np.trapezoid(sol.value(xs, t), xs) / 2.0
                 for t in (0.0, 0.1, 1.0, 5.0)]
        assert np.allclose(means, means[0], rtol=0, atol=1e-6)
        assert means[0] == pytest.approx(sol.mean(0.0), abs=1e-6)

    def test_truncation_error_decays_with_order(self):
        grid = SpatialGrid(2.0, 400)
        x = grid.nodes()
        phi0 = SpatialProfile(grid, 1.0 / (1.0 + x))
        t0 = 0.05
        xs = np.linspace(0.0, 2.0, 101)
        low = neumann_heat_solve(phi0, 4)
        mid = neumann_heat_solve(phi0, 8)
        high = neumann_heat_solve(phi0, 16)
        d_low = np.abs(low.value(xs, t0) - mid.value(xs, t0)).max()
        d_mid = np.abs(mid.value(xs, t0) - high.value(xs, t0)).max()
        lam5 = (5 * math.pi / 2.0) ** 2
        assert d_low <= 10.0 * math.exp(-lam5 * t0)
        assert d_mid < d_low


class TestColeHopfForward:
    def test_zero_velocity(self):
        grid = SpatialGrid(2.0, 32)
        phi0 = cole_hopf_forward(SpatialProfile(grid, np.zeros(33)))
        assert np.array_equal(phi0.values, np.ones(33))

    def test_counterexample_datum_closed_form(self):
        # phi0 for the (l=4, mode=2, a=2) datum is (cos(pi x/2) + 2)/3
        grid = SpatialGrid(4.0, 512)
        u0 = initial_profile(SOL_4, grid)
        phi0 = cole_hopf_forward(u0)
        x = grid.nodes()
        expected = (np.cos(math.pi * x / 2) + 2.0) / 3.0
        assert phi0.values[0] == 1.0
        # cumulative trapezoid carries O(dx^2) error, 5.6e-6 at 512 cells
        assert np.allclose(phi0.values, expected, rtol=0, atol=1e-5)

    def test_round_trip_second_order(self):
        errs = []
        for n in (128, 256):
            grid = SpatialGrid(4.0, n)
            u0 = initial_profile(SOL_4, grid)
            phi0 = cole_hopf_forward(u0)
            dx = grid.spacing
            recovered = -2.0 * (phi0.values[2:] - phi0.values[:-2]) \
                / (2.0 * dx) / phi0.values[1:-1]
            errs.append(np.abs(recovered - u0.values[1:-1]).max())
        assert errs[0] / errs[1] > 3.0

    def test_round_trip_through_spectral_solution(self):
        grid = SpatialGrid(4.0, 512)
        u0 = initial_profile(SOL_4, grid)
        phi0 = cole_hopf_forward(u0)
        sol = neumann_heat_solve(phi0, 24)
        x = grid.nodes()[1:-1]
        h = 1e-6
        phi = sol.value(x, 0.0)
        dphi = (sol.value(x + h, 0.0) - sol.value(x - h, 0.0)) / (2 * h)
        recovered = -2.0 * dphi / phi
        assert np.abs(recovered - u0.values[1:-1]).max() < 5e-4
