import math

import numpy as np
import pytest

from domlen.errors import GridError, ZeroPivotError
from domlen.grids import (BoundaryTrace, SpatialGrid, SpatialProfile,
                          TimeGrid, Trajectory, boundary_flux,
                          l2_time_misfit, sample_space, sample_time,
                          tridiag_solve)


def random_dominant_system(rng, n):
    lower = rng.uniform(-1.0, 1.0, n - 1)
    upper = rng.uniform(-1.0, 1.0, n - 1)
    diag = np.empty(n)
    for i in range(n):
        off = (abs(lower[i - 1]) if i > 0 else 0.0) + \
              (abs(upper[i]) if i < n - 1 else 0.0)
        diag[i] = (off + rng.uniform(0.5, 2.0)) * rng.choice([-1.0, 1.0])
    rhs = rng.uniform(-5.0, 5.0, n)
    return lower, diag, upper, rhs


def dense_solve(lower, diag, upper, rhs):
    n = diag.shape[0]
    a = np.zeros((n, n))
    a[np.arange(n), np.arange(n)] = diag
    if n > 1:
        a[np.arange(1, n), np.arange(n - 1)] = lower
        a[np.arange(n - 1), np.arange(1, n)] = upper
    return np.linalg.solve(a, rhs)


class TestTridiagSolve:
    def test_identity(self):
        x = tridiag_solve([0, 0], [1, 1, 1], [0, 0], [3, 4, 5])
        assert np.array_equal(x, [3.0, 4.0, 5.0])

    def test_two_by_two(self):
        # [[2,1],[1,2]] x = [3,3] has the solution [1,1]
        x = tridiag_solve([1.0], [2.0, 2.0], [1.0], [3.0, 3.0])
        assert np.allclose(x, [1.0, 1.0], rtol=0, atol=1e-14)

    def test_matches_dense_oracle_50(self):
        rng = np.random.default_rng(7)
        lower, diag, upper, rhs = random_dominant_system(rng, 50)
        x = tridiag_solve(lower, diag, upper, rhs)
        expected = dense_solve(lower, diag, upper, rhs)
        assert np.linalg.norm(x - expected) <= 1e-10 * np.linalg.norm(expected)

    @pytest.mark.parametrize("n", [1, 2, 3, 17, 64, 200])
    def test_matches_dense_oracle_sizes(self, n):
        rng = np.random.default_rng(100 + n)
        for _ in range(5):
            lower, diag, upper, rhs = random_dominant_system(rng, n)
            x = tridiag_solve(lower, diag, upper, rhs)
            expected = dense_solve(lower, diag, upper, rhs)
            scale = max(1.0, np.linalg.norm(expected))
            assert np.linalg.norm(x - expected) <= 1e-10 * scale

    def test_residual_contract(self):
        rng = np.random.default_rng(3)
        lower, diag, upper, rhs = random_dominant_system(rng, 80)
        x = tridiag_solve(lower, diag, upper, rhs)
        res = np.empty(80)
        res[:] = diag * x - rhs
        res[1:] += lower * x[:-1]
        res[:-1] += upper * x[1:]
        assert np.abs(res).max() <= 1e-12 * (1.0 + np.abs(rhs).max())

    def test_zero_pivot_rejected(self):
        with pytest.raises(ZeroPivotError):
            tridiag_solve([], [0.0], [], [1.0])
        # second pivot vanishes for this singular system
        with pytest.raises(ZeroPivotError):
            tridiag_solve([1.0], [1.0, 1.0], [1.0], [1.0, 1.0])

    def test_shape_validation(self):
        with pytest.raises(GridError):
            tridiag_solve([1.0], [1.0, 1.0, 1.0], [1.0], [1.0, 1.0, 1.0])
        with pytest.raises(GridError):
            tridiag_solve([], [1.0], [], [1.0, 2.0])


class TestGrids:
    def test_spatial_grid_nodes(self):
        g = SpatialGrid(2.0, 4)
        assert g.spacing == 0.5
        assert g.node_count == 5
        nodes = g.nodes()
        assert nodes[0] == 0.0 and nodes[-1] == 2.0

    def test_time_grid_instants(self):
        g = TimeGrid(5.0, 1000)
        assert g.dt == 0.005
        inst = g.instants()
        assert inst[0] == 0.0 and inst[-1] == 5.0

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
    def test_bad_length_rejected(self, bad):
        with pytest.raises(GridError):
            SpatialGrid(bad, 10)

    def test_bad_counts_rejected(self):
        with pytest.raises(GridError):
            SpatialGrid(1.0, 0)
        with pytest.raises(GridError):
            TimeGrid(1.0, 0)

    def test_trace_length_checked(self):
        with pytest.raises(GridError):
            BoundaryTrace(TimeGrid(1.0, 4), np.zeros(4))

    def test_profile_finite_checked(self):
        with pytest.raises(GridError):
            SpatialProfile(SpatialGrid(1.0, 4), [0, 1, np.inf, 1, 0])

    def test_values_frozen(self):
        tr = BoundaryTrace(TimeGrid(1.0, 2), [0.0, 1.0, 2.0])
        with pytest.raises(ValueError):
            tr.values[0] = 5.0


class TestSampling:
    def test_zero_function(self):
        tr = sample_time(lambda t: 0.0, TimeGrid(3.0, 7))
        assert np.array_equal(tr.values, np.zeros(8))
        pr = sample_space(lambda x: 0.0, SpatialGrid(3.0, 7))
        assert np.array_equal(pr.values, np.zeros(8))

    def test_linear_time(self):
        tr = sample_time(lambda t: t, TimeGrid(1.0, 2))
        assert np.array_equal(tr.values, [0.0, 0.5, 1.0])

    def test_forcing_profile(self):
        tr = sample_time(lambda t: 5.0 * math.sin(t) ** 3, TimeGrid(5.0, 5))
        expected = [5.0 * math.sin(float(j)) ** 3 for j in range(6)]
        assert np.array_equal(tr.values, expected)

    def test_parabolic_profile(self):
        pr = sample_space(lambda x: 3.0 * x * (2.0 - x), SpatialGrid(2.0, 2))
        assert np.array_equal(pr.values, [0.0, 3.0, 0.0])

    def test_quadratic_profile(self):
        pr = sample_space(lambda x: x * x, SpatialGrid(1.0, 4))
        assert np.array_equal(pr.values, [0.0, 1 / 16, 1 / 4, 9 / 16, 1.0])

    def test_endpoints_exact(self):
        f = lambda t: math.cos(3.0 * t)
        tr = sample_time(f, TimeGrid(2.7, 13))
        assert tr.values[0] == f(0.0)
        assert tr.values[-1] == f(2.7)

    def test_nonfinite_rejected(self):
        with pytest.raises(GridError):
            sample_time(lambda t: 1.0 / t if t > 0 else math.inf,
                        TimeGrid(1.0, 4))


def make_traj(field, sgrid, tgrid):
    x = sgrid.nodes()
    snaps = np.tile(field(x), (tgrid.instant_count, 1))
    return Trajectory(sgrid, tgrid, snaps)


class TestBoundaryFlux:
    # power-of-two spacings keep the stencil arithmetic exact
    sgrid = SpatialGrid(1.0, 4)
    tgrid = TimeGrid(1.0, 3)

    def test_constant_field(self):
        # dyadic constant: the stencil cancels exactly
        traj = make_traj(lambda x: np.full_like(x, 3.5), self.sgrid, self.tgrid)
        assert np.array_equal(boundary_flux(traj).values, np.zeros(4))
        traj = make_traj(lambda x: np.full_like(x, 3.7), self.sgrid, self.tgrid)
        assert np.allclose(boundary_flux(traj).values, 0.0, atol=1e-13)

    def test_linear_field_exact(self):
        traj = make_traj(lambda x: 2.0 * x, self.sgrid, self.tgrid)
        assert np.array_equal(boundary_flux(traj).values, np.full(4, 2.0))

    def test_quadratic_left(self):
        traj = make_traj(lambda x: x * x, self.sgrid, self.tgrid)
        assert np.array_equal(boundary_flux(traj).values, np.zeros(4))

    def test_quadratic_right(self):
        traj = make_traj(lambda x: x * x, self.sgrid, self.tgrid)
        right = boundary_flux(traj, side="right")
        assert np.array_equal(right.values, np.full(4, 2.0))

    def test_quadratic_exactness_general_poly(self):
        traj = make_traj(lambda x: 1.5 - 0.25 * x + 0.75 * x * x,
                         self.sgrid, self.tgrid)
        assert np.allclose(boundary_flux(traj).values, -0.25,
                           rtol=0, atol=1e-14)

    def test_too_few_cells(self):
        g = SpatialGrid(1.0, 2)
        traj = make_traj(lambda x: x, g, self.tgrid)
        with pytest.raises(GridError):
            boundary_flux(traj)

    def test_bad_side(self):
        traj = make_traj(lambda x: x, self.sgrid, self.tgrid)
        with pytest.raises(GridError):
            boundary_flux(traj, side="top")


class TestMisfit:
    def test_equal_traces(self):
        g = TimeGrid(2.0, 10)
        a = sample_time(lambda t: math.sin(t), g)
        assert l2_time_misfit(a, a) == 0.0

    def test_constant_difference(self):
        g = TimeGrid(5.0, 50)
        a = BoundaryTrace(g, np.ones(51))
        b = BoundaryTrace(g, np.zeros(51))
        assert l2_time_misfit(a, b) == pytest.approx(5.0, abs=1e-14)

    def test_sine_integral(self):
        g = TimeGrid(math.pi, 1000)
        a = sample_time(math.sin, g)
        b = BoundaryTrace(g, np.zeros(1001))
        assert l2_time_misfit(a, b) == pytest.approx(math.pi / 2, abs=1e-5)

    def test_symmetry_and_nonnegativity(self):
        g = TimeGrid(1.0, 64)
        rng = np.random.default_rng(5)
        a = BoundaryTrace(g, rng.normal(size=65))
        b = BoundaryTrace(g, rng.normal(size=65))
        m = l2_time_misfit(a, b)
        assert m >= 0.0
        assert m == l2_time_misfit(b, a)

    def test_zero_iff_equal(self):
        g = TimeGrid(1.0, 8)
        a = BoundaryTrace(g, np.zeros(9))
        values = np.zeros(9)
        values[4] = 1e-8
        b = BoundaryTrace(g, values)
        assert l2_time_misfit(a, b) > 0.0

    def test_mismatched_grids_rejected(self):
        a = BoundaryTrace(TimeGrid(1.0, 4), np.zeros(5))
        b = BoundaryTrace(TimeGrid(2.0, 4), np.zeros(5))
        with pytest.raises(GridError):
            l2_time_misfit(a, b)

    def test_second_order_convergence(self):
        # sin^2 over a non-periodic window so the trapezoid error is the
        # generic O(dt^2), not the spectrally exact full-period case
        exact = 0.5 - math.sin(2.0) / 4.0
        errs = []
        for steps in (100, 200):
            g = TimeGrid(1.0, steps)
            a = sample_time(math.sin, g)
            b = BoundaryTrace(g, np.zeros(steps + 1))
            errs.append(abs(l2_time_misfit(a, b) - exact))
        slope = math.log2(errs[0] / errs[1])
        assert slope >= 1.9
