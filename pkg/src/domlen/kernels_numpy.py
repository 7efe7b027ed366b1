"""Pure-numpy implementations of the time-stepping kernels.

These are the fallback selected by ``DOMLEN_BACKEND=numpy`` and the
reference the compiled kernels in :mod:`domlen.kernels_numba` are checked
against. Both modules expose the same functions with the same signatures
and status conventions:

status 0  completed
status 1  u-state became non-finite (bad_step reports the failed level)
status 2  theta-state became non-finite
status 3  upwind Courant number exceeded 1 with the guard enabled
status 4  transported density left its admissible min-max range
"""

import numpy as np

OK = 0
NONFINITE_U = 1
NONFINITE_THETA = 2
UPWIND_CFL = 3
DENSITY_BOUNDS = 4


def thomas(lower, diag, upper, rhs):
    """Solve a tridiagonal system in one elimination/back-substitution pass.

    Returns ``(x, ok)``; ``ok`` is False when a pivot vanishes, which for
    the diagonally dominant systems assembled here signals a scheme bug or
    a resolution failure rather than a recoverable condition.
    """
    n = diag.shape[0]
    x = np.empty(n)
    # plain lists: scalar recurrences are much faster than ndarray indexing
    a = lower.tolist()
    b = diag.tolist()
    c = upper.tolist()
    d = rhs.tolist()
    cp = [0.0] * n
    dp = [0.0] * n
    piv = b[0]
    if piv == 0.0:
        return x, False
    if n > 1:
        cp[0] = c[0] / piv
    dp[0] = d[0] / piv
    for i in range(1, n):
        piv = b[i] - a[i - 1] * cp[i - 1]
        if piv == 0.0:
            return x, False
        if i < n - 1:
            cp[i] = c[i] / piv
        dp[i] = (d[i] - a[i - 1] * dp[i - 1]) / piv
    xi = dp[n - 1]
    x[n - 1] = xi
    for i in range(n - 2, -1, -1):
        xi = dp[i] - cp[i] * xi
        x[i] = xi
    return x, True


def _implicit_step(w, vel, mass, source, nu, dx, dt, neumann, left, right):
    """One linearly implicit step of ``mass*(w_t + vel*w_x) = nu*w_xx + source``.

    Crank-Nicolson diffusion; the transport coefficient is frozen at the
    previous level so each step is a single tridiagonal solve. With
    ``neumann`` the boundary rows impose second-order one-sided flux
    conditions (``left``/``right`` are then fluxes, not values), folded to
    tridiagonal form by eliminating the third stencil entry against the
    adjacent interior row.
    """
    r = nu * dt / (dx * dx)
    s = dt / (2.0 * dx)
    wi = w[1:-1]
    adv = (mass[1:-1] * vel[1:-1]) * s
    sub = -0.5 * r - adv
    dia = mass[1:-1] + r
    sup = -0.5 * r + adv
    rhs = mass[1:-1] * wi + 0.5 * r * (w[:-2] - 2.0 * wi + w[2:]) + dt * source[1:-1]
    out = np.empty_like(w)
    if not neumann:
        rhs[0] -= sub[0] * left
        rhs[-1] -= sup[-1] * right
        x, ok = thomas(sub[1:], dia, sup[:-1], rhs)
        if not ok:
            return out, False
        out[0] = left
        out[1:-1] = x
        out[-1] = right
        return out, True
    if sup[0] == 0.0 or sub[-1] == 0.0:
        return out, False
    d0 = -3.0 + sub[0] / sup[0]
    u0 = 4.0 + dia[0] / sup[0]
    r0 = 2.0 * dx * left + rhs[0] / sup[0]
    dn = 3.0 - sup[-1] / sub[-1]
    ln = -4.0 - dia[-1] / sub[-1]
    rn = 2.0 * dx * right - rhs[-1] / sub[-1]
    full_lower = np.concatenate((sub, (ln,)))
    full_diag = np.concatenate(((d0,), dia, (dn,)))
    full_upper = np.concatenate(((u0,), sup))
    full_rhs = np.concatenate(((r0,), rhs, (rn,)))
    x, ok = thomas(full_lower, full_diag, full_upper, full_rhs)
    if not ok:
        return out, False
    out[:] = x
    return out, True


def burgers_loop(u0, eta, dx, dt, nu, linear):
    """March the viscous Burgers system; Dirichlet data eta at x=0, zero at x=l."""
    n_nodes = u0.shape[0]
    steps = eta.shape[0] - 1
    traj = np.empty((steps + 1, n_nodes))
    traj[0] = u0
    zeros = np.zeros(n_nodes)
    ones = np.ones(n_nodes)
    max_c = 0.0
    for n in range(steps):
        un = traj[n]
        c = np.abs(un).max() * dt / dx
        if c > max_c:
            max_c = c
        vel = zeros if linear else un
        new, ok = _implicit_step(un, vel, ones, zeros, nu, dx, dt, False,
                                 eta[n + 1], 0.0)
        if not ok or not np.isfinite(new).all():
            return traj, NONFINITE_U, n + 1, max_c
        traj[n + 1] = new
    return traj, OK, -1, max_c


def burgers_heat_loop(u0, th0, eta, lamchi, k, dx, dt, theta_neumann,
                      dissipation, linear):
    """March the coupled velocity/temperature system, theta first then u.

    ``theta_neumann`` selects flux data (lamchi is the left flux, zero on
    the right) instead of Dirichlet values; ``dissipation`` adds the
    squared velocity gradient as a temperature source.
    """
    n_nodes = u0.shape[0]
    steps = eta.shape[0] - 1
    u_traj = np.empty((steps + 1, n_nodes))
    th_traj = np.empty((steps + 1, n_nodes))
    u_traj[0] = u0
    th_traj[0] = th0
    zeros = np.zeros(n_nodes)
    ones = np.ones(n_nodes)
    src = np.zeros(n_nodes)
    inv2dx = 1.0 / (2.0 * dx)
    max_c = 0.0
    for n in range(steps):
        un = u_traj[n]
        thn = th_traj[n]
        c = np.abs(un).max() * dt / dx
        if c > max_c:
            max_c = c
        vel = zeros if linear else un
        if dissipation and not linear:
            grad = (un[2:] - un[:-2]) * inv2dx
            src[1:-1] = grad * grad
        else:
            src[1:-1] = 0.0
        th_new, ok = _implicit_step(thn, vel, ones, src, 1.0, dx, dt,
                                    theta_neumann, lamchi[n + 1], 0.0)
        if not ok or not np.isfinite(th_new).all():
            return u_traj, th_traj, NONFINITE_THETA, n + 1, max_c
        th_traj[n + 1] = th_new
        # k == 0 must reproduce the plain Burgers march bit for bit
        u_src = k * th_new if k != 0.0 else zeros
        u_new, ok = _implicit_step(un, vel, ones, u_src, 1.0, dx, dt, False,
                                   eta[n + 1], 0.0)
        if not ok or not np.isfinite(u_new).all():
            return u_traj, th_traj, NONFINITE_U, n + 1, max_c
        u_traj[n + 1] = u_new
    return u_traj, th_traj, OK, -1, max_c


def vardensity_loop(u0, rho0, ubar, rhobar, dx, dt, guard):
    """March the variable-density system: explicit upwind transport for rho,
    then the implicit velocity step with rho as nodewise mass coefficient.

    The inflow value rhobar applies at x=0 only while ubar>0; elsewhere the
    transported field is extrapolated with zero gradient. With ``guard``
    the explicit sweep aborts beyond Courant 1, and any excursion of rho
    outside the range spanned by the initial and inflow data aborts.
    """
    n_nodes = u0.shape[0]
    steps = ubar.shape[0] - 1
    u_traj = np.empty((steps + 1, n_nodes))
    r_traj = np.empty((steps + 1, n_nodes))
    u_traj[0] = u0
    r_traj[0] = rho0
    zeros = np.zeros(n_nodes)
    lo = min(rho0.min(), rhobar.min())
    hi = max(rho0.max(), rhobar.max())
    lo_bound = lo * (1.0 - 1e-6) - 1e-12
    hi_bound = hi * (1.0 + 1e-6) + 1e-12
    cfl = dt / dx
    max_c = 0.0
    for n in range(steps):
        un = u_traj[n]
        rn = r_traj[n]
        c = np.abs(un).max() * cfl
        if c > max_c:
            max_c = c
        if guard and c > 1.0:
            return u_traj, r_traj, UPWIND_CFL, n + 1, max_c
        rnew = np.empty(n_nodes)
        ui = un[1:-1]
        back = rn[1:-1] - rn[:-2]
        fwd = rn[2:] - rn[1:-1]
        rnew[1:-1] = rn[1:-1] - cfl * ui * np.where(ui > 0.0, back, fwd)
        # boundary nodes follow the characteristics: the one-sided upwind
        # update is used wherever its stencil exists, the inflow datum when
        # the gate is open, and zero-gradient extrapolation only for inflow
        # without a datum (so a field at rest stays put)
        un_r = un[-1]
        if un_r > 0.0:
            rnew[-1] = rn[-1] - cfl * un_r * (rn[-1] - rn[-2])
        elif un_r < 0.0:
            rnew[-1] = rnew[-2]
        else:
            rnew[-1] = rn[-1]
        if ubar[n + 1] > 0.0:
            rnew[0] = rhobar[n + 1]
        elif un[0] < 0.0:
            rnew[0] = rn[0] - cfl * un[0] * (rn[1] - rn[0])
        elif un[0] > 0.0:
            rnew[0] = rnew[1]
        else:
            rnew[0] = rn[0]
        if rnew.min() < lo_bound or rnew.max() > hi_bound:
            return u_traj, r_traj, DENSITY_BOUNDS, n + 1, max_c
        r_traj[n + 1] = rnew
        u_new, ok = _implicit_step(un, un, rnew, zeros, 1.0, dx, dt, False,
                                   ubar[n + 1], 0.0)
        if not ok or not np.isfinite(u_new).all():
            return u_traj, r_traj, NONFINITE_U, n + 1, max_c
        u_traj[n + 1] = u_new
    return u_traj, r_traj, OK, -1, max_c
