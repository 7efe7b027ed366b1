"""Numba-compiled twins of the kernels in :mod:`domlen.kernels_numpy`.

Same functions, same signatures, same status codes; the inner loops are
written out elementwise for the compiler. Keep the arithmetic order in
sync with the numpy module so the two backends agree to rounding.
"""

import numpy as np
from numba import njit

OK = 0
NONFINITE_U = 1
NONFINITE_THETA = 2
UPWIND_CFL = 3
DENSITY_BOUNDS = 4


@njit(cache=True)
def thomas(lower, diag, upper, rhs):
    n = diag.shape[0]
    x = np.empty(n)
    cp = np.empty(n)
    dp = np.empty(n)
    piv = diag[0]
    if piv == 0.0:
        return x, False
    if n > 1:
        cp[0] = upper[0] / piv
    dp[0] = rhs[0] / piv
    for i in range(1, n):
        piv = diag[i] - lower[i - 1] * cp[i - 1]
        if piv == 0.0:
            return x, False
        if i < n - 1:
            cp[i] = upper[i] / piv
        dp[i] = (rhs[i] - lower[i - 1] * dp[i - 1]) / piv
    xi = dp[n - 1]
    x[n - 1] = xi
    for i in range(n - 2, -1, -1):
        xi = dp[i] - cp[i] * xi
        x[i] = xi
    return x, True


@njit(cache=True)
def _implicit_step(w, vel, mass, source, nu, dx, dt, neumann, left, right):
    n_nodes = w.shape[0]
    m = n_nodes - 2  # interior rows
    r = nu * dt / (dx * dx)
    s = dt / (2.0 * dx)
    hr = 0.5 * r
    sub = np.empty(m)
    dia = np.empty(m)
    sup = np.empty(m)
    rhs = np.empty(m)
    for j in range(m):
        i = j + 1
        adv = (mass[i] * vel[i]) * s
        sub[j] = -hr - adv
        dia[j] = mass[i] + r
        sup[j] = -hr + adv
        rhs[j] = mass[i] * w[i] + hr * (w[i - 1] - 2.0 * w[i] + w[i + 1]) \
            + dt * source[i]
    out = np.empty(n_nodes)
    if not neumann:
        rhs[0] -= sub[0] * left
        rhs[m - 1] -= sup[m - 1] * right
        x, ok = thomas(sub[1:], dia, sup[:-1], rhs)
        if not ok:
            return out, False
        out[0] = left
        for j in range(m):
            out[j + 1] = x[j]
        out[n_nodes - 1] = right
        return out, True
    if sup[0] == 0.0 or sub[m - 1] == 0.0:
        return out, False
    full_lower = np.empty(m + 1)
    full_diag = np.empty(m + 2)
    full_upper = np.empty(m + 1)
    full_rhs = np.empty(m + 2)
    full_diag[0] = -3.0 + sub[0] / sup[0]
    full_upper[0] = 4.0 + dia[0] / sup[0]
    full_rhs[0] = 2.0 * dx * left + rhs[0] / sup[0]
    for j in range(m):
        full_lower[j] = sub[j]
        full_diag[j + 1] = dia[j]
        full_rhs[j + 1] = rhs[j]
        full_upper[j + 1] = sup[j]
    full_diag[m + 1] = 3.0 - sup[m - 1] / sub[m - 1]
    full_lower[m] = -4.0 - dia[m - 1] / sub[m - 1]
    full_rhs[m + 1] = 2.0 * dx * right - rhs[m - 1] / sub[m - 1]
    x, ok = thomas(full_lower, full_diag, full_upper, full_rhs)
    if not ok:
        return out, False
    for i in range(n_nodes):
        out[i] = x[i]
    return out, True


@njit(cache=True)
def _absmax(w):
    m = 0.0
    for i in range(w.shape[0]):
        v = abs(w[i])
        if v > m:
            m = v
    return m


@njit(cache=True)
def _allfinite(w):
    for i in range(w.shape[0]):
        if not np.isfinite(w[i]):
            return False
    return True


@njit(cache=True)
def burgers_loop(u0, eta, dx, dt, nu, linear):
    n_nodes = u0.shape[0]
    steps = eta.shape[0] - 1
    traj = np.empty((steps + 1, n_nodes))
    traj[0] = u0
    zeros = np.zeros(n_nodes)
    ones = np.ones(n_nodes)
    max_c = 0.0
    for n in range(steps):
        un = traj[n]
        c = _absmax(un) * dt / dx
        if c > max_c:
            max_c = c
        vel = zeros if linear else un
        new, ok = _implicit_step(un, vel, ones, zeros, nu, dx, dt, False,
                                 eta[n + 1], 0.0)
        if not ok or not _allfinite(new):
            return traj, NONFINITE_U, n + 1, max_c
        traj[n + 1] = new
    return traj, OK, -1, max_c


@njit(cache=True)
def burgers_heat_loop(u0, th0, eta, lamchi, k, dx, dt, theta_neumann,
                      dissipation, linear):
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
        c = _absmax(un) * dt / dx
        if c > max_c:
            max_c = c
        vel = zeros if linear else un
        if dissipation and not linear:
            for i in range(1, n_nodes - 1):
                grad = (un[i + 1] - un[i - 1]) * inv2dx
                src[i] = grad * grad
        else:
            for i in range(1, n_nodes - 1):
                src[i] = 0.0
        th_new, ok = _implicit_step(thn, vel, ones, src, 1.0, dx, dt,
                                    theta_neumann, lamchi[n + 1], 0.0)
        if not ok or not _allfinite(th_new):
            return u_traj, th_traj, NONFINITE_THETA, n + 1, max_c
        th_traj[n + 1] = th_new
        u_src = k * th_new if k != 0.0 else zeros
        u_new, ok = _implicit_step(un, vel, ones, u_src, 1.0, dx, dt, False,
                                   eta[n + 1], 0.0)
        if not ok or not _allfinite(u_new):
            return u_traj, th_traj, NONFINITE_U, n + 1, max_c
        u_traj[n + 1] = u_new
    return u_traj, th_traj, OK, -1, max_c


@njit(cache=True)
def vardensity_loop(u0, rho0, ubar, rhobar, dx, dt, guard):
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
        c = _absmax(un) * cfl
        if c > max_c:
            max_c = c
        if guard and c > 1.0:
            return u_traj, r_traj, UPWIND_CFL, n + 1, max_c
        rnew = np.empty(n_nodes)
        for i in range(1, n_nodes - 1):
            ui = un[i]
            if ui > 0.0:
                rnew[i] = rn[i] - cfl * ui * (rn[i] - rn[i - 1])
            else:
                rnew[i] = rn[i] - cfl * ui * (rn[i + 1] - rn[i])
        # boundary nodes follow the characteristics; extrapolation is the
        # fallback for inflow without a datum only (rest state stays put)
        last = n_nodes - 1
        un_r = un[last]
        if un_r > 0.0:
            rnew[last] = rn[last] - cfl * un_r * (rn[last] - rn[last - 1])
        elif un_r < 0.0:
            rnew[last] = rnew[last - 1]
        else:
            rnew[last] = rn[last]
        if ubar[n + 1] > 0.0:
            rnew[0] = rhobar[n + 1]
        elif un[0] < 0.0:
            rnew[0] = rn[0] - cfl * un[0] * (rn[1] - rn[0])
        elif un[0] > 0.0:
            rnew[0] = rnew[1]
        else:
            rnew[0] = rn[0]
        for i in range(n_nodes):
            if rnew[i] < lo_bound or rnew[i] > hi_bound:
                return u_traj, r_traj, DENSITY_BOUNDS, n + 1, max_c
        r_traj[n + 1] = rnew
        u_new, ok = _implicit_step(un, un, rnew, zeros, 1.0, dx, dt, False,
                                   ubar[n + 1], 0.0)
        if not ok or not _allfinite(u_new):
            return u_traj, r_traj, NONFINITE_U, n + 1, max_c
        u_traj[n + 1] = u_new
    return u_traj, r_traj, OK, -1, max_c
