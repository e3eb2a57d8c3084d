"""Independent oracles shared by the test modules.

Everything here deliberately avoids the code paths under test: quadrature is
plain trapezoid on explicit profiles, the existence-mass oracle solves the
defining 2x2 system with a generic root bracketing, and the radial-flow oracle
minimizes the constrained energy by projected descent on a radial grid.
"""

import math

import numpy as np

from waveguide_nls import ground_state


def soliton_grid(alpha, rho, points=200001, efold=32.0):
    """Uniform grid covering the mass-rho soliton out to deep decay."""
    s = ground_state.decay_rate(alpha, 1, rho)
    half = efold / s
    return np.linspace(-half, half, points)


def quad_mass(alpha, rho):
    x = soliton_grid(alpha, rho)
    z = ground_state.z_rho_profile(alpha, 1, rho, x)
    return float(np.trapezoid(z * z, x))


def quad_grad_sq(alpha, rho):
    """||Z'||^2 via the analytic derivative of the explicit profile."""
    x = soliton_grid(alpha, rho)
    r0 = ground_state.rho0(alpha, 1)
    denom = 4.0 - alpha
    amp = (rho / r0) ** (4.0 / denom)
    stretch = (rho / r0) ** (2.0 * alpha / denom)
    zp = amp * stretch * ground_state.soliton_profile_1d_derivative(alpha, stretch * x)
    return float(np.trapezoid(zp * zp, x))


def quad_lp_pow(alpha, rho):
    x = soliton_grid(alpha, rho)
    z = ground_state.z_rho_profile(alpha, 1, rho, x)
    return float(np.trapezoid(z ** (2.0 + alpha), x))


def quad_energy(alpha, rho):
    return 0.5 * quad_grad_sq(alpha, rho) - quad_lp_pow(alpha, rho) / (2.0 + alpha)


def ode_residual_max(alpha, rho, h=1e-3, span=10.0):
    """Max-norm of -Z'' + omega Z - Z^(1+alpha), fourth-order centered stencil."""
    s = ground_state.decay_rate(alpha, 1, rho)
    x = np.arange(-span / s, span / s + h, h)
    z = ground_state.z_rho_profile(alpha, 1, rho, x)
    omega = ground_state.omega_rho(alpha, 1, rho)
    zxx = (-z[4:] + 16.0 * z[3:-1] - 30.0 * z[2:-2] + 16.0 * z[1:-3] - z[:-4]) / (
        12.0 * h * h
    )
    res = -zxx + omega * z[2:-2] - z[2:-2] ** (1.0 + alpha)
    return float(np.max(np.abs(res)))


def solve_threshold_system(params, gn):
    """Solve f = d_t f = 0 for (t, rho) without using the closed forms.

    From d_t f = 0: rho(t)^alpha = (2+alpha) / (A theta) (t+B)^(1-theta/2);
    substituting into f = 0 leaves a scalar equation in t solved by bisection.
    """
    a, th, A, B = params.alpha, gn.theta, gn.A, gn.B

    def rho_of_t(t):
        return ((2.0 + a) / (A * th) * (t + B) ** (1.0 - 0.5 * th)) ** (1.0 / a)

    def f_at(t):
        r = rho_of_t(t)
        return 0.5 * t - A * r ** a / (2.0 + a) * (t + B) ** (0.5 * th)

    lo, hi = 1e-12, 1.0
    while f_at(hi) < 0.0:
        hi *= 2.0
        if hi > 1e12:
            raise RuntimeError("threshold system bracketing failed")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f_at(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    return t, rho_of_t(t)


def radial_flow_ground_state(alpha, N, R=220.0, n=4400, dt=0.5, iters=40000):
    """Semi-implicit imaginary-time descent for the mass-1 radial ground state.

    Backward Euler on the radial Laplacian (tridiagonal solve per step),
    explicit nonlinearity, projection back to unit mass.  Returns
    (energy, omega): the constrained minimum and the multiplier recovered
    from the converged state.  Independent of both the closed forms and the
    shooting path.
    """
    from scipy.linalg import solve_banded

    r = np.linspace(0.0, R, n + 1)
    dr = r[1] - r[0]
    surface = 2.0 * math.pi ** (0.5 * N) / math.exp(math.lgamma(0.5 * N))
    w_trap = surface * r ** (N - 1)
    w_trap[0] *= 0.5
    w_trap[-1] *= 0.5

    def mass(u):
        return float(np.sum(w_trap * u * u)) * dr

    def lap(u):
        out = np.empty_like(u)
        out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / dr**2 + (N - 1) / r[1:-1] * (
            u[2:] - u[:-2]
        ) / (2.0 * dr)
        out[0] = N * 2.0 * (u[1] - u[0]) / dr**2  # regular center
        out[-1] = 0.0
        return out

    def energy(u):
        du = np.gradient(u, dr)
        kin = 0.5 * float(np.sum(w_trap * du * du)) * dr
        pot = float(np.sum(w_trap * np.abs(u) ** (2.0 + alpha))) * dr / (2.0 + alpha)
        return kin - pot

    def implicit_matrix(step):
        # banded (I - step * L) with Neumann center and Dirichlet far end
        ab = np.zeros((3, n + 1))
        ab[1, :] = 1.0 + 2.0 * step / dr**2
        ab[1, 0] = 1.0 + 2.0 * N * step / dr**2
        ab[0, 1] = -2.0 * N * step / dr**2  # super-diagonal entry for row 0
        ab[0, 2:] = -step * (1.0 / dr**2 + (N - 1) / (2.0 * r[1:-1] * dr))
        ab[2, :-2] = -step * (1.0 / dr**2 - (N - 1) / (2.0 * r[1:-1] * dr))
        ab[1, -1] = 1.0
        ab[0, -1] = 0.0
        ab[2, -2] = 0.0
        return ab

    ab = implicit_matrix(dt)
    u = np.exp(-0.5 * (r / (0.08 * R)) ** 2)
    u[-1] = 0.0
    u /= math.sqrt(mass(u))
    e_prev = energy(u)
    stall = 0
    for _ in range(iters):
        rhs = u + dt * np.abs(u) ** alpha * u
        rhs[-1] = 0.0
        cand = solve_banded((1, 1), ab, rhs)
        cand[-1] = 0.0
        cand /= math.sqrt(mass(cand))
        e = energy(cand)
        if not np.isfinite(e) or e > e_prev:
            dt *= 0.5
            if dt < 1e-9:
                break
            ab = implicit_matrix(dt)
            continue
        u = cand
        stall = stall + 1 if abs(e - e_prev) < 1e-13 * max(abs(e), 1e-300) else 0
        e_prev = e
        if stall > 40:
            break
    grad_sq = -float(np.sum(w_trap * u * lap(u))) * dr
    pot_pow = float(np.sum(w_trap * np.abs(u) ** (2.0 + alpha))) * dr
    omega = (pot_pow - grad_sq) / mass(u)
    return e_prev, omega
