"""Fast end-to-end invariant suite behind the `selftest` subcommand.

Each suite re-derives a handful of identities through independent routes
(quadrature against closed forms, criterion algebra against the term-level
evaluator, finite differences against exact gradients) and reports a timing.
The module-level `_corruption_offset` is a test hook: adding a perturbation
there must make the special-function suite fail, which proves the checks are
actually wired to the computations.
"""

import math
import time

import numpy as np

from . import field_solver, gn_constants, ground_state, specfun, sphere_criteria, thresholds

# Test hook: nonzero values are injected into the specfun suite's values.
_corruption_offset = 0.0


def _suite_specfun(rng):
    checks = []
    lg = lambda x: specfun.log_gamma(x) + _corruption_offset
    checks.append(abs(lg(1.0)) < 1e-12)
    checks.append(abs(lg(0.5) - 0.5 * math.log(math.pi)) < 1e-12)
    for x in np.linspace(0.1, 100.0, 37):
        checks.append(abs(lg(x + 1.0) - lg(x) - math.log(x)) < 1e-11)
    for _ in range(20):
        x, y = rng.uniform(0.1, 50.0, size=2)
        b1, b2 = specfun.beta(x, y), specfun.beta(y, x)
        checks.append(abs(b1 - b2) <= 1e-12 * abs(b1))
    for k in range(1, 21):
        ratio = specfun.sphere_volume(k + 1) / specfun.sphere_volume(k)
        target = specfun.beta(0.5, 0.5 * (k + 1))
        checks.append(abs(ratio - target) <= 1e-12 * target)
    return all(checks)


def _suite_ground_state(rng):
    checks = []
    # closed-form mass against quadrature of the explicit profile
    x = np.linspace(-60.0, 60.0, 240001)
    u = ground_state.soliton_profile_1d(2.0, x)
    checks.append(abs(np.trapezoid(u * u, x) - 4.0) < 1e-10)
    checks.append(abs(ground_state.rho0(2.0, 1) - 2.0) < 1e-12)
    checks.append(abs(ground_state.g_constant(2.0, 1) - 1.0 / 96.0) < 1e-14)
    # Pohozaev-type identities at (alpha, rho) = (2.5, 1)
    alpha, rho = 2.5, 1.0
    s = ground_state.decay_rate(alpha, 1, rho)
    x = np.linspace(-30.0 / s, 30.0 / s, 200001)
    z = ground_state.z_rho_profile(alpha, 1, rho, x)
    zp = np.gradient(z, x)
    grad_sq = np.trapezoid(zp * zp, x)
    lp = np.trapezoid(z ** (2.0 + alpha), x)
    gref, lref = ground_state.ground_state_identities(alpha, 1, rho)
    checks.append(abs(grad_sq - gref) < 1e-3 * gref)
    checks.append(abs(lp - lref) < 1e-3 * lref)
    energy = 0.5 * grad_sq - lp / (2.0 + alpha)
    checks.append(abs(energy - ground_state.i_rho(alpha, 1, rho)) < 1e-3 * abs(energy))
    return all(checks)


def _suite_thresholds(rng):
    checks = []
    params = ground_state.ProblemParams(N=1, k=3, alpha=1.5)
    gn = gn_constants.sphere_gn_constants(3, params)
    ts = thresholds.t_star(params, gn)
    reb = thresholds.rho_ex_basic(params, gn)
    checks.append(abs(thresholds.f_lower(ts, reb, params, gn)) < 1e-9)
    checks.append(abs(thresholds.f_lower_dt(ts, reb, params, gn)) < 1e-9)
    for rho in rng.uniform(0.01, 100.0, size=10):
        lam = thresholds.lambda_of_rho(rho, params)
        checks.append(abs(thresholds.rho_of_lambda(lam, params) - rho) < 1e-12 * rho)
    # criterion algebra against the sphere term evaluator
    for k in (3, 4, 5, 7):
        lo, hi = sphere_criteria.alpha_window(k)
        for a in np.linspace(lo + 1e-3, hi - 1e-3, 5):
            checks.append(
                sphere_criteria.sphere_exact(k, float(a))
                == sphere_criteria.sphere_criterion_basic(k, float(a))
            )
    return all(checks)


def _suite_sphere(rng):
    checks = [not sphere_criteria.sphere_mass_critical(2)]
    checks += [sphere_criteria.sphere_mass_critical(k) for k in range(3, 13)]
    checks.append(not sphere_criteria.rough_bound_coarse(10))
    checks.append(sphere_criteria.rough_bound_coarse(11))
    checks.append(not sphere_criteria.rough_bound_refined(8))
    checks.append(sphere_criteria.rough_bound_refined(9))
    return all(checks)


def _suite_solver(rng):
    checks = []
    grid = field_solver.Grid(x_half_width=12.0, nx=192, L=2.0 * math.pi, ny=16)
    alpha = 2.5
    for _ in range(3):
        bump = _random_bump(rng, grid)
        grad = field_solver.l2_gradient(bump, alpha).samples
        direction = _random_bump(rng, grid).samples
        h = 1e-5
        ep = field_solver.discrete_energy(
            field_solver.Field(bump.samples + h * direction, grid), alpha
        )
        em = field_solver.discrete_energy(
            field_solver.Field(bump.samples - h * direction, grid), alpha
        )
        fd = (ep - em) / (2.0 * h)
        inner = float(np.sum(grad * direction)) * grid.cell
        checks.append(abs(fd - inner) <= 1e-5 * max(abs(fd), abs(inner)))
    # small trivial flow: energy must land on the closed form
    params = ground_state.ProblemParams(N=1, k=1, alpha=alpha)
    gs = ground_state.ground_state_data(alpha, 1)
    upper = thresholds.rho_tr_upper(params, 1.0, gs, vol=2.0 * math.pi)
    rho = 0.35 * upper
    g2 = field_solver.grid_for_mass(params, rho, 2.0 * math.pi, nx=256, ny=16)
    init = field_solver.make_initial(params, rho, 0.05, g2)
    res = field_solver.normalized_gradient_flow(init, rho, alpha)
    closed = 2.0 * math.pi * ground_state.i_rho(alpha, 1, rho / math.sqrt(2.0 * math.pi))
    checks.append(res.status == field_solver.STATUS_CONVERGED)
    checks.append(abs(res.energy - closed) < 1e-3 * abs(closed))
    checks.append(res.y_nontriviality < 1e-6)
    return all(checks)


def _random_bump(rng, grid):
    x, y = grid.x, grid.y
    # envelope narrow enough that the boundary-decay invariant holds on any grid
    env = np.exp(-0.5 * (x / (0.14 * grid.x_half_width)) ** 2)
    profile = env * (1.0 + 0.3 * np.sin(2.0 * math.pi * x / grid.x_half_width))
    wave = 1.0 + 0.2 * np.cos(2.0 * math.pi * y / grid.L + rng.uniform(0, 2 * math.pi))
    samples = rng.uniform(0.5, 1.5) * wave[:, None] * profile[None, :]
    return field_solver.Field(samples=samples, grid=grid)


SUITES = (
    ("specfun", _suite_specfun),
    ("ground-state", _suite_ground_state),
    ("thresholds", _suite_thresholds),
    ("sphere", _suite_sphere),
    ("solver", _suite_solver),
)


def run_selftest(seed=1234):
    """Run every suite; returns (all_passed, [(name, passed, seconds), ...])."""
    results = []
    ok = True
    for name, fn in SUITES:
        rng = np.random.default_rng(seed)
        start = time.perf_counter()
        try:
            passed = bool(fn(rng))
        except Exception:
            passed = False
        elapsed = time.perf_counter() - start
        results.append((name, passed, elapsed))
        ok = ok and passed
    return ok, results
