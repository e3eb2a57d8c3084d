"""Acceptance gate: one test per criterion, each printing a PASS line with its
runtime (visible under pytest -s).  Tolerances are pinned here, not imported.
"""

import math
import time

import numpy as np
import pytest
from scipy.integrate import quad

import oracles
from waveguide_nls import (
    field_solver as fs,
    gn_constants as gnc,
    ground_state as g,
    sphere_criteria as sc,
    thresholds as th,
)

TWO_PI = 2.0 * math.pi


def report(number, budget_s, started, description):
    elapsed = time.perf_counter() - started
    print(f"ACCEPTANCE {number} PASS ({elapsed:.2f}s): {description}")
    assert elapsed < budget_s, f"criterion {number} exceeded its {budget_s}s budget"


def test_acceptance_1_sphere_mass_critical():
    started = time.perf_counter()
    assert not sc.sphere_mass_critical(2)
    for k in range(3, 13):
        assert sc.sphere_mass_critical(k)
    report(1, 1.0, started, "mass-critical sphere condition true iff k >= 3 on [2, 12]")


def test_acceptance_2_rough_bound_boundaries():
    started = time.perf_counter()
    for k in range(2, 31):
        assert sc.rough_bound_coarse(k) == (k >= 11)
        assert sc.rough_bound_refined(k) == (k >= 9)
    report(2, 1.0, started, "coarse bound flips at k = 11, refined adds k = 9, 10")


def test_acceptance_3_exact_sphere_condition():
    started = time.perf_counter()
    for k in range(6, 13):
        for a in sc.alpha_grid(k, step=0.01):
            assert sc.sphere_exact(k, a), (k, a)
    for a in sc.alpha_grid(2, step=0.01):
        assert not sc.sphere_exact(2, a), a
    report(3, 5.0, started, "exact condition holds on all of k in [6, 12], never at k = 2")


def test_acceptance_4_improved_criterion_reproduction():
    started = time.perf_counter()

    def improved(k, a):
        params = g.ProblemParams(1, k, a)
        gn = gnc.sphere_gn_constants(k, params)
        return th.criterion_improved(
            params, gnc.ManifoldSpec.sphere(k), gn, g.ground_state_data(a, 1)
        )

    for k in (4, 5):
        for a in sc.alpha_grid(k, step=0.01):
            assert improved(k, a), (k, a)
    k3 = [(a, improved(3, a)) for a in sc.alpha_grid(3, step=0.01)]
    assert k3[0][0] == pytest.approx(1.0) and k3[0][1]  # holds from alpha = 1
    flags = [v for _, v in k3]
    assert not all(flags)  # fails for alpha large
    first_false = flags.index(False)
    assert first_false > 0 and not any(flags[first_false:])  # a clean prefix
    for a in sc.alpha_grid(2, step=0.01):
        assert not improved(2, a), a
    report(4, 10.0, started, "improved criterion: k=4,5 everywhere, k=3 prefix, k=2 never")


def test_acceptance_5_ground_state_fidelity():
    started = time.perf_counter()
    for alpha in (2.0, 2.5, 3.0):
        for rho in (0.5, 1.0, 2.0):
            level = g.i_rho(alpha, 1, rho)
            assert oracles.quad_energy(alpha, rho) == pytest.approx(level, rel=1e-3)
            grad_ref, lp_ref = g.ground_state_identities(alpha, 1, rho)
            assert oracles.quad_grad_sq(alpha, rho) == pytest.approx(grad_ref, rel=1e-2)
            assert oracles.quad_lp_pow(alpha, rho) == pytest.approx(lp_ref, rel=1e-2)
            assert oracles.ode_residual_max(alpha, rho, h=1e-3) < 1e-5
    report(5, 30.0, started, "soliton energies, norm identities and ODE residual on the sweep")


def test_acceptance_6_oracle_equivalence():
    started = time.perf_counter()
    alpha = 2.5
    gs = g.ground_state_data(alpha, 1)
    s = g.decay_rate(alpha, 1, 1.0)
    grid = fs.Grid(x_half_width=26.0 / s, nx=512, L=1.0, ny=8)
    bump = np.exp(-((grid.x / (0.1 * grid.x_half_width)) ** 2))
    init = fs.Field(np.ones(grid.ny)[:, None] * bump[None, :], grid)
    init.samples *= 1.0 / math.sqrt(fs.mass(init))
    res = fs.normalized_gradient_flow(
        init, 1.0, alpha, config=fs.FlowConfig(dt=2e-3)
    )
    assert res.status == fs.STATUS_CONVERGED
    assert abs(res.energy + gs.G) < 0.01 * gs.G
    report(6, 60.0, started, "flow from a generic bump reaches the closed-form level within 1%")


def test_acceptance_7_gradient_and_second_variation():
    started = time.perf_counter()
    params = g.ProblemParams(1, 1, 2.5)
    gs = g.ground_state_data(2.5, 1)
    upper = th.rho_tr_upper(params, 1.0, gs, vol=TWO_PI)

    rng = np.random.default_rng(20240817)
    grid = fs.Grid(x_half_width=10.0, nx=128, L=TWO_PI, ny=16)

    def bump():
        env = np.exp(-0.5 * (grid.x / (0.14 * grid.x_half_width)) ** 2)
        prof = env * (1.0 + 0.3 * np.sin(math.pi * grid.x / grid.x_half_width))
        wave = 1.0 + 0.25 * np.cos(
            2.0 * math.pi * grid.y / grid.L + rng.uniform(0.0, TWO_PI)
        )
        return fs.Field(rng.uniform(0.5, 1.5) * wave[:, None] * prof[None, :], grid)

    h = 1e-5
    for _ in range(20):
        u, d = bump(), bump()
        ep = fs.discrete_energy(fs.Field(u.samples + h * d.samples, grid), 2.5)
        em = fs.discrete_energy(fs.Field(u.samples - h * d.samples, grid), 2.5)
        fd = (ep - em) / (2.0 * h)
        inner = float(np.sum(fs.l2_gradient(u, 2.5).samples * d.samples)) * grid.cell
        assert abs(fd - inner) <= 1e-5 * max(abs(fd), abs(inner))

    for frac in (0.5, 1.0, 1.5):
        rho = frac * upper
        sv_grid = fs.grid_for_mass(params, rho, TWO_PI, nx=512, ny=64)
        got = fs.second_variation_fd(params, rho, sv_grid)
        rho_hat = rho / math.sqrt(TWO_PI)
        want = th.second_variation(params, 1.0, rho_hat, gs)
        scale = max(abs(want), rho_hat * rho_hat)  # mu1 = 1 on this circle
        assert abs(got - want) <= 1e-2 * scale

    lo, hi = 0.95 * upper, 1.05 * upper
    g_lo = fs.grid_for_mass(params, lo, TWO_PI, nx=512, ny=64)
    g_hi = fs.grid_for_mass(params, hi, TWO_PI, nx=512, ny=64)
    assert fs.second_variation_fd(params, lo, g_lo) > 0.0
    assert fs.second_variation_fd(params, hi, g_hi) < 0.0
    while hi - lo > 0.005 * upper:
        mid = 0.5 * (lo + hi)
        g_mid = fs.grid_for_mass(params, mid, TWO_PI, nx=512, ny=64)
        if fs.second_variation_fd(params, mid, g_mid) > 0.0:
            lo = mid
        else:
            hi = mid
    assert lo < upper < hi or abs(0.5 * (lo + hi) - upper) < 0.01 * upper
    report(7, 120.0, started, "exact gradients, second-variation match and 1% sign-flip bracket")


def test_acceptance_8_bifurcation_containment():
    started = time.perf_counter()
    params = g.ProblemParams(1, 1, 2.5)
    gs = g.ground_state_data(2.5, 1)
    upper = th.rho_tr_upper(params, 1.0, gs, vol=TWO_PI)
    rho_grid = list(np.linspace(0.3, 1.5, 12) * upper)
    config = fs.ScanConfig(L=TWO_PI, nx=512, ny=64)
    result = fs.bifurcation_scan(rho_grid, params, config)
    assert len(result.rows) == 12

    for row in result.rows:
        if row.status == fs.STATUS_CONVERGED and row.rho > upper:
            assert row.y_nontriviality > config.nontrivial_tol
            assert row.m_numeric < row.I_closed - 1e-3 * abs(row.I_closed)
        if row.rho < 0.5 * upper:
            assert row.status == fs.STATUS_CONVERGED
            assert row.y_nontriviality <= config.nontrivial_tol
            assert abs(row.m_numeric - row.I_closed) < 1e-3 * abs(row.I_closed)

    verdicts = [
        math.isfinite(r.m_numeric)
        and r.m_numeric < r.I_closed - 1e-3 * abs(r.I_closed)
        and r.y_nontriviality > config.nontrivial_tol
        for r in result.rows
    ]
    assert verdicts == sorted(verdicts), "nontriviality verdicts must be monotone"
    assert any(verdicts), "the scan must detect the symmetry-broken regime"
    report(8, 600.0, started, "12-row containment scan with monotone verdicts at 512x64")


def test_acceptance_9_structural_identities():
    started = time.perf_counter()
    params = g.ProblemParams(1, 1, 2.5)
    for rho in np.geomspace(1e-3, 1e3, 25):
        back = th.rho_of_lambda(th.lambda_of_rho(float(rho), params), params)
        assert abs(back - rho) <= 1e-12 * rho

    alpha, rho = 2.5, 1.3
    stretch = rho ** (2.0 * alpha / (4.0 - alpha))
    s = g.decay_rate(alpha, 1, 2.0)
    grid = fs.Grid(x_half_width=27.0 * stretch / s, nx=2048, L=TWO_PI, ny=32)
    prof = g.z_rho_profile(alpha, 1, 2.0, grid.x)
    mod = 1.0 + 0.05 * np.cos(2.0 * math.pi * grid.y / grid.L)
    u = fs.Field(mod[:, None] * prof[None, :], grid)
    _, residual = fs.transform_roundtrip(u, rho, params)
    assert residual < 1e-4

    from waveguide_nls import specfun

    for k in range(1, 21):
        ratio = specfun.sphere_volume(k + 1) / specfun.sphere_volume(k)
        assert abs(ratio - specfun.beta(0.5, 0.5 * (k + 1))) <= 1e-12 * ratio
    report(9, 10.0, started, "scaling round trips, energy-transform residual, volume ratios")
