"""Discretized constrained minimization on the strip R_x x (circle of length L).

Fields live on a rectangular grid: uniform x samples on [-X, X] with the field
required to decay below 1e-10 of its max at the boundary (Dirichlet ghosts are
zero), and ny periodic samples in y.  The discrete energy is

    E_h(u) = sum [ 1/2 u (-Lap4 u) - |u|^(2+alpha)/(2+alpha) ] dx dy,

with Lap4 the fourth-order centered Laplacian (Dirichlet in x, periodic in y).
Defining the gradient part through the quadratic form makes

    grad E_h(u) = -Lap4 u - u |u|^alpha

the exact discrete gradient, which the directional-derivative tests rely on;
plain rectangle weights coincide with trapezoid weights to ~1e-20 once the
boundary-decay invariant holds.

The normalized gradient flow descends E_h with projection back onto the mass
sphere after every step, backtracking (halving dt) whenever a step would
increase the energy, so accepted iterates are exactly monotone.  A scan over
masses locates the symmetry-breaking threshold: below it the flow returns the
y-independent soliton at its closed-form energy, above it the first circle
harmonic grows and the minimizer drops strictly below the trivial level.
"""

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError, NumericError
from .ground_state import (
    ProblemParams,
    decay_rate,
    ground_state_data,
    i_rho,
    z_rho_profile,
)

BOUNDARY_DECAY = 1e-10

STATUS_CONVERGED = "converged"
STATUS_HIT_T_STAR = "hit-t-star"
STATUS_MAX_ITERATIONS = "max-iterations"
STATUS_DIVERGED = "diverged"


@dataclass(frozen=True)
class Grid:
    """Rectangular grid: x in [-X, X] (nx uniform samples), y periodic of length L."""

    x_half_width: float = 20.0
    nx: int = 512
    L: float = 2.0 * math.pi
    ny: int = 64

    def __post_init__(self):
        if not (self.x_half_width > 0.0 and math.isfinite(self.x_half_width)):
            raise DomainError(f"x_half_width must be positive, got {self.x_half_width!r}")
        if not (self.L > 0.0 and math.isfinite(self.L)):
            raise DomainError(f"L must be positive, got {self.L!r}")
        for name in ("nx", "ny"):
            n = getattr(self, name)
            if isinstance(n, bool) or not isinstance(n, int) or n < 8 or n % 2:
                raise DomainError(f"{name} must be an even integer >= 8, got {n!r}")

    @property
    def dx(self):
        return 2.0 * self.x_half_width / (self.nx - 1)

    @property
    def dy(self):
        return self.L / self.ny

    @property
    def x(self):
        return np.linspace(-self.x_half_width, self.x_half_width, self.nx)

    @property
    def y(self):
        return np.arange(self.ny) * self.dy

    @property
    def cell(self):
        return self.dx * self.dy


@dataclass
class Field:
    """Real samples of u(x, y), shape (ny, nx), tied to a Grid."""

    samples: np.ndarray
    grid: Grid

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.shape != (self.grid.ny, self.grid.nx):
            raise DomainError(
                f"samples shape {self.samples.shape} does not match grid "
                f"(ny={self.grid.ny}, nx={self.grid.nx})"
            )
        if not np.all(np.isfinite(self.samples)):
            raise DomainError("field samples must be finite")


@dataclass(frozen=True)
class FlowConfig:
    """Descent parameters; defaults favor robustness over speed."""

    dt: float = 1e-3
    dt_min: float = 1e-12
    dt_max_factor: float = 8.0  # cap for the regrown step, relative to dt
    dt_grow_every: int = 100  # double dt after this many consecutive accepts
    tol: float = 1e-10  # relative energy-stall tolerance
    patience: int = 50  # consecutive sub-tol steps required to stop
    max_iters: int = 400_000
    divergence_window: int = 200  # t-ratio net-growth lookback, accepted steps
    divergence_energy_factor: float = 10.0
    # a stalled state concentrated at the grid scale is a collapse arrested by
    # resolution, not a minimizer; t_ratio * dx^2 of resolved states is O(1e-2)
    concentration_limit: float = 0.25
    record_energies: bool = False  # keep the accepted-step energy sequence


@dataclass(frozen=True)
class ScanConfig:
    L: float = 2.0 * math.pi
    nx: int = 512
    ny: int = 64
    epsilon: float = 0.05
    nontrivial_tol: float = 1e-6
    tol_rel: float = 1e-3
    t_star_cap: float = math.inf  # unknown gradient cap on tori: monitor, don't cap
    x_margin: float = 26.0  # grid half-width in soliton e-foldings
    flow: FlowConfig = field(default_factory=FlowConfig)


@dataclass(frozen=True)
class MinimizeResult:
    energy: float
    mass: float
    t_ratio: float
    y_nontriviality: float
    iterations: int
    status: str
    field: Optional[Field] = None
    message: str = ""
    energies: Optional[tuple] = None  # accepted-step sequence when recorded


@dataclass(frozen=True)
class ScanRow:
    rho: float
    m_numeric: float
    I_closed: float
    y_nontriviality: float
    t_ratio: float
    iterations: int
    status: str


@dataclass(frozen=True)
class ScanResult:
    rows: tuple
    rho_tr_estimate: Optional[float]
    rho_tr_upper: float


# ---------------------------------------------------------------------------
# Stencils and quadrature (raw-array internals, Field wrappers below)
# ---------------------------------------------------------------------------

def _lap4_x(u, dx):
    """Fourth-order centered Laplacian in x, zero Dirichlet ghosts.

    Assembled from neighbor differences (16 nearest, -1 next-nearest, ghosts
    contribute (0 - u)) so constant slices map to exact floating-point zero.
    """
    out = np.zeros_like(u)
    out[:, :-1] += 16.0 * (u[:, 1:] - u[:, :-1])
    out[:, -1] -= 16.0 * u[:, -1]
    out[:, 1:] += 16.0 * (u[:, :-1] - u[:, 1:])
    out[:, 0] -= 16.0 * u[:, 0]
    out[:, :-2] -= u[:, 2:] - u[:, :-2]
    out[:, -2:] += u[:, -2:]
    out[:, 2:] -= u[:, :-2] - u[:, 2:]
    out[:, :2] += u[:, :2]
    return out / (12.0 * dx * dx)


def _lap4_y(u, dy):
    """Fourth-order centered Laplacian in y, periodic; difference form."""
    up1 = np.roll(u, 1, axis=0)
    um1 = np.roll(u, -1, axis=0)
    up2 = np.roll(u, 2, axis=0)
    um2 = np.roll(u, -2, axis=0)
    out = 16.0 * ((up1 - u) + (um1 - u)) - ((up2 - u) + (um2 - u))
    return out / (12.0 * dy * dy)


def fd_laplacian_eigenvalue(wavenumber, spacing):
    """Eigenvalue of -Lap4 on the mode cos(wavenumber * y); exact for the stencil."""
    t = wavenumber * spacing
    return (30.0 - 32.0 * math.cos(t) + 2.0 * math.cos(2.0 * t)) / (12.0 * spacing**2)


def _check_boundary_decay(u):
    peak = float(np.max(np.abs(u)))
    if peak == 0.0:
        return
    edge = max(float(np.max(np.abs(u[:, 0]))), float(np.max(np.abs(u[:, -1]))))
    if edge > BOUNDARY_DECAY * peak:
        raise DomainError(
            f"boundary samples at {edge / peak:.2e} of the field max exceed "
            f"{BOUNDARY_DECAY:.0e}; enlarge x_half_width"
        )


def mass(u: Field) -> float:
    """Discrete squared L2 norm (the conserved 'mass' rho^2)."""
    return float(np.sum(u.samples * u.samples)) * u.grid.cell


def lp_power_norm(u: Field, p: float) -> float:
    """Discrete integral of |u|^p."""
    return float(np.sum(np.abs(u.samples) ** p)) * u.grid.cell


def grad_norms(u: Field):
    """(gx2, gy2): quadratic forms <u, -Lap4_x u> and <u, -Lap4_y u>, both >= 0."""
    g = u.grid
    s = u.samples
    gx2 = -float(np.sum(s * _lap4_x(s, g.dx))) * g.cell
    gy2 = -float(np.sum(s * _lap4_y(s, g.dy))) * g.cell
    return gx2, gy2


def t_ratio(u: Field) -> float:
    """||grad u||^2 / ||u||^2, the quantity the gradient cap constrains."""
    m = mass(u)
    if m <= 0.0:
        raise DomainError("t_ratio undefined for a zero field")
    gx2, gy2 = grad_norms(u)
    return (gx2 + gy2) / m


def discrete_energy(u: Field, alpha: float) -> float:
    """E_h(u) = 1/2 ||grad u||^2 - ||u||_{2+alpha}^{2+alpha} / (2+alpha)."""
    _check_boundary_decay(u.samples)
    gx2, gy2 = grad_norms(u)
    return 0.5 * (gx2 + gy2) - lp_power_norm(u, 2.0 + alpha) / (2.0 + alpha)


def discrete_energy_lambda(u: Field, alpha: float, lam: float) -> float:
    """Anisotropic energy: the y-gradient term carries the weight lam."""
    _check_boundary_decay(u.samples)
    gx2, gy2 = grad_norms(u)
    return 0.5 * gx2 + 0.5 * lam * gy2 - lp_power_norm(u, 2.0 + alpha) / (2.0 + alpha)


def l2_gradient(u: Field, alpha: float) -> Field:
    """Exact discrete L2 gradient of E_h: -Lap4 u - u |u|^alpha."""
    g = u.grid
    s = u.samples
    grad = -_lap4_x(s, g.dx) - _lap4_y(s, g.dy) - np.abs(s) ** alpha * s
    return Field(samples=grad, grid=g)


def y_nontriviality(u: Field) -> float:
    """Fraction of the discrete mass in nonzero y-frequencies, in [0, 1].

    Parseval along the periodic direction: mass minus the mass of the y-mean.
    """
    m = mass(u)
    if m <= 0.0:
        raise DomainError("y_nontriviality undefined for a zero field")
    ybar = u.samples.mean(axis=0)
    mean_mass = float(np.sum(ybar * ybar)) * u.grid.dx * u.grid.L
    frac = 1.0 - mean_mass / m
    return min(1.0, max(0.0, frac))


# ---------------------------------------------------------------------------
# Initial data and grids
# ---------------------------------------------------------------------------

def grid_for_mass(params: ProblemParams, rho, L, nx=512, ny=64, x_margin=26.0) -> Grid:
    """Grid whose half-width covers x_margin e-foldings of the mass-rho soliton.

    The y-trivial profile at product mass rho has rescaled mass rho/sqrt(L) and
    decay rate sqrt(omega); 26 e-foldings push the boundary below the 1e-10
    decay invariant with an order of magnitude to spare.
    """
    rho_hat = rho / math.sqrt(L)
    s = decay_rate(params.alpha, params.N, rho_hat)
    return Grid(x_half_width=x_margin / s, nx=nx, L=L, ny=ny)


def make_initial(params: ProblemParams, rho, epsilon, grid: Grid) -> Field:
    """Soliton of rescaled mass rho/sqrt(L), modulated by (1 + eps cos(2 pi y/L)),
    then renormalized to the exact target mass rho^2.

    The cosine is the first circle harmonic, the direction along which the
    trivial branch loses stability.
    """
    if params.N != 1:
        raise DomainError("the field solver is built for N = 1 (strip x circle)")
    if epsilon < 0.0:
        raise DomainError(f"epsilon must be >= 0, got {epsilon}")
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho}")
    rho_hat = rho / math.sqrt(grid.L)
    profile = z_rho_profile(params.alpha, 1, rho_hat, grid.x)
    modulation = 1.0 + epsilon * np.cos(2.0 * math.pi * grid.y / grid.L)
    samples = modulation[:, None] * profile[None, :]
    out = Field(samples=samples, grid=grid)
    out.samples *= rho / math.sqrt(mass(out))
    return out


# ---------------------------------------------------------------------------
# Normalized gradient flow
# ---------------------------------------------------------------------------

def normalized_gradient_flow(
    init: Field,
    rho: float,
    alpha: float,
    t_star_cap: float = math.inf,
    config: FlowConfig = FlowConfig(),
) -> MinimizeResult:
    """Projected descent of E_h on the mass-rho^2 sphere.

    Steps u -> renormalize(u - dt grad E_h(u)); a step is accepted only if the
    energy does not increase, otherwise dt is halved (and slowly regrown after
    long streaks of accepts).  Stops when the relative energy change stays
    below config.tol for config.patience consecutive accepted steps
    (status converged), when t(u) exceeds t_star_cap (hit-t-star), when the
    energy has fallen an order of magnitude below the initial scale with t(u)
    still net-growing over the lookback window (diverged; the mass-
    supercritical collapse guard), or at config.max_iters.  A stall whose
    t(u) dx^2 marks grid-scale concentration is reported diverged as well:
    that stationarity is resolution-limited collapse, not a minimizer.
    """
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho}")
    grid = init.grid
    target = rho * rho
    m0 = mass(init)
    if abs(m0 - target) > 1e-10 * target:
        raise DomainError(
            f"initial mass {m0} is not the target {target} (relative "
            f"{abs(m0 - target) / target:.2e})"
        )
    cell = grid.cell
    p = 2.0 + alpha

    def energy_parts(arr):
        lap = _lap4_x(arr, grid.dx) + _lap4_y(arr, grid.dy)
        quad = -float(np.sum(arr * lap)) * cell  # ||grad u||^2 as a quadratic form
        absa = np.abs(arr) ** alpha
        nonlin = float(np.sum(absa * arr * arr)) * cell
        return quad, lap, absa, 0.5 * quad - nonlin / p

    u = init.samples.copy()
    u *= rho / math.sqrt(float(np.sum(u * u)) * cell)
    try:
        _check_boundary_decay(u)
        quad, lap, absa, energy = energy_parts(u)
    except DomainError as exc:
        return MinimizeResult(
            energy=math.nan,
            mass=float(np.sum(u * u)) * cell,
            t_ratio=math.nan,
            y_nontriviality=math.nan,
            iterations=0,
            status=STATUS_DIVERGED,
            field=Field(samples=u, grid=grid),
            message=str(exc),
        )
    e_scale = max(abs(energy), 1e-12)
    dt = config.dt
    dt_cap = config.dt * config.dt_max_factor
    grad = -lap - absa * u
    stall = 0
    accepts_in_row = 0
    t_hist = deque([quad / target], maxlen=config.divergence_window + 1)
    status = STATUS_MAX_ITERATIONS
    message = ""
    iterations = 0
    energy_trace = [energy] if config.record_energies else None

    for iterations in range(1, config.max_iters + 1):
        cand = u - dt * grad
        cand *= rho / math.sqrt(float(np.sum(cand * cand)) * cell)
        quad_c, lap_c, absa_c, energy_c = energy_parts(cand)
        if not math.isfinite(energy_c) or energy_c > energy:
            dt *= 0.5
            accepts_in_row = 0
            if dt < config.dt_min:
                status = STATUS_CONVERGED if stall > 0 else STATUS_MAX_ITERATIONS
                message = "step size underflow"
                break
            continue

        rel_change = abs(energy - energy_c) / max(abs(energy_c), 1e-300)
        u, quad, energy = cand, quad_c, energy_c
        if energy_trace is not None:
            energy_trace.append(energy)
        grad = -lap_c - absa_c * u
        accepts_in_row += 1
        if accepts_in_row % config.dt_grow_every == 0:
            dt = min(2.0 * dt, dt_cap)

        t_now = quad / target
        if t_now > t_star_cap:
            status = STATUS_HIT_T_STAR
            break
        t_hist.append(t_now)
        if (
            energy < -config.divergence_energy_factor * e_scale
            and len(t_hist) > config.divergence_window
            and t_now > t_hist[0]
        ):
            status = STATUS_DIVERGED
            message = "energy collapse with sustained gradient growth"
            break

        stall = stall + 1 if rel_change < config.tol else 0
        if stall >= config.patience:
            status = STATUS_CONVERGED
            break

        edge = max(float(np.max(np.abs(u[:, 0]))), float(np.max(np.abs(u[:, -1]))))
        if edge > BOUNDARY_DECAY * float(np.max(np.abs(u))):
            status = STATUS_DIVERGED
            message = "field spread to the x boundary; grid too small"
            break

    if (
        status == STATUS_CONVERGED
        and (quad / target) * grid.dx**2 > config.concentration_limit
    ):
        # stationary only because the grid cannot resolve further shrinking
        status = STATUS_DIVERGED
        message = "stalled at grid-scale concentration (arrested collapse)"

    out = Field(samples=u, grid=grid)
    final_mass = mass(out)
    return MinimizeResult(
        energy=energy,
        mass=final_mass,
        t_ratio=quad / target,
        y_nontriviality=y_nontriviality(out),
        iterations=iterations,
        status=status,
        field=out,
        message=message,
        energies=tuple(energy_trace) if energy_trace is not None else None,
    )


# ---------------------------------------------------------------------------
# Transform round trip, second variation, bifurcation scan
# ---------------------------------------------------------------------------

def transform_roundtrip(u: Field, rho, params: ProblemParams):
    """Rescale u in S_rho to v in S_1 and report the scaling-law residual.

    v(x, y) = rho^(-4/(4 - alpha N)) u(x / rho^(2 alpha/(4 - alpha N)), y),
    resampled on the same grid by cubic interpolation, so u must carry enough
    margin for the stretched support to stay inside the window.  Residual is
    |E(u) - rho^(2 + 4 alpha/(4 - N alpha)) E_lambda(v)| / |E(u)| with
    lambda = rho^(-4 alpha/(4 - alpha N)).
    """
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho}")
    a, N = params.alpha, params.N
    denom = 4.0 - a * N
    stretch = rho ** (2.0 * a / denom)
    amp = rho ** (4.0 / denom)
    grid = u.grid
    source = grid.x / stretch
    resampled = np.empty_like(u.samples)
    for j in range(grid.ny):
        spline = CubicSpline(grid.x, u.samples[j], bc_type="natural")
        resampled[j] = spline(source)
    v = Field(samples=resampled / amp, grid=grid)
    _check_boundary_decay(v.samples)
    lam = rho ** (-4.0 * a / denom)
    eu = discrete_energy(u, a)
    ev = discrete_energy_lambda(v, a, lam)
    if eu == 0.0:
        raise DomainError("transform residual undefined for a zero-energy field")
    residual = abs(eu - rho ** (2.0 + 4.0 * a / (4.0 - N * a)) * ev) / abs(eu)
    return v, residual


def second_variation_fd(params: ProblemParams, rho, grid: Grid, h=1e-4) -> float:
    """Centered second difference of E_h at the y-trivial soliton along the
    normalized first-harmonic direction phi(x,y) = sqrt(2/L) cos(2 pi y/L) Z(x).

    Matches the closed form mu1 rho_hat^2 + c(alpha, N) I_rho_hat with
    mu1 = (2 pi / L)^2 and rho_hat = rho / sqrt(L) up to grid error.
    """
    if params.N != 1:
        raise DomainError("second_variation_fd is built for N = 1")
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho}")
    rho_hat = rho / math.sqrt(grid.L)
    profile = z_rho_profile(params.alpha, 1, rho_hat, grid.x)
    phi1 = math.sqrt(2.0 / grid.L) * np.cos(2.0 * math.pi * grid.y / grid.L)
    base = np.ones(grid.ny)[:, None] * profile[None, :]
    direction = phi1[:, None] * profile[None, :]
    e0 = discrete_energy(Field(samples=base, grid=grid), params.alpha)
    ep = discrete_energy(Field(samples=base + h * direction, grid=grid), params.alpha)
    em = discrete_energy(Field(samples=base - h * direction, grid=grid), params.alpha)
    return (ep - 2.0 * e0 + em) / (h * h)


def bifurcation_scan(rho_grid, params: ProblemParams, config: ScanConfig = ScanConfig()):
    """Run the perturbed flow over an ascending mass grid and report per-row data.

    Per row: m_numeric (converged discrete energy), I_closed (closed-form
    trivial-branch energy L * I(rho/sqrt(L))), the y-nontriviality fraction,
    t(u), iterations and status.  The estimated symmetry-breaking mass is the
    first rho whose converged row is strictly below the trivial level
    (m < I - tol_rel |I|) and y-nontrivial.  Row failures are recorded in the
    status, never raised.
    """
    rho_grid = [float(r) for r in rho_grid]
    if any(b <= a for a, b in zip(rho_grid, rho_grid[1:])):
        raise DomainError("rho_grid must be strictly ascending")
    rows = []
    estimate = None
    gs = ground_state_data(params.alpha, params.N)
    from .thresholds import rho_tr_upper as _rtu

    mu1 = (2.0 * math.pi / config.L) ** 2
    upper = _rtu(params, mu1, gs, vol=config.L)
    for rho in rho_grid:
        rho_hat = rho / math.sqrt(config.L)
        closed = config.L * i_rho(params.alpha, params.N, rho_hat)
        try:
            grid = grid_for_mass(
                params, rho, config.L, nx=config.nx, ny=config.ny, x_margin=config.x_margin
            )
            init = make_initial(params, rho, config.epsilon, grid)
            result = normalized_gradient_flow(
                init, rho, params.alpha, t_star_cap=config.t_star_cap, config=config.flow
            )
            row = ScanRow(
                rho=rho,
                m_numeric=result.energy,
                I_closed=closed,
                y_nontriviality=result.y_nontriviality,
                t_ratio=result.t_ratio,
                iterations=result.iterations,
                status=result.status,
            )
        except (DomainError, NumericError) as exc:
            row = ScanRow(
                rho=rho,
                m_numeric=math.nan,
                I_closed=closed,
                y_nontriviality=math.nan,
                t_ratio=math.nan,
                iterations=0,
                status=f"error: {exc}",
            )
        rows.append(row)
        # Departure signature: energy strictly below the trivial level with a
        # grown y-mode.  Divergent rows above the threshold still carry it
        # (the flow leaves the trivial branch before any collapse), so the
        # estimate does not require convergence.
        if (
            estimate is None
            and math.isfinite(row.m_numeric)
            and row.m_numeric < closed - config.tol_rel * abs(closed)
            and row.y_nontriviality > config.nontrivial_tol
        ):
            estimate = rho
    return ScanResult(rows=tuple(rows), rho_tr_estimate=estimate, rho_tr_upper=upper)
