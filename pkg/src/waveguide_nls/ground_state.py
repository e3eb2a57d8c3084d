"""Closed forms and shooting machinery for the focusing NLS soliton on R^N.

The unit-frequency profile U solves -Lap U + U = U^(1+alpha) with U > 0 and
U(0) = max U.  Every mass-rho soliton Z_rho is a rescaling of U:

    Z_rho(x) = (rho/rho0)^(4/(4-alpha N)) U((rho/rho0)^(2 alpha/(4-alpha N)) x),

where rho0 = L2 mass of U.  All energies, norms and Lagrange multipliers of
the Z_rho family follow from rho0 through exact power laws, which is what this
module exposes.  For N = 1 everything is explicit through the Beta function;
for N >= 2 the profile is computed once by radial shooting and cached.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, NumericError
from . import specfun

# Treat theta(alpha) = 2 as mass-critical within this absolute slack.
MASS_CRITICAL_TOL = 1e-9


@dataclass(frozen=True)
class ProblemParams:
    """Dimensions (N, k) of the product domain R^N x M^k and the power alpha.

    Admissible window: 4/(N+k) <= alpha < min(4/N, 4/(N+k-2)), the upper
    Sobolev-type bound read as +inf when N + k <= 2.
    """

    N: int
    k: int
    alpha: float

    def __post_init__(self):
        for name in ("N", "k"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise DomainError(f"{name} must be an integer >= 1, got {v!r}")
        a = self.alpha
        if not isinstance(a, (int, float)) or not math.isfinite(a):
            raise DomainError(f"alpha must be a finite real, got {a!r}")
        object.__setattr__(self, "alpha", float(a))
        lo = 4.0 / (self.N + self.k)
        hi = 4.0 / self.N
        if self.N + self.k > 2:
            hi = min(hi, 4.0 / (self.N + self.k - 2))
        # Small slack on the lower end so alpha = 4/(N+k) written as a float
        # is accepted regardless of rounding.
        if not (lo * (1.0 - 1e-12) <= self.alpha < hi):
            raise DomainError(
                f"alpha={self.alpha} outside admissible window [{lo}, {hi}) "
                f"for N={self.N}, k={self.k}"
            )

    @property
    def theta(self):
        """Gagliardo-Nirenberg interpolation exponent (N+k) alpha / 2."""
        return 0.5 * (self.N + self.k) * self.alpha

    @property
    def is_mass_critical(self):
        return abs(self.theta - 2.0) <= MASS_CRITICAL_TOL


@dataclass(frozen=True)
class GroundStateData:
    """Mass rho0 of the unit-frequency soliton and the energy constant G.

    The ground-state level at mass rho is I_rho = -G rho^(2 + 4 alpha/(4 - N alpha)),
    so G = -I_1 > 0.  log_G is carried alongside because G = exp(log_G)
    underflows float64 when alpha sits within ~1e-4 of 4/N (the scaling
    exponent blows up there); consumers with extreme exponents work in logs.
    """

    rho0: float
    G: float
    alpha: float
    N: int
    log_G: float

    def __post_init__(self):
        if not (self.rho0 > 0.0 and math.isfinite(self.rho0)):
            raise DomainError(f"rho0 must be positive, got {self.rho0}")
        if not math.isfinite(self.log_G):
            raise DomainError(f"log_G must be finite, got {self.log_G}")
        if not (self.G >= 0.0 and math.isfinite(self.G)):
            raise DomainError(f"G must be nonnegative, got {self.G}")
        if self.G == 0.0 and self.log_G > -700.0:
            raise DomainError("G underflowed although log_G is representable")


def _validate_alpha_for_rn(alpha, N):
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise DomainError(f"N must be an integer >= 1, got {N!r}")
    if not isinstance(alpha, (int, float)) or not math.isfinite(alpha):
        raise DomainError(f"alpha must be a finite real, got {alpha!r}")
    alpha = float(alpha)
    # Mass-subcritical on R^N; for N >= 3 this is also Sobolev-subcritical
    # since 4/N < 4/(N-2).
    if not (0.0 < alpha < 4.0 / N):
        raise DomainError(f"alpha must lie in (0, {4.0 / N}) for N={N}, got {alpha}")
    return alpha


def soliton_profile_1d(alpha, x):
    """Unit-frequency soliton U(x) = (1+alpha/2)^(1/alpha) cosh(alpha x/2)^(-2/alpha).

    Accepts scalar or array x; evaluated through log-cosh so large |x| underflows
    smoothly instead of overflowing cosh.
    """
    if not isinstance(alpha, (int, float)) or not math.isfinite(alpha) or alpha <= 0:
        raise DomainError(f"alpha must be positive and finite, got {alpha!r}")
    alpha = float(alpha)
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("x must be finite")
    t = np.abs(0.5 * alpha * x)
    # log cosh t = t + log1p(exp(-2t)) - log 2, stable for all t >= 0
    log_cosh = t + np.log1p(np.exp(-2.0 * t)) - math.log(2.0)
    amp = (1.0 + 0.5 * alpha) ** (1.0 / alpha)
    out = amp * np.exp(-(2.0 / alpha) * log_cosh)
    return out if out.ndim else float(out)


def soliton_profile_1d_derivative(alpha, x):
    """U'(x) = -U(x) tanh(alpha x / 2); used by quadrature cross-checks."""
    x = np.asarray(x, dtype=float)
    out = -soliton_profile_1d(alpha, x) * np.tanh(0.5 * alpha * x)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# rho0: closed form for N = 1, radial shooting for N >= 2
# ---------------------------------------------------------------------------

def _rho0_closed_form_1d(alpha):
    # Integral of U^2 over R: (1+alpha/2)^(2/alpha) * (2/alpha) * B(1/2, 2/alpha)
    return math.sqrt(
        (1.0 + 0.5 * alpha) ** (2.0 / alpha)
        * (2.0 / alpha)
        * specfun.beta(0.5, 2.0 / alpha)
    )


def _radial_rhs(N, alpha):
    def rhs(r, y):
        u, v = y
        return (v, u - u * abs(u) ** alpha - (N - 1) / r * v)

    return rhs


_OVERSHOOT, _UNDERSHOOT, _DECAYED = -1, 1, 0


def _classify_shot(alpha, N, a, r_max):
    """Integrate the radial ODE from U(0)=a and classify the trajectory."""
    r0 = 1e-8
    curv = (a - a ** (1.0 + alpha)) / N
    y0 = (a + 0.5 * curv * r0 * r0, curv * r0)

    def hit_zero(r, y):
        return y[0]

    hit_zero.terminal = True
    hit_zero.direction = -1.0

    def turning(r, y):
        return y[1]

    turning.terminal = True
    turning.direction = 1.0

    sol = solve_ivp(
        _radial_rhs(N, alpha),
        (r0, r_max),
        y0,
        events=(hit_zero, turning),
        rtol=1e-11,
        atol=1e-13,
        dense_output=False,
    )
    if not sol.success:
        raise NumericError(f"radial integration failed at a={a}: {sol.message}")
    if sol.t_events[0].size:
        return _OVERSHOOT
    if sol.t_events[1].size:
        return _UNDERSHOOT
    if abs(sol.y[0, -1]) < 1e-8 * a:
        return _DECAYED
    # Ran out of range while still descending: widen and retry upstream.
    return None


@lru_cache(maxsize=None)
def _shoot_ground_state(alpha, N):
    """Find the shooting parameter a* = U(0) for the N-dim radial ground state.

    Bisection on the overshoot/undershoot dichotomy, bracket seeded at
    [1, 10 (1+alpha/2)^(1/alpha)], parameter tolerance 1e-12 relative.
    Returns (a_star, r_grid, u_grid) with u sampled to the 1e-10 decay point.
    """
    lo = 1.0
    hi = 10.0 * (1.0 + 0.5 * alpha) ** (1.0 / alpha)
    r_max = 30.0
    if _classify_shot(alpha, N, hi, r_max) is not _OVERSHOOT:
        raise NumericError(f"shooting bracket upper end {hi} did not overshoot")
    for _ in range(200):
        if hi - lo <= 1e-14 * hi:
            break
        mid = 0.5 * (lo + hi)
        verdict = _classify_shot(alpha, N, mid, r_max)
        attempts = 0
        while verdict is None and attempts < 8:
            r_max *= 1.5
            verdict = _classify_shot(alpha, N, mid, r_max)
            attempts += 1
        if verdict is None or verdict is _DECAYED:
            # Trajectory indistinguishable from the connecting orbit at this
            # resolution; the bracket is already tight enough.
            lo = hi = mid
            break
        if verdict is _OVERSHOOT:
            hi = mid
        else:
            lo = mid
    else:
        raise NumericError("shooting bisection did not converge in 200 steps")
    a_star = 0.5 * (lo + hi)

    # One clean trajectory for quadrature.  Bisection error grows like e^r
    # along the connecting orbit, so the trajectory is truncated either at
    # deep decay or at the turning point where it peels off; the exponential
    # tail past a turning point at U < 1e-6 a* carries negligible mass.
    r0 = 1e-8
    curv = (a_star - a_star ** (1.0 + alpha)) / N
    y0 = (a_star + 0.5 * curv * r0 * r0, curv * r0)

    def decayed(r, y):
        return y[0] - 1e-10 * a_star

    decayed.terminal = True
    decayed.direction = -1.0

    def turning(r, y):
        return y[1]

    turning.terminal = True
    turning.direction = 1.0

    sol = solve_ivp(
        _radial_rhs(N, alpha),
        (r0, 10.0 * r_max),
        y0,
        events=(decayed, turning),
        rtol=1e-11,
        atol=1e-13,
        dense_output=True,
    )
    if sol.t_events[0].size:
        r_end = float(sol.t_events[0][0])
    elif sol.t_events[1].size:
        r_end = float(sol.t_events[1][0])
        u_end = float(sol.sol(r_end)[0])
        if not 0.0 < u_end < 1e-6 * a_star:
            raise NumericError(
                f"shooting trajectory at a*={a_star} peeled off early "
                f"(U={u_end:.3e} at r={r_end:.2f})"
            )
    else:
        raise NumericError(
            f"ground-state trajectory at a*={a_star} did not reach decay "
            f"(final U={sol.y[0, -1]:.3e})"
        )
    r = np.linspace(r0, r_end, 20001)
    u = sol.sol(r)[0]
    return a_star, r, u


def rho0(alpha, N):
    """L2 mass of the unit-frequency ground state U on R^N."""
    alpha = _validate_alpha_for_rn(alpha, N)
    if N == 1:
        return _rho0_closed_form_1d(alpha)
    _, r, u = _shoot_ground_state(alpha, N)
    surface = specfun.sphere_volume(N - 1)
    mass_sq = surface * float(np.trapezoid(u * u * r ** (N - 1), r))
    # Core below r0 and tail past the 1e-10 cutoff are both negligible but cheap.
    mass_sq += surface * u[0] ** 2 * r[0] ** N / N
    return math.sqrt(mass_sq)


def radial_profile(alpha, N, r):
    """Ground-state profile U(|x|) for any N; closed form when N = 1."""
    if N == 1:
        return soliton_profile_1d(alpha, r)
    alpha = _validate_alpha_for_rn(alpha, N)
    _, rg, ug = _shoot_ground_state(alpha, N)
    r = np.asarray(r, dtype=float)
    out = np.interp(np.abs(r), rg, ug, right=0.0)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Energy constant, level, identities and scalings
# ---------------------------------------------------------------------------

def log_g_constant(alpha, N):
    """log of the energy constant; exact even where exp(log_G) underflows.

    G = (4 - alpha N) / (8 - 2 alpha N + 4 alpha) * rho0^(-4 alpha/(4 - N alpha)).
    """
    alpha = _validate_alpha_for_rn(alpha, N)
    r0 = rho0(alpha, N)
    return math.log(
        (4.0 - alpha * N) / (8.0 - 2.0 * alpha * N + 4.0 * alpha)
    ) - 4.0 * alpha / (4.0 - N * alpha) * math.log(r0)


def g_constant(alpha, N):
    """Energy constant G = -I_1 > 0 (underflows to 0.0 only for alpha ~ 4/N)."""
    return math.exp(log_g_constant(alpha, N))


@lru_cache(maxsize=None)
def ground_state_data(alpha, N):
    """Bundle (rho0, G, log_G) for the (alpha, N) soliton family; cached."""
    alpha = _validate_alpha_for_rn(alpha, N)
    lg = log_g_constant(alpha, N)
    return GroundStateData(
        rho0=rho0(alpha, N), G=math.exp(lg), alpha=alpha, N=N, log_G=lg
    )


def energy_exponent(alpha, N):
    """Mass exponent of the ground-state level: I_rho ~ rho^(2 + 4 alpha/(4 - N alpha))."""
    return 2.0 + 4.0 * alpha / (4.0 - N * alpha)


def i_rho(alpha, N, rho):
    """Ground-state energy level I_rho = -G rho^(2 + 4 alpha/(4 - N alpha)) < 0."""
    if not (rho > 0.0 and math.isfinite(rho)):
        raise DomainError(f"rho must be positive, got {rho!r}")
    return -g_constant(alpha, N) * rho ** energy_exponent(alpha, N)


def ground_state_identities(alpha, N, rho):
    """Exact norms of Z_rho in terms of I_rho.

    Returns (grad_norm_sq, lp_norm_pow) with
        grad_norm_sq = -2 alpha N / (4 - alpha N) * I_rho,
        lp_norm_pow  = -4 (alpha + 2) / (4 - alpha N) * I_rho  (the 2+alpha power).
    """
    level = i_rho(alpha, N, rho)
    denom = 4.0 - alpha * N
    return (-2.0 * alpha * N / denom * level, -4.0 * (alpha + 2.0) / denom * level)


def z_rho_profile(alpha, N, rho, x):
    """Mass-rho soliton sample Z_rho(x); x is radial for N >= 2."""
    if not (rho > 0.0 and math.isfinite(rho)):
        raise DomainError(f"rho must be positive, got {rho!r}")
    r0 = rho0(alpha, N)
    denom = 4.0 - alpha * N
    amp = (rho / r0) ** (4.0 / denom)
    stretch = (rho / r0) ** (2.0 * alpha / denom)
    return amp * radial_profile(alpha, N, stretch * np.asarray(x, dtype=float))


def omega_rho(alpha, N, rho):
    """Lagrange multiplier of Z_rho: omega_rho = (rho/rho0)^(4 alpha/(4 - alpha N)).

    Follows from the rescaling of the unit-frequency equation; the frequency of
    mu^(2/alpha) U(mu x) is mu^2.  Validated numerically through the ODE residual
    rather than quoted from a closed-form source.
    """
    if not (rho > 0.0 and math.isfinite(rho)):
        raise DomainError(f"rho must be positive, got {rho!r}")
    alpha = _validate_alpha_for_rn(alpha, N)
    return (rho / rho0(alpha, N)) ** (4.0 * alpha / (4.0 - alpha * N))


def decay_rate(alpha, N, rho):
    """Exponential decay rate of Z_rho, sqrt(omega_rho); sets quadrature windows."""
    return math.sqrt(omega_rho(alpha, N, rho))
