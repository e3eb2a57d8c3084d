"""Threshold calculus: existence and (non)triviality masses and the criteria.

Central objects, all driven by the lower-bound function

    f(t, rho) = rho^2 [ t/2 - (A rho^alpha / (2+alpha)) (t + B)^(theta/2) ],

which bounds the constrained energy from below on the mass-rho sphere:

  * t_star          gradient cap 4B/((N+k) alpha - 4); +inf at mass-critical.
  * rho_ex_basic    simultaneous root of f = d_t f = 0, the basic existence mass.
  * f_tilde         (f(t_star, rho) - I_rho) / rho^2, whose first zero gives an
                    improved existence mass (sentinel None when it never dips
                    below zero: "unbounded-by-estimate").
  * rho_tr_upper    mass at which the second variation of the energy at the
                    y-trivial soliton along the first manifold mode changes sign;
                    above it the trivial branch stops being a local minimizer.
  * criterion_basic / criterion_improved
                    strict comparisons certifying that y-nontrivial local
                    minimizers exist in a nonempty mass window.

Volumes: all formulas accept un-normalized manifolds.  The trivial-branch
energy on a manifold with vol != 1 uses the mass-rescaled soliton, which
replaces G by G_eff = G vol^(-2 alpha/(4 - N alpha)); the vol^(1/2) factor in
rho_tr_upper and the vol^(alpha/2) factor in the basic criterion are the same
substitution.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Optional

from scipy.optimize import brentq

from .errors import DomainError, NumericError
from .gn_constants import GNConstants, ManifoldSpec, constants_for
from .ground_state import GroundStateData, ProblemParams, ground_state_data

# Relative guard band for the strict inequalities in the criteria; exact ties
# report False plus a warning.
STRICT_GUARD = 1e-12


@dataclass(frozen=True)
class ThresholdReport:
    t_star: float
    rho_ex_basic: float
    rho_ex_improved: Optional[float]
    rho_ex_improved_status: str  # "finite" | "unbounded-by-estimate" | "not-applicable-mass-critical"
    rho_tr_upper: float
    lambda_ex: float
    criterion_basic: bool
    criterion_improved: bool
    conditional_on_B: bool


def _strictly_less(lhs, rhs):
    scale = max(abs(lhs), abs(rhs), 1e-300)
    if abs(lhs - rhs) <= STRICT_GUARD * scale:
        warnings.warn(
            f"criterion comparison is borderline (lhs={lhs!r}, rhs={rhs!r}); "
            "reporting False",
            stacklevel=3,
        )
        return False
    return lhs < rhs


def _beta_exponent(params: ProblemParams) -> float:
    """Mass-scaling exponent 4 alpha / (4 - N alpha) of the soliton family."""
    return 4.0 * params.alpha / (4.0 - params.N * params.alpha)


def _guarded_exp(log_value):
    """exp with saturation: exponents beyond float range surface as inf/0."""
    if log_value > 709.0:
        return math.inf
    if log_value < -745.0:
        return 0.0
    return math.exp(log_value)


def _g_term(params: ProblemParams, gs: GroundStateData, vol, rho):
    """Trivial-branch term G_eff rho^beta of f_tilde, evaluated in log space.

    On a manifold of volume vol the trivial branch at product mass rho is the
    rescaled soliton, E = vol * I(rho/sqrt(vol)) = -G_eff rho^(2+beta) with
    G_eff = G vol^(-beta/2).  beta is huge near alpha = 4/N, so the power is
    assembled from log_G.
    """
    if not (vol > 0.0 and math.isfinite(vol)):
        raise DomainError(f"vol must be positive, got {vol!r}")
    b = _beta_exponent(params)
    return _guarded_exp(gs.log_G + b * (math.log(rho) - 0.5 * math.log(vol)))


def f_lower(t, rho, params: ProblemParams, gn: GNConstants):
    """Lower-bound value rho^2 [ t/2 - (A rho^alpha/(2+alpha)) (t+B)^(theta/2) ]."""
    if t < 0.0:
        raise DomainError(f"t must be >= 0, got {t}")
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho}")
    a = params.alpha
    return rho * rho * (
        0.5 * t - gn.A * rho ** a / (2.0 + a) * (t + gn.B) ** (0.5 * gn.theta)
    )


def f_lower_dt(t, rho, params: ProblemParams, gn: GNConstants):
    """Analytic d/dt of f_lower; used by the stationarity checks."""
    a = params.alpha
    return rho * rho * (
        0.5
        - gn.A * gn.theta * rho ** a / (2.0 * (2.0 + a)) * (t + gn.B) ** (0.5 * gn.theta - 1.0)
    )


def t_star(params: ProblemParams, gn: GNConstants):
    """Gradient cap t* = 4B/((N+k) alpha - 4); +inf on the mass-critical line."""
    if params.is_mass_critical:
        return math.inf
    return 4.0 * gn.B / ((params.N + params.k) * params.alpha - 4.0)


def rho_ex_basic(params: ProblemParams, gn: GNConstants):
    """Basic existence mass.

    Supercritical: [ (2+alpha)/(theta A B^(theta/2-1)) ((theta-2)/theta)^(theta/2-1) ]^(1/alpha),
    extended continuously to ((2+alpha)/(2A))^(1/alpha) at mass-critical.
    """
    a = params.alpha
    if params.is_mass_critical:
        return ((2.0 + a) / (2.0 * gn.A)) ** (1.0 / a)
    th = gn.theta
    value = (
        (2.0 + a)
        / (th * gn.A * gn.B ** (0.5 * th - 1.0))
        * ((th - 2.0) / th) ** (0.5 * th - 1.0)
    )
    return value ** (1.0 / a)


def _c1(params: ProblemParams, gn: GNConstants):
    ts = t_star(params, gn)
    return ts, gn.A * (ts + gn.B) ** (0.5 * gn.theta) / (2.0 + params.alpha)


def f_tilde(rho, params: ProblemParams, gn: GNConstants, gs: GroundStateData, vol=1.0):
    """t*/2 - (A (t*+B)^(theta/2)/(2+alpha)) rho^alpha + G_eff rho^(4 alpha/(4-N alpha)).

    Defined for strictly supercritical alpha only (finite t*).
    """
    if params.is_mass_critical:
        raise DomainError("f_tilde needs a finite t*, undefined at mass-critical alpha")
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho}")
    ts, c1 = _c1(params, gn)
    return 0.5 * ts - c1 * rho ** params.alpha + _g_term(params, gs, vol, rho)


def f_tilde_prime(rho, params: ProblemParams, gn: GNConstants, gs: GroundStateData, vol=1.0):
    """Analytic derivative of f_tilde in rho."""
    if params.is_mass_critical:
        raise DomainError("f_tilde needs a finite t*, undefined at mass-critical alpha")
    a = params.alpha
    _, c1 = _c1(params, gn)
    b = _beta_exponent(params)
    g_deriv = _guarded_exp(
        math.log(b)
        + gs.log_G
        - 0.5 * b * math.log(vol)
        + (b - 1.0) * math.log(rho)
    )
    return -a * c1 * rho ** (a - 1.0) + g_deriv


def rho_ex_improved(params: ProblemParams, gn: GNConstants, gs: GroundStateData, vol=1.0):
    """First positive zero of f_tilde, or None when f_tilde never turns negative.

    In rescaled mass (rho_hat = rho/sqrt(vol)) f_tilde reads
    t*/2 - c1v rho_hat^a + G rho_hat^b with b > a > 0, so it has a unique
    interior minimum at rho_hat_min = (a c1v / (b G))^(1/(b-a)); a sign check
    there decides between the finite first zero (bracketed left of the
    minimizer, located in log coordinates for conditioning) and the sentinel.
    """
    if params.is_mass_critical:
        raise DomainError("improved threshold undefined at mass-critical alpha")
    a = params.alpha
    ts, c1 = _c1(params, gn)
    c1v = c1 * vol ** (0.5 * a)
    b = _beta_exponent(params)

    def phi(s):
        # f_tilde at rho_hat = exp(s), power terms assembled from logs
        return 0.5 * ts - c1v * _guarded_exp(a * s) + _guarded_exp(gs.log_G + b * s)

    s_min = (math.log(a * c1v / b) - gs.log_G) / (b - a)
    if phi(s_min) > 0.0:
        return None
    s_lo = s_min - 200.0 / a  # far enough left that the c1v term is negligible
    root = brentq(phi, s_lo, s_min, xtol=1e-13, rtol=8.9e-16, maxiter=200)
    return math.sqrt(vol) * math.exp(float(root))


def second_variation(params: ProblemParams, mu1, rho, gs: GroundStateData):
    """Second variation of the energy at the y-trivial soliton along the first
    manifold mode: mu1 rho^2 + (4(1+alpha)(2+alpha) - 2 alpha N)/(4 - alpha N) * I_rho.

    For un-normalized manifolds pass the rescaled mass rho_hat = rho/sqrt(vol).
    """
    if not mu1 > 0.0:
        raise DomainError(f"mu1 must be positive, got {mu1}")
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho}")
    a, N = params.alpha, params.N
    coeff = (4.0 * (1.0 + a) * (2.0 + a) - 2.0 * a * N) / (4.0 - a * N)
    level = -gs.G * rho ** (2.0 + _beta_exponent(params))
    return mu1 * rho * rho + coeff * level


def _log_rho_tr_hat(params: ProblemParams, mu1, gs: GroundStateData):
    """log of the rescaled-mass root of the second variation."""
    a, N = params.alpha, params.N
    coeff = 4.0 * (1.0 + a) * (2.0 + a) - 2.0 * a * N
    return (
        (4.0 - N * a)
        / (4.0 * a)
        * (math.log(mu1 * (4.0 - a * N)) - math.log(coeff) - gs.log_G)
    )


def rho_tr_upper(params: ProblemParams, mu1, gs: GroundStateData, vol=1.0):
    """Upper bound for the nontriviality mass (sign change of second_variation).

    sqrt(vol) * [ mu1 (4 - alpha N) / (G (4(1+alpha)(2+alpha) - 2 alpha N)) ]^((4-N alpha)/(4 alpha)),
    assembled from log_G so the degenerate corner alpha -> 4/N stays finite.
    """
    if not mu1 > 0.0:
        raise DomainError(f"mu1 must be positive, got {mu1}")
    if not (vol > 0.0 and math.isfinite(vol)):
        raise DomainError(f"vol must be positive, got {vol!r}")
    return math.sqrt(vol) * _guarded_exp(_log_rho_tr_hat(params, mu1, gs))


def criterion_basic(
    params: ProblemParams,
    manifold: ManifoldSpec,
    gn: GNConstants,
    gs: GroundStateData,
):
    """True iff the nontriviality upper bound sits strictly below rho_ex_basic.

    Evaluated in log space as
        (alpha/2) log vol + alpha * log rho_tr_hat  <  alpha * log rho_ex_basic,
    equivalent to the scale-free comparison
        vol^(alpha/2) [ mu1 (4-aN) / (G (4(1+a)(2+a)-2aN)) ]^((4-Na)/4) < rho_ex_basic^alpha,
    whose right side is (2+a)/(theta A B^(theta/2-1)) ((theta-2)/theta)^(theta/2-1),
    extended to (2+a)/(2A) at mass-critical.
    """
    a = params.alpha
    log_lhs = 0.5 * a * math.log(manifold.vol) + a * _log_rho_tr_hat(
        params, manifold.mu1, gs
    )
    log_rhs = a * math.log(rho_ex_basic(params, gn))
    return _strictly_less(log_lhs, log_rhs)


def criterion_improved(
    params: ProblemParams,
    manifold: ManifoldSpec,
    gn: GNConstants,
    gs: GroundStateData,
):
    """True iff f_tilde(R) > 0 and f_tilde'(R) < 0 at R = rho_tr_upper(vol).

    Certifies R below the improved existence mass; weaker demand than
    criterion_basic, hence it covers more cases.  Mass-critical alpha falls
    back to the basic criterion (no finite t*).
    """
    if params.is_mass_critical:
        return criterion_basic(params, manifold, gn, gs)
    R = rho_tr_upper(params, manifold.mu1, gs, vol=manifold.vol)
    val = f_tilde(R, params, gn, gs, vol=manifold.vol)
    slope = f_tilde_prime(R, params, gn, gs, vol=manifold.vol)
    return _strictly_less(0.0, val) and _strictly_less(slope, 0.0)


def lambda_of_rho(rho, params: ProblemParams):
    """Anisotropy weight lambda = rho^(-4 alpha/(4 - alpha N))."""
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho}")
    return rho ** (-_beta_exponent(params))


def rho_of_lambda(lam, params: ProblemParams):
    """Inverse of lambda_of_rho."""
    if not lam > 0.0:
        raise DomainError(f"lambda must be positive, got {lam}")
    return lam ** (-1.0 / _beta_exponent(params))


def threshold_report(params: ProblemParams, manifold: ManifoldSpec) -> ThresholdReport:
    """Assemble the full report for one (params, manifold) instance."""
    gn, conditional = constants_for(manifold, params)
    gs = ground_state_data(params.alpha, params.N)
    ts = t_star(params, gn)
    reb = rho_ex_basic(params, gn)
    if params.is_mass_critical:
        rei, status = None, "not-applicable-mass-critical"
    else:
        rei = rho_ex_improved(params, gn, gs, vol=manifold.vol)
        status = "finite" if rei is not None else "unbounded-by-estimate"
        if rei is not None and rei < reb * (1.0 - 1e-9):
            raise NumericError(f"rho_ex_improved={rei} < rho_ex_basic={reb}")
    return ThresholdReport(
        t_star=ts,
        rho_ex_basic=reb,
        rho_ex_improved=rei,
        rho_ex_improved_status=status,
        rho_tr_upper=rho_tr_upper(params, manifold.mu1, gs, vol=manifold.vol),
        lambda_ex=lambda_of_rho(reb, params),
        criterion_basic=criterion_basic(params, manifold, gn, gs),
        criterion_improved=criterion_improved(params, manifold, gn, gs),
        conditional_on_B=conditional,
    )
