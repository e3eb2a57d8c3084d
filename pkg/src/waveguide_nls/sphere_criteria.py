"""Special-function criteria for nontrivial minimizers on R x S^k.

With the exact sphere constants everything reduces to Beta-function algebra.
The exact sufficient condition reads T1 * T2 < T3 * T4 with

    T1 = ( (2/alpha) B(1/2, 2/alpha) / B(1/2, (k+1)/2) )^(alpha/2)
    T2 = ( (4+alpha) k / (4 + 5 alpha + 2 alpha^2) )^((4-alpha)/4)
    T3 = ( ((k+1) alpha - 4) / ((k-1) alpha) )^(theta/2 - 1)
    T4 = (k-1)/alpha

on 4/(k+1) <= alpha < 4/(k-1); T3 = 1 at the mass-critical endpoint (the
exponent vanishes there).  Coarser sufficient conditions depending on k alone:

    coarse:  ((k+1)/2)^(2/(k-1)) < (e^(-1/e)/4) (k-1)^2 / k          (k >= 11)
    refined: ((k+1)/2)^(2/(k-1)) < (e^(-1/e)/4) (k-1)^2 / k^(10/11)  (adds k = 9, 10)

At mass-critical alpha the exact condition collapses to

    ((k+1)/2)^(2/(k+1)) [ k(k+1)(k+2) / (14 + 7k + k^2) ]^(k/(k+1)) < (k-1)(k+1)/4.

sphere_scan additionally evaluates the improved criterion (the f_tilde route
with exact constants, mu1 = k, vol = omega_k) on an alpha grid per k.
"""

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError
from . import specfun
from .gn_constants import ManifoldSpec, sphere_gn_constants
from .ground_state import ProblemParams, ground_state_data
from .thresholds import criterion_basic, criterion_improved

_MIN_XX = math.exp(-1.0 / math.e)  # min over x>0 of x^x


def _validate_k(k, minimum=2):
    if isinstance(k, bool) or not isinstance(k, int) or k < minimum:
        raise DomainError(f"k must be an integer >= {minimum}, got {k!r}")
    return k


def alpha_window(k):
    """Admissible exponent window [4/(k+1), 4/(k-1)) on R x S^k."""
    _validate_k(k)
    return 4.0 / (k + 1), 4.0 / (k - 1)


def _validate_alpha(k, alpha):
    lo, hi = alpha_window(k)
    if not (lo * (1.0 - 1e-12) <= alpha < hi):
        raise DomainError(f"alpha={alpha} outside [{lo}, {hi}) for k={k}")
    return float(alpha)


@dataclass(frozen=True)
class SphereCriterionRow:
    k: int
    alpha: float
    T1: float
    T2: float
    T3: float
    T4: float
    exact_holds: bool
    mass_critical_holds: Optional[bool]  # set only on the mass-critical endpoint
    rough11: bool
    rough9: bool
    improved_holds: bool


def criterion_terms(k, alpha):
    """The four factors (T1, T2, T3, T4) of the exact condition."""
    k = _validate_k(k)
    alpha = _validate_alpha(k, alpha)
    t1 = (
        (2.0 / alpha) * specfun.beta(0.5, 2.0 / alpha) / specfun.beta(0.5, 0.5 * (k + 1))
    ) ** (0.5 * alpha)
    t2 = ((4.0 + alpha) * k / (4.0 + 5.0 * alpha + 2.0 * alpha * alpha)) ** (
        0.25 * (4.0 - alpha)
    )
    # theta/2 - 1 = ((k+1) alpha - 4)/4 vanishes exactly where the base does,
    # so the mass-critical endpoint is the continuous limit T3 = 1.
    num = (k + 1) * alpha - 4.0
    if num <= 0.0:
        t3 = 1.0
    else:
        t3 = (num / ((k - 1) * alpha)) ** (0.25 * num)
    t4 = (k - 1) / alpha
    return t1, t2, t3, t4


def sphere_exact(k, alpha):
    """Exact sufficient condition T1 T2 < T3 T4 (strict)."""
    t1, t2, t3, t4 = criterion_terms(k, alpha)
    return t1 * t2 < t3 * t4


def sphere_mass_critical(k):
    """Mass-critical reduction of the exact condition, alpha = 4/(k+1)."""
    k = _validate_k(k)
    lhs = (0.5 * (k + 1)) ** (2.0 / (k + 1)) * (
        k * (k + 1) * (k + 2) / (14.0 + 7.0 * k + k * k)
    ) ** (k / (k + 1.0))
    rhs = 0.25 * (k - 1) * (k + 1)
    return lhs < rhs


def rough_bound_coarse(k):
    """k-only sufficient condition using T2 < k; holds from k = 11 on."""
    k = _validate_k(k)
    lhs = (0.5 * (k + 1)) ** (2.0 / (k - 1))
    return lhs < 0.25 * _MIN_XX * (k - 1) ** 2 / k


def rough_bound_refined(k):
    """Sharper k-only condition using T2 <= k^(10/11); adds k = 9, 10."""
    k = _validate_k(k)
    lhs = (0.5 * (k + 1)) ** (2.0 / (k - 1))
    return lhs < 0.25 * _MIN_XX * (k - 1) ** 2 / k ** (10.0 / 11.0)


def alpha_grid(k, step=0.01, right_offset=1e-6):
    """Scan grid: multiples of step inside the window plus both endpoints
    (the open right endpoint approached at right_offset)."""
    lo, hi = alpha_window(k)
    values = [lo]
    i = math.ceil(lo / step)
    while i * step < hi - right_offset:
        if i * step > lo + 1e-12:
            values.append(i * step)
        i += 1
    values.append(hi - right_offset)
    return values


def sphere_scan(k_range, alpha_step=0.01):
    """Rows of criterion data for every k in k_range over the alpha grid.

    improved_holds delegates to the threshold machinery with the exact sphere
    constants, mu1 = k and vol = omega_k; the ground-state constant comes from
    the explicit N = 1 soliton family.
    """
    if alpha_step <= 0.0:
        raise DomainError(f"alpha_step must be positive, got {alpha_step}")
    rows = []
    for k in k_range:
        k = _validate_k(k)
        manifold = ManifoldSpec.sphere(k)
        lo, _ = alpha_window(k)
        r11 = rough_bound_coarse(k)
        r9 = rough_bound_refined(k)
        mc = sphere_mass_critical(k)
        for a in alpha_grid(k, step=alpha_step):
            t1, t2, t3, t4 = criterion_terms(k, a)
            params = ProblemParams(N=1, k=k, alpha=a)
            gn = sphere_gn_constants(k, params)
            gs = ground_state_data(a, 1)
            rows.append(
                SphereCriterionRow(
                    k=k,
                    alpha=a,
                    T1=t1,
                    T2=t2,
                    T3=t3,
                    T4=t4,
                    exact_holds=t1 * t2 < t3 * t4,
                    mass_critical_holds=mc if abs(a - lo) < 1e-12 else None,
                    rough11=r11,
                    rough9=r9,
                    improved_holds=criterion_improved(params, manifold, gn, gs),
                )
            )
    return rows


def sphere_criterion_basic(k, alpha):
    """Basic criterion evaluated through the generic threshold path; equal to
    sphere_exact by algebra, kept as an independent cross-check route."""
    k = _validate_k(k)
    alpha = _validate_alpha(k, alpha)
    params = ProblemParams(N=1, k=k, alpha=alpha)
    manifold = ManifoldSpec.sphere(k)
    gn = sphere_gn_constants(k, params)
    gs = ground_state_data(alpha, 1)
    return criterion_basic(params, manifold, gn, gs)
