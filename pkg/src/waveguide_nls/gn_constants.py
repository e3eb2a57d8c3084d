"""Manifold descriptors and Gagliardo-Nirenberg constants on R^N x M^k.

The interpolation inequality in use is

    ||u||_{2+alpha}^{2+alpha} <= A (||grad u||^2 + B ||u||^2)^(theta/2) ||u||^(2+alpha-theta),

with theta = (N+k) alpha / 2.  For R x S^k (round unit sphere, k >= 2) the pair
(A, B) is explicit:

    A = (4 / ((k+1)(k-1) omega_{k+1}^(2/(k+1))))^(theta/2),    B = (k-1)^2 / 4.

No rigorous (A, B) is available here for flat tori or generic manifolds, so for
those the constants are configuration inputs (default 1.0) and every consumer
flags results as conditional.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import specfun
from .errors import DomainError
from .ground_state import ProblemParams

SPHERE = "sphere"
FLAT_TORUS = "flat-torus"
GENERIC = "generic"


@dataclass(frozen=True)
class ManifoldSpec:
    """Compact factor M^k: kind, dimension, volume, first nonzero eigenvalue.

    Optional A/B carry user-configured inequality constants for the kinds
    where no exact values exist; sigma is an alternative source for A on
    generic manifolds (dimensional pattern, applied once alpha is known).
    """

    kind: str
    dim: int
    vol: float
    mu1: float
    A: Optional[float] = None
    B: Optional[float] = None
    sigma: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (SPHERE, FLAT_TORUS, GENERIC):
            raise DomainError(f"unknown manifold kind {self.kind!r}")
        if isinstance(self.dim, bool) or not isinstance(self.dim, int) or self.dim < 1:
            raise DomainError(f"dim must be an integer >= 1, got {self.dim!r}")
        if not (self.vol > 0.0 and math.isfinite(self.vol)):
            raise DomainError(f"vol must be positive, got {self.vol!r}")
        if not (self.mu1 > 0.0 and math.isfinite(self.mu1)):
            raise DomainError(f"mu1 must be positive, got {self.mu1!r}")
        for name in ("A", "B", "sigma"):
            v = getattr(self, name)
            if v is not None and not (v > 0.0 and math.isfinite(v)):
                raise DomainError(f"{name} must be positive when given, got {v!r}")

    @classmethod
    def sphere(cls, k):
        """Round unit sphere S^k: vol = omega_k, mu1 = k."""
        return cls(kind=SPHERE, dim=k, vol=specfun.sphere_volume(k), mu1=float(k))

    @classmethod
    def flat_torus(cls, lengths, A=None, B=None):
        """Flat torus with side lengths L_1..L_k: vol = prod L_i, mu1 = (2 pi / max L)^2."""
        lengths = [float(v) for v in lengths]
        if not lengths or any(not (v > 0.0 and math.isfinite(v)) for v in lengths):
            raise DomainError(f"torus lengths must be positive, got {lengths!r}")
        vol = float(np.prod(lengths))
        mu1 = (2.0 * math.pi / max(lengths)) ** 2
        return cls(kind=FLAT_TORUS, dim=len(lengths), vol=vol, mu1=mu1, A=A, B=B)

    @classmethod
    def generic(cls, dim, vol, mu1, A=None, B=None, sigma=None):
        """Descriptor with user-supplied data.

        A may be given directly, or derived from a supplied Sobolev-type
        constant sigma through the dimensional pattern
        A = (4/((dim-1)(dim+1) sigma))^(theta/2) at evaluation time.
        """
        if A is None and sigma is not None and dim < 2:
            raise DomainError("sigma route requires dim >= 2")
        return cls(kind=GENERIC, dim=dim, vol=vol, mu1=mu1, A=A, B=B, sigma=sigma)


@dataclass(frozen=True)
class GNConstants:
    A: float
    B: float
    theta: float

    def __post_init__(self):
        if not (self.A > 0.0 and math.isfinite(self.A)):
            raise DomainError(f"A must be positive, got {self.A!r}")
        if not (self.B > 0.0 and math.isfinite(self.B)):
            raise DomainError(f"B must be positive, got {self.B!r}")
        if not (2.0 - 1e-9 <= self.theta):
            raise DomainError(f"theta must be >= 2, got {self.theta}")


def theta(params: ProblemParams) -> float:
    """Interpolation exponent theta(alpha) = (N+k) alpha / 2; 2 iff mass-critical."""
    return params.theta


def sphere_gn_constants(k, params: ProblemParams) -> GNConstants:
    """Exact constants for R x S^k, k >= 2 (the explicit product-space case)."""
    if params.N != 1:
        raise DomainError("sphere constants are derived on R x S^k, which needs N = 1")
    if isinstance(k, bool) or not isinstance(k, int) or k < 2:
        raise DomainError(f"sphere constants need integer k >= 2, got {k!r}")
    if params.k != k:
        raise DomainError(f"params.k={params.k} does not match sphere dimension {k}")
    th = params.theta
    omega_next = specfun.sphere_volume(k + 1)
    base = 4.0 / ((k + 1) * (k - 1) * omega_next ** (2.0 / (k + 1)))
    return GNConstants(A=base ** (0.5 * th), B=0.25 * (k - 1) ** 2, theta=th)


def constants_for(manifold: ManifoldSpec, params: ProblemParams):
    """Resolve (GNConstants, conditional_on_B) for a manifold.

    Sphere constants are exact (conditional False).  Torus/generic constants
    fall back to configured values, defaulting to A = B = 1.0 with a warning;
    everything computed from them must be labelled conditional.
    """
    if params.k != manifold.dim:
        raise DomainError(
            f"params.k={params.k} does not match manifold dim={manifold.dim}"
        )
    if manifold.kind == SPHERE:
        return sphere_gn_constants(manifold.dim, params), False
    th = params.theta
    A = manifold.A
    if A is None and manifold.sigma is not None:
        base = 4.0 / ((manifold.dim - 1) * (manifold.dim + 1) * manifold.sigma)
        A = base ** (0.5 * th)
    B = manifold.B
    if manifold.kind == GENERIC and A is None:
        raise DomainError(
            "generic manifolds need A (directly or via sigma); refusing to invent one"
        )
    assumed = [n for n, v in (("A", A), ("B", B)) if v is None]
    if A is None:
        A = 1.0
    if B is None:
        B = 1.0
    if assumed:
        warnings.warn(
            f"no rigorous {'/'.join(assumed)} available for {manifold.kind}; "
            f"using default 1.0, results are conditional",
            stacklevel=2,
        )
    return GNConstants(A=float(A), B=float(B), theta=th), True


# ---------------------------------------------------------------------------
# Numerical verification of the inequality on sampled fields
# ---------------------------------------------------------------------------

def gn_ratio(constants: GNConstants, alpha, mass_sq, grad_sq, lp_pow):
    """RHS/LHS of the inequality from precomputed norms; >= 1 certifies the sample.

    mass_sq = ||u||_2^2, grad_sq = ||grad u||_2^2, lp_pow = ||u||_{2+alpha}^{2+alpha}.
    """
    if lp_pow <= 0.0 or mass_sq <= 0.0:
        raise DomainError("gn_ratio needs a nonzero field")
    th = constants.theta
    rhs = (
        constants.A
        * (grad_sq + constants.B * mass_sq) ** (0.5 * th)
        * mass_sq ** (0.5 * (2.0 + alpha - th))
    )
    return rhs / lp_pow


def gn_check(field, constants: GNConstants, alpha):
    """gn_ratio evaluated on a discretized Field (quadrature from field_solver)."""
    from . import field_solver

    m = field_solver.mass(field)
    gx2, gy2 = field_solver.grad_norms(field)
    lp = field_solver.lp_power_norm(field, 2.0 + alpha)
    return gn_ratio(constants, alpha, m, gx2 + gy2, lp)
