"""Special-function kernel: log-Gamma, Euler Beta and unit-sphere volumes.

Everything downstream (soliton masses, Gagliardo-Nirenberg constants, the
sphere criteria) is assembled from these three functions, so they are kept
dependency-free and accurate to ~1e-14 relative on the ranges the package
actually uses (arguments up to a few hundred).
"""

import math

from .errors import DomainError

# Lanczos approximation, g = 7, 9 terms.  Relative accuracy is a few ulp for
# real arguments >= 0.5; smaller arguments are lifted with Gamma(x) = Gamma(x+1)/x.
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def _validate_positive(value, name):
    if not isinstance(value, (int, float)):
        raise DomainError(f"{name} must be a real number, got {type(value).__name__}")
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return value


def log_gamma(x):
    """Natural log of Gamma(x) for real x > 0."""
    x = _validate_positive(x, "x")
    shift = 0.0
    # Lift into the Lanczos sweet spot; the recurrence is exact.
    while x < 0.5:
        shift -= math.log(x)
        x += 1.0
    acc = _LANCZOS_COEFFS[0]
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += c / (x - 1.0 + i)
    t = x + _LANCZOS_G - 0.5
    return shift + _HALF_LOG_TWO_PI + (x - 0.5) * math.log(t) - t + math.log(acc)


def beta(x, y):
    """Euler Beta(x, y) = Gamma(x) Gamma(y) / Gamma(x + y), x, y > 0.

    Evaluated in log space so that large arguments (sphere-dimension scans)
    cannot overflow the intermediate Gamma factors.
    """
    x = _validate_positive(x, "x")
    y = _validate_positive(y, "y")
    return math.exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y))


def sphere_volume(k):
    """Volume (surface measure) of the unit round sphere S^k embedded in R^(k+1).

    omega_k = 2 pi^((k+1)/2) / Gamma((k+1)/2); k = 1 gives the circle length 2 pi.
    """
    if isinstance(k, bool) or not isinstance(k, int):
        raise DomainError(f"k must be an integer >= 1, got {k!r}")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    half = 0.5 * (k + 1)
    return math.exp(math.log(2.0) + half * math.log(math.pi) - log_gamma(half))
