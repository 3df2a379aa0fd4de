"""Scalar special functions used by the query planner.

The lower branch of the Lambert W function inverts the bin-count
requirement of the sampling planner, and the derivative bound backs the
window-moment error analysis. Both are small enough to own outright; the
test suite cross-checks the W implementation against an independent
library oracle.
"""

from __future__ import annotations

import math

__all__ = [
    "lambert_wm1",
    "lambert_wm1_exp",
    "wm1_sandwich",
    "derivative_bound",
]

_RESIDUAL_TOL = 1e-12
_MAX_ITER = 60


def wm1_sandwich(u: float) -> tuple[float, float, float]:
    """Bracketing bounds for -W_{-1}(-exp(-u - 1)) at u > 0.

    Returns ``(lower, upper, loose_upper)`` with

        1 + sqrt(2u) + (2/3) u  <  -W_{-1}(-e^(-u-1))  <  1 + sqrt(2u) + u

    strict for u > 0 (all coincide at u = 0). The loose form 1 + 3u
    dominates the middle one only for u >= 1/2; the planner guards its
    use with a stricter u > 1 predicate.
    """
    if u < 0.0:
        raise ValueError(f"u must be >= 0, got {u!r}")
    s = math.sqrt(2.0 * u)
    return 1.0 + s + (2.0 / 3.0) * u, 1.0 + s + u, 1.0 + 3.0 * u


def lambert_wm1_exp(u: float) -> float:
    """W_{-1}(-exp(-u - 1)) for u >= 0, stable for arbitrarily large u.

    Works in the log domain, solving ln(-w) + w = -(u + 1) by Halley
    iteration started from the midpoint of the sandwich bracket, so the
    argument never has to be representable as a float.
    """
    if not (math.isfinite(u) and u >= 0.0):
        raise ValueError(f"u must be finite and >= 0, got {u!r}")
    if u == 0.0:
        return -1.0
    lo, hi, _ = wm1_sandwich(u)
    w = -0.5 * (lo + hi)
    target = -(u + 1.0)
    for _ in range(_MAX_ITER):
        # g(w) = ln(-w) + w - target, g' = 1/w + 1, g'' = -1/w**2
        g = math.log(-w) + w - target
        gp = 1.0 / w + 1.0
        gpp = -1.0 / (w * w)
        step = g / (gp - 0.5 * g * gpp / gp)
        w_next = w - step
        if w_next >= -1.0:
            w_next = 0.5 * (w - 1.0)
        if abs(w_next - w) <= 1e-16 * abs(w_next):
            w = w_next
            break
        w = w_next
    residual = abs(math.log(-w) + w - target)
    if residual > _RESIDUAL_TOL * max(1.0, u + 1.0):
        raise ArithmeticError(
            f"lambert_wm1_exp failed to converge at u={u!r}: residual {residual:.3e}"
        )
    return w


def lambert_wm1(y: float) -> float:
    """Lower real branch W_{-1}(y) on the domain [-1/e, 0).

    Solves w * exp(w) = y with w <= -1. The boundary y = -1/e maps to -1
    exactly; y >= 0 and y < -1/e are rejected. The converged residual
    |w e^w - y| is verified to be at most 1e-12 relative to |y|.
    """
    if not math.isfinite(y):
        raise ValueError(f"y must be finite, got {y!r}")
    if y >= 0.0 or y < -1.0 / math.e:
        raise ValueError(f"y must lie in [-1/e, 0), got {y!r}")
    if y == -1.0 / math.e:
        return -1.0
    u = -math.log(-y) - 1.0
    if u <= 0.0:
        # -1/e is not exactly representable; arguments indistinguishable
        # from it in float64 land here.
        return -1.0
    w = lambert_wm1_exp(u)
    residual = abs(w * math.exp(w) - y)
    if residual > _RESIDUAL_TOL * abs(y):
        raise ArithmeticError(
            f"lambert_wm1 failed to converge at y={y!r}: residual {residual:.3e}"
        )
    return w


def derivative_bound(M: float, n: int, r: float) -> float:
    """Cauchy-type ceiling M * n! * 2**n / r**n on |f^(n)(z)| for |z| <= r/2.

    ``M`` must dominate |f| on the closed disk of radius ``r``.
    """
    if not (isinstance(n, int) and n >= 0):
        raise ValueError(f"n must be an integer >= 0, got {n!r}")
    if not (math.isfinite(M) and M >= 0.0):
        raise ValueError(f"M must be finite and >= 0, got {M!r}")
    if not (math.isfinite(r) and r > 0.0):
        raise ValueError(f"r must be finite and > 0, got {r!r}")
    return M * math.factorial(n) * 2.0**n / r**n
