"""Gamma/Beta functions and sphere/ball measures.

Everything here works on positive real arguments only.  Beta is assembled
from log-Gamma so that the large arguments produced as q approaches p do not
overflow.
"""

from __future__ import annotations

import math

from .errors import DomainError

__all__ = [
    "log_gamma",
    "log_beta",
    "beta",
    "sphere_area",
    "log_sphere_area",
    "ball_volume",
    "log_ball_volume",
]


def _check_positive(name, x):
    if not math.isfinite(x) or x <= 0:
        raise DomainError(f"{name} requires a positive finite argument, got {x!r}")


def log_gamma(x: float) -> float:
    """ln Γ(x) for x > 0."""
    x = float(x)
    _check_positive("log_gamma", x)
    return math.lgamma(x)


def log_beta(z: float, w: float) -> float:
    """ln B(z, w) = ln Γ(z) + ln Γ(w) − ln Γ(z + w)."""
    z = float(z)
    w = float(w)
    _check_positive("log_beta", z)
    _check_positive("log_beta", w)
    return math.lgamma(z) + math.lgamma(w) - math.lgamma(z + w)


def beta(z: float, w: float) -> float:
    """Euler Beta function B(z, w) = ∫₀¹ t^(z−1) (1−t)^(w−1) dt."""
    return math.exp(log_beta(z, w))


def log_sphere_area(n: int) -> float:
    if int(n) != n or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n!r}")
    return math.log(2.0) + 0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n)


def sphere_area(n: int) -> float:
    """Surface measure |S^(n−1)| = 2π^(n/2)/Γ(n/2) of the unit sphere in R^n.

    For n = 1 this counts the two points of S⁰.
    """
    return math.exp(log_sphere_area(n))


def log_ball_volume(n: int, r: float = 1.0) -> float:
    if r < 0:
        raise DomainError(f"radius must be nonnegative, got {r!r}")
    if r == 0:
        return -math.inf
    return log_sphere_area(n) - math.log(n) + n * math.log(r)


def ball_volume(n: int, r: float = 1.0) -> float:
    """Lebesgue measure of B(0, r) in R^n."""
    return math.exp(log_ball_volume(n, r))
