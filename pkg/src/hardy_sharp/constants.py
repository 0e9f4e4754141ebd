"""Closed-form sharp constants.

Every factor is accumulated as a logarithm.  Near q = p the Beta arguments
grow like p/(q − p) and B underflows long before the outer power
(1/q − 1/p → 0) brings the factor back to order one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from . import special
from .errors import DomainError, HypothesisViolation
from .params import Mode, ProductParams, REL_TOL

__all__ = [
    "ConstantResult",
    "WlyComparison",
    "thmA_constant",
    "thmB_constant",
    "thm1_constant",
    "lemma2_constant",
    "thm2_axis_factor",
    "thm2_constant",
    "limit_constant",
    "thmC_constants",
    "compare_wly",
    "mode_constant",
]


@dataclass(frozen=True)
class ConstantResult:
    value: float
    mode: str
    per_axis_factors: tuple[float, ...] = field(default_factory=tuple)
    formula_id: str = ""


def _from_log_factors(log_factors: Sequence[float], mode: str, formula_id: str) -> ConstantResult:
    value = math.exp(math.fsum(log_factors))
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{formula_id}: constant is not a positive finite number")
    return ConstantResult(value, mode, tuple(math.exp(x) for x in log_factors), formula_id)


def thmA_constant(p: float, alpha: float = 0.0) -> float:
    """p/(p − 1 − α), the sharp one-dimensional weighted Hardy constant."""
    if not (p > 1 and math.isfinite(p)):
        raise DomainError("need 1 < p < inf")
    if not alpha < p - 1:
        raise DomainError(f"need alpha < p - 1, got alpha={alpha!r}, p={p!r}")
    return p / (p - 1 - alpha)


def _log_thmB(n: float, p: float, beta: float) -> float:
    if not 0 < beta < n:
        raise DomainError("need 0 < beta < n")
    if not p > 1:
        raise DomainError("need p > 1")
    inv_q = 1 / p - beta / n
    if inv_q <= 0:
        raise DomainError("need 1/p > beta/n so that q is finite")
    q = 1 / inv_q
    p_prime = p / (p - 1)
    q_prime = q / (q - 1)
    a = n / (q * beta)
    b = n / (q_prime * beta)
    return (math.log(p_prime / q) / q
            - (beta / n) * (math.log(a) + special.log_beta(a, b)))


def thmB_constant(n: float, p: float, beta: float) -> float:
    """Sharp constant of the unweighted fractional Hardy inequality on R^n.

    The target exponent is q = (1/p − β/n)^(−1).
    """
    return math.exp(_log_thmB(n, p, beta))


def _require_mode(params: ProductParams, *modes: Mode):
    if params.mode not in modes:
        names = "/".join(m.value for m in modes)
        raise HypothesisViolation(f"params must be validated in {names} mode", math.nan)


def thm1_constant(params: ProductParams) -> ConstantResult:
    _require_mode(params, Mode.THM1)
    logs = [_log_thmB(ax.n, params.p, ax.beta) for ax in params.axes]
    return _from_log_factors(logs, Mode.THM1.value, "thm1")


def _log_bliss_tail(p: float, q: float) -> float:
    """ln of (p′/q)^(1/q) · ((p/(q−p)) B(p/(q−p), pq/(q′(q−p))))^(1/q − 1/p)."""
    p_prime = p / (p - 1)
    q_prime = q / (q - 1)
    a = p / (q - p)
    b = p * q / (q_prime * (q - p))
    return math.log(p_prime / q) / q + (1 / q - 1 / p) * (math.log(a) + special.log_beta(a, b))


def _check_two_weight(n, p, q, gamma):
    if not p > 1:
        raise DomainError("need p > 1")
    if not q > p:
        raise DomainError("the two-weight constant needs q > p; use limit_constant for q = p")
    if not math.isfinite(q):
        raise DomainError("q must be finite")
    if not gamma < n * (p - 1):
        raise DomainError(f"need gamma < n(p-1) = {n * (p - 1)!r}, got {gamma!r}")


def _log_axis_factor(n: int, p: float, q: float, gamma: float, beta: float) -> float:
    _check_two_weight(n, p, q, gamma)
    np1 = n * (p - 1)
    p_prime = p / (p - 1)
    return ((1 / q - 1 / p + beta / n) * special.log_sphere_area(n)
            + (1 / p - 1 / q - beta / n) * math.log(n)
            + (1 / p_prime + 1 / q) * math.log(np1 / (np1 - gamma))
            + _log_bliss_tail(p, q))


def lemma2_constant(n: int, p: float, q: float, gamma: float) -> float:
    """Sharp constant for L^p(|x|^γ) → L^q(|x|^α) of the β = 0 operator on R^n."""
    return math.exp(_log_axis_factor(n, p, q, gamma, 0.0))


def thm2_axis_factor(n: int, p: float, q: float, gamma: float, beta: float) -> float:
    return math.exp(_log_axis_factor(n, p, q, gamma, beta))


def thm2_constant(params: ProductParams) -> ConstantResult:
    _require_mode(params, Mode.THM2, Mode.LEMMA2)
    logs = [_log_axis_factor(ax.n, params.p, params.q, ax.gamma, ax.beta) for ax in params.axes]
    return _from_log_factors(logs, params.mode.value, "thm2")


def limit_constant(params: ProductParams) -> ConstantResult:
    """∏ p/(p − 1 − γᵢ/nᵢ), the q → p limit of the two-weight constant."""
    p = params.p
    logs = []
    for i, ax in enumerate(params.axes):
        if not ax.gamma < ax.n * (p - 1):
            raise DomainError(f"axis {i}: need gamma < n(p-1)")
        logs.append(math.log(p / (p - 1 - ax.gamma / ax.n)))
    return _from_log_factors(logs, Mode.LIMIT.value, "limit")


def thmC_constants(p: float, q: float, wly_alpha: Sequence[float], wly_beta: Sequence[float]):
    """The two bound constants of the earlier power-weight result on (0, ∞)^m.

    Notation is the source's: ``wly_alpha`` is the source weight and
    ``wly_beta`` the target weight on one-dimensional axes.  Returns
    ``(eq4, eq5)`` with eq4 = ∏ p/(p − αᵢ − 1) and
    eq5 = (∏ q/(r(q − βᵢ − 1)))^(1/r), where 1/q + 1 = 1/p + 1/r.
    """
    if len(wly_alpha) != len(wly_beta) or not wly_alpha:
        raise DomainError("need one (alpha, beta) pair per axis")
    if not (1 < p <= q < math.inf):
        raise DomainError("need 1 < p <= q < inf")
    r = 1 / (1 / q + 1 - 1 / p)
    log4 = 0.0
    log5 = 0.0
    for i, (a, b) in enumerate(zip(wly_alpha, wly_beta)):
        if not a < p - 1:
            raise DomainError(f"axis {i}: need alpha < p - 1")
        lhs, rhs = (b + 1) / q, (a + 1) / p
        if abs(lhs - rhs) > REL_TOL * max(1.0, abs(lhs), abs(rhs)):
            raise DomainError(f"axis {i}: need (beta+1)/q == (alpha+1)/p (residual {lhs - rhs:.3g})")
        log4 += math.log(p / (p - a - 1))
        log5 += math.log(q / (r * (q - b - 1)))
    return math.exp(log4), math.exp(log5 / r)


@dataclass(frozen=True)
class WlyComparison:
    sharp: float
    eq5: float
    ratio: float
    gap: float
    half_line_sharp: float
    r: float


def compare_wly(params: ProductParams) -> WlyComparison:
    """Set the sharp two-weight constant against the earlier eq5 bound.

    ``half_line_sharp`` rescales C* by ∏ 2^(1/p − 1/q), the factor between
    R and the half-line (0, ∞) on which the earlier bound is stated.
    """
    _require_mode(params, Mode.THM2)
    for i, ax in enumerate(params.axes):
        if ax.n != 1 or ax.beta != 0:
            raise DomainError(f"axis {i}: comparison needs n = 1 and beta = 0")
    p, q = params.p, params.q
    sharp = thm2_constant(params).value
    _, eq5 = thmC_constants(p, q, [ax.gamma for ax in params.axes], [ax.alpha for ax in params.axes])
    half = sharp * 2.0 ** (params.m * (1 / p - 1 / q))
    return WlyComparison(sharp, eq5, sharp / eq5, eq5 - sharp, half, 1 / (1 / q + 1 - 1 / p))


def mode_constant(params: ProductParams) -> ConstantResult:
    """The sharp constant of whichever theorem governs ``params``."""
    if params.mode is Mode.THM1:
        return thm1_constant(params)
    if params.mode is Mode.LIMIT:
        return limit_constant(params)
    return thm2_constant(params)
