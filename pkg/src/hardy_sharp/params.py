"""Exponent and weight parameters, and the theorem that governs them.

A problem instance is a list of axes ``(n, beta, gamma, alpha)`` together
with the exponent pair ``(p, q)``.  :func:`validate` checks the hypotheses
of the selected mode and either returns a frozen :class:`ProductParams` or
raises :class:`~hardy_sharp.errors.HypothesisViolation` naming the relation
that failed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import HypothesisViolation

__all__ = [
    "REL_TOL",
    "Mode",
    "Exponents",
    "AxisParams",
    "ProductParams",
    "validate",
    "derive_alpha",
    "derive_q",
    "make_params",
    "parse_number",
    "parse_axes",
]

#: Residual tolerance for the exact-in-rationals compatibility relations.
REL_TOL = 1e-12


class Mode(str, enum.Enum):
    THM1 = "thm1"
    THM2 = "thm2"
    LEMMA2 = "lemma2"
    LIMIT = "limit"


@dataclass(frozen=True)
class Exponents:
    p: float
    q: float

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not (math.isfinite(p) and math.isfinite(q)):
            raise HypothesisViolation("exponents must be finite", math.nan)
        if p <= 1:
            raise HypothesisViolation("1 < p", 1 - p)
        if q < p and not _close(q, p):
            raise HypothesisViolation("p <= q", p - q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def p_prime(self) -> float:
        return self.p / (self.p - 1)

    @property
    def q_prime(self) -> float:
        return self.q / (self.q - 1)


@dataclass(frozen=True)
class AxisParams:
    """One factor R^n of the product space."""

    n: int
    beta: float = 0.0
    gamma: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise HypothesisViolation(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        for name in ("beta", "gamma", "alpha"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise HypothesisViolation(f"{name} must be finite", math.nan)
            object.__setattr__(self, name, value)
        if self.beta < 0:
            raise HypothesisViolation("0 <= beta", self.beta)
        if self.beta >= self.n:
            raise HypothesisViolation("beta < n", self.beta - self.n)

    def spec_string(self) -> str:
        return f"{self.n}:{self.beta!r}:{self.gamma!r}:{self.alpha!r}"


@dataclass(frozen=True)
class ProductParams:
    axes: tuple[AxisParams, ...]
    exponents: Exponents
    mode: Mode

    @property
    def m(self) -> int:
        return len(self.axes)

    @property
    def p(self) -> float:
        return self.exponents.p

    @property
    def q(self) -> float:
        return self.exponents.q

    def with_axes(self, axes: Sequence[AxisParams]) -> "ProductParams":
        return validate(axes, self.exponents, self.mode)

    def describe(self) -> str:
        axes = ",".join(a.spec_string() for a in self.axes)
        return f"mode={self.mode.value};p={self.p!r};q={self.q!r};axes={axes}"


def _close(a: float, b: float, tol: float = REL_TOL) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def derive_alpha(n: float, beta: float, gamma: float, p: float, q: float) -> float:
    """Target weight making ``beta + (alpha+n)/q == (gamma+n)/p`` hold."""
    values = (n, beta, gamma, p, q)
    if not all(math.isfinite(float(v)) for v in values) or p == 0:
        raise ValueError("derive_alpha needs finite inputs and p != 0")
    return q * ((gamma + n) / p - beta) - n


def derive_q(n: float, beta: float, gamma: float, alpha: float, p: float) -> float:
    """Solve the same relation for q given the target weight."""
    denom = (gamma + n) / p - beta
    if denom <= 0:
        raise HypothesisViolation("(gamma+n)/p - beta > 0", denom)
    return (alpha + n) / denom


def _check_gamma(i, ax, p):
    bound = ax.n * (p - 1)
    if not ax.gamma < bound:
        raise HypothesisViolation("gamma < n(p-1)", ax.gamma - bound, axis=i)


def validate(axes: Iterable[AxisParams], exponents: Exponents, mode: Mode | str) -> ProductParams:
    """Check the hypotheses of ``mode`` for every axis.

    Returns the validated instance or raises :class:`HypothesisViolation`
    carrying the axis index, the relation name and its residual.
    """
    mode = Mode(mode)
    axes = tuple(axes)
    if not axes:
        raise HypothesisViolation("at least one axis is required")
    p, q = exponents.p, exponents.q

    if mode in (Mode.THM1, Mode.THM2, Mode.LEMMA2) and not q > p:
        raise HypothesisViolation("p < q", p - q)
    if mode is Mode.LIMIT and not _close(p, q):
        raise HypothesisViolation("p == q", q - p)
    if mode is Mode.LEMMA2 and len(axes) != 1:
        raise HypothesisViolation("lemma2 is a single-space statement (m == 1)", len(axes) - 1)

    for i, ax in enumerate(axes):
        if mode is Mode.THM1:
            if abs(ax.gamma) > REL_TOL or abs(ax.alpha) > REL_TOL:
                raise HypothesisViolation("gamma == alpha == 0", max(abs(ax.gamma), abs(ax.alpha)), axis=i)
            if not ax.beta > 0:
                raise HypothesisViolation("beta > 0", ax.beta, axis=i)
            lhs, rhs = 1 / q, 1 / p - ax.beta / ax.n
            if not _close(lhs, rhs):
                raise HypothesisViolation("1/q == 1/p - beta/n", lhs - rhs, axis=i)
        elif mode in (Mode.THM2, Mode.LEMMA2):
            _check_gamma(i, ax, p)
            if mode is Mode.LEMMA2 and ax.beta != 0:
                raise HypothesisViolation("beta == 0", ax.beta, axis=i)
            lhs = ax.beta + (ax.alpha + ax.n) / q
            rhs = (ax.gamma + ax.n) / p
            if not _close(lhs, rhs):
                raise HypothesisViolation("beta + (alpha+n)/q == (gamma+n)/p", lhs - rhs, axis=i)
        else:  # LIMIT
            _check_gamma(i, ax, p)
            if ax.beta != 0:
                raise HypothesisViolation("beta == 0", ax.beta, axis=i)
            if not _close(ax.gamma, ax.alpha):
                raise HypothesisViolation("gamma == alpha", ax.gamma - ax.alpha, axis=i)

    return ProductParams(axes=axes, exponents=exponents, mode=mode)


def make_params(axes, p, q=None, mode: Mode | str = Mode.THM2) -> ProductParams:
    """Convenience builder accepting ``(n, beta, gamma[, alpha])`` tuples.

    Missing alphas are derived from the compatibility relation (LIMIT mode
    defaults them to gamma, THM1 mode to zero).  A missing ``q`` is derived
    from the first axis when the mode fixes it.
    """
    mode = Mode(mode)
    tuples = [tuple(a) if not isinstance(a, AxisParams) else (a.n, a.beta, a.gamma, a.alpha) for a in axes]
    if not tuples:
        raise HypothesisViolation("at least one axis is required")
    p = float(p)
    if q is None:
        n0, b0, g0 = tuples[0][:3]
        if mode is Mode.THM1:
            inv = 1 / p - b0 / n0
            if inv <= 0:
                raise HypothesisViolation("1/p - beta/n > 0", inv, axis=0)
            q = 1 / inv
        elif mode is Mode.LIMIT:
            q = p
        elif len(tuples[0]) == 4:
            q = derive_q(n0, b0, g0, tuples[0][3], p)
        else:
            raise HypothesisViolation("q is required for this mode")
    q = float(q)
    built = []
    for t in tuples:
        n, b, g = t[:3]
        if len(t) == 4 and t[3] is not None:
            a = t[3]
        elif mode is Mode.LIMIT:
            a = g
        elif mode is Mode.THM1:
            a = 0.0
        else:
            a = derive_alpha(n, b, g, p, q)
        built.append(AxisParams(n, b, g, a))
    return validate(built, Exponents(p, q), mode)


def parse_number(text: str) -> float:
    """Parse ``"1.5"``, ``"4/3"`` or ``"-1/2"`` into a float."""
    text = text.strip()
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number: {text!r}") from exc


def parse_axes(text: str) -> list[tuple]:
    """Parse the ``n:beta:gamma[:alpha]`` comma-separated axis grammar."""
    axes = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) not in (3, 4):
            raise ValueError(f"axis {chunk!r} must look like n:beta:gamma[:alpha]")
        n = parse_number(parts[0])
        if n != int(n):
            raise ValueError(f"axis dimension must be an integer, got {parts[0]!r}")
        values = [int(n)] + [parse_number(x) for x in parts[1:]]
        axes.append(tuple(values))
    if not axes:
        raise ValueError("no axes given")
    return axes


def replace_axis(params: ProductParams, index: int, **changes) -> ProductParams:
    axes = list(params.axes)
    axes[index] = replace(axes[index], **changes)
    return validate(axes, params.exponents, params.mode)
