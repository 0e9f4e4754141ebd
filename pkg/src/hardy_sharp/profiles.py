"""Nonnegative radial profiles r ↦ f(r) on (0, ∞).

Profiles are evaluated in log space: ``profile.log_eval(t)`` returns
``ln f(e^t)``.  This keeps p-th powers of singular or slowly decaying
profiles finite over the whole quadrature range.  ``-inf`` encodes zero.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.special import logsumexp

__all__ = [
    "RadialProfile",
    "indicator",
    "power",
    "exponential",
    "zero",
    "thm1_extremizer_axis",
    "thm2_extremizer_axis",
    "power_bump",
    "lognormal_bump",
    "mixture",
    "sampled",
    "read_profile_csv",
]

LogFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """A radial profile with its asymptotic metadata.

    ``decay_exponent`` D promises f(r) = O(r^-D) as r → ∞ and
    ``origin_exponent`` A promises f(r) ≍ r^A as r → 0.  ``breakpoints``
    lists radii where f is not smooth; quadrature splits there.
    """

    log_fn: LogFn
    descriptor: str
    decay_exponent: float
    origin_exponent: float = 0.0
    breakpoints: tuple[float, ...] = ()
    kind: str = "closed"
    nodes: np.ndarray | None = field(default=None, repr=False)
    values: np.ndarray | None = field(default=None, repr=False)

    def log_eval(self, t):
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            return np.asarray(self.log_fn(np.asarray(t, dtype=float)), dtype=float)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise ValueError("radial profiles are evaluated at r > 0 only")
        return np.exp(self.log_eval(np.log(r)))

    def scaled(self, c: float) -> "RadialProfile":
        if c < 0:
            raise ValueError("profiles must stay nonnegative")
        if c == 0:
            return zero()
        lc = math.log(c)
        fn = self.log_fn
        return RadialProfile(
            lambda t: fn(t) + lc,
            f"{c!r}*({self.descriptor})",
            self.decay_exponent,
            self.origin_exponent,
            self.breakpoints,
        )

    def dilated(self, lam: float) -> "RadialProfile":
        """r ↦ f(λ r)."""
        if lam <= 0:
            raise ValueError("dilation factor must be positive")
        ll = math.log(lam)
        fn = self.log_fn
        return RadialProfile(
            lambda t: fn(t + ll),
            f"({self.descriptor})(r*{lam!r})",
            self.decay_exponent,
            self.origin_exponent,
            tuple(b / lam for b in self.breakpoints),
        )

    def sample(self, nodes) -> "RadialProfile":
        nodes = np.asarray(nodes, dtype=float)
        return sampled(nodes, self(nodes), decay_exponent=self.decay_exponent,
                       origin_exponent=self.origin_exponent)

    def to_csv(self, path, nodes=None):
        if nodes is None:
            if self.nodes is None:
                raise ValueError("closed-form profiles need explicit nodes to serialize")
            nodes = self.nodes
        nodes = np.asarray(nodes, dtype=float)
        values = self(nodes)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["r", "value"])
            for r, v in zip(nodes, values):
                w.writerow([format(r, ".17g"), format(v, ".17g")])


def _log1p_exp(x):
    # ln(1 + e^x) without overflow
    return np.logaddexp(0.0, x)


def zero() -> RadialProfile:
    return RadialProfile(lambda t: np.full(np.shape(t), -np.inf), "0", math.inf)


def indicator(radius: float = 1.0) -> RadialProfile:
    """Indicator of the open interval (0, radius)."""
    lr = math.log(radius)
    return RadialProfile(
        lambda t: np.where(t < lr, 0.0, -np.inf),
        f"1[r<{radius!r}]",
        math.inf,
        0.0,
        (float(radius),),
    )


def power(a: float) -> RadialProfile:
    """r ↦ r^a (no decay unless a < 0)."""
    return RadialProfile(lambda t: a * t, f"r^{a!r}", -a, a)


def exponential(rate: float = 1.0) -> RadialProfile:
    return RadialProfile(lambda t: -rate * np.exp(t), f"exp(-{rate!r}r)", math.inf, 0.0)


def thm1_extremizer_axis(n: int, q: float, beta: float) -> RadialProfile:
    """(1 + r^(qβ))^-(1 + n/(qβ))."""
    c = q * beta
    k = 1 + n / c
    return RadialProfile(
        lambda t: -k * _log1p_exp(c * t),
        f"(1+r^{c!r})^-{k!r}",
        c * k,
        0.0,
    )


def thm2_extremizer_axis(n: int, p: float, q: float, gamma: float, d: float | None = None) -> RadialProfile:
    """r^(−γ/(p−1)) (1 + d r^e)^(−q/(q−p)).

    ``e = ((n(p−1) − γ)/(n(p−1))) (nq/p − n)``; ``d`` defaults to
    ``(n(p−1)/(n(p−1) − γ))^(1/n)``.
    """
    np1 = n * (p - 1)
    e = (np1 - gamma) / np1 * (n * q / p - n)
    if d is None:
        d = (np1 / (np1 - gamma)) ** (1.0 / n)
    k = q / (q - p)
    s = gamma / (p - 1)
    ld = math.log(d)
    return RadialProfile(
        lambda t: -s * t - k * _log1p_exp(ld + e * t),
        f"r^-{s!r}(1+{d!r}r^{e!r})^-{k!r}",
        s + e * k,
        -s,
    )


def power_bump(a: float, b: float, k: float, c: float = 1.0) -> RadialProfile:
    """r^a (1 + (r/c)^b)^(−k): behaves like r^a at 0 and r^(a−bk) at ∞."""
    lc = math.log(c)
    return RadialProfile(
        lambda t: a * t - k * _log1p_exp(b * (t - lc)),
        f"r^{a!r}(1+(r/{c!r})^{b!r})^-{k!r}",
        b * k - a,
        a,
    )


def lognormal_bump(mu: float, sigma: float, a: float = 0.0) -> RadialProfile:
    """r^a exp(−(ln r − μ)²/(2σ²)); decays faster than any power at both ends."""
    return RadialProfile(
        lambda t: a * t - (t - mu) ** 2 / (2 * sigma * sigma),
        f"r^{a!r}exp(-(ln r-{mu!r})^2/(2*{sigma!r}^2))",
        math.inf,
        math.inf,
    )


def mixture(components: Sequence[RadialProfile], weights: Sequence[float]) -> RadialProfile:
    """Positive combination Σ wᵢ fᵢ."""
    if len(components) != len(weights) or not components:
        raise ValueError("need one positive weight per component")
    if any(w <= 0 for w in weights):
        raise ValueError("mixture weights must be positive")
    lw = np.log(np.asarray(weights, dtype=float))
    fns = [c.log_fn for c in components]

    def log_fn(t):
        stack = np.stack([fn(t) + w for fn, w in zip(fns, lw)])
        return logsumexp(stack, axis=0)

    bps = tuple(sorted({b for c in components for b in c.breakpoints}))
    return RadialProfile(
        log_fn,
        " + ".join(f"{w!r}*({c.descriptor})" for c, w in zip(components, weights)),
        min(c.decay_exponent for c in components),
        min(c.origin_exponent for c in components),
        bps,
    )


def sampled(nodes, values, decay_exponent: float, origin_exponent: float | None = None) -> RadialProfile:
    """Profile interpolated shape-preservingly between log-grid samples.

    Between nodes the values are interpolated by PCHIP in ln r, which keeps
    nonnegative data nonnegative.  Beyond the last node the profile falls
    off like r^-decay_exponent; below the first node it follows
    r^origin_exponent, estimated from the first two samples when omitted.
    """
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    if nodes.ndim != 1 or nodes.shape != values.shape or nodes.size < 2:
        raise ValueError("nodes and values must be equal-length 1-D arrays")
    if np.any(np.diff(nodes) <= 0) or nodes[0] <= 0:
        raise ValueError("nodes must be positive and strictly increasing")
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise ValueError("sampled values must be finite and nonnegative")
    t = np.log(nodes)
    if origin_exponent is None:
        if values[0] > 0 and values[1] > 0:
            origin_exponent = float((math.log(values[1]) - math.log(values[0])) / (t[1] - t[0]))
        else:
            origin_exponent = 0.0
    interp = PchipInterpolator(t, values, extrapolate=False)
    t0, t1 = t[0], t[-1]
    with np.errstate(divide="ignore"):
        lv0, lv1 = np.log(values[0]), np.log(values[-1])

    def log_fn(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            inside = np.log(np.clip(interp(np.clip(x, t0, t1)), 0.0, None))
        below = lv0 + origin_exponent * (x - t0)
        above = lv1 - decay_exponent * (x - t1)
        return np.where(x < t0, below, np.where(x > t1, above, inside))

    return RadialProfile(
        log_fn,
        f"sampled[{nodes.size}]",
        float(decay_exponent),
        float(origin_exponent),
        kind="sampled",
        nodes=nodes,
        values=values,
    )


def read_profile_csv(path, decay_exponent: float, origin_exponent: float | None = None) -> RadialProfile:
    """Inverse of :meth:`RadialProfile.to_csv` (columns ``r,value``)."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    nodes = [float(row["r"]) for row in rows]
    values = [float(row["value"]) for row in rows]
    return sampled(nodes, values, decay_exponent, origin_exponent)
