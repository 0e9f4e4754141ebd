"""The product-space fractional Hardy operator and weighted norms.

For radial inputs the operator acts axis by axis:

    (H_β f)(r) = |B(0,r)|^(β/n − 1) · |S^(n−1)| · ∫₀^r f(t) t^(n−1) dt

and on separable inputs the m-fold operator is the product of these.
Non-separable radial inputs (m = 2) go through a 2-D prefix integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import special
from .errors import GridMismatch, NonConvergence
from .params import ProductParams
from .profiles import RadialProfile
from .quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    TensorGridFunction,
    cumulative,
    integrate_sampled,
    log_integrate,
    tensor_prefix_2d,
)

__all__ = [
    "SeparableRadialFunction",
    "PolarFactorization",
    "SOURCE",
    "TARGET",
    "hardy_axis",
    "hardy_separable",
    "hardy_tensor2",
    "weighted_norm",
    "axis_log_norm_integral",
    "polar_factors",
    "uniform_sphere",
    "spherical_mean",
    "spherical_mean_quadrature",
    "hardy_monte_carlo",
    "norm_monte_carlo",
]

SOURCE = "source"
TARGET = "target"


@dataclass(frozen=True, eq=False)
class SeparableRadialFunction:
    """f(x) = ∏ᵢ fᵢ(|xᵢ|)."""

    axis_profiles: tuple[RadialProfile, ...]

    def __post_init__(self):
        object.__setattr__(self, "axis_profiles", tuple(self.axis_profiles))
        if not self.axis_profiles:
            raise ValueError("need at least one axis profile")

    @property
    def m(self) -> int:
        return len(self.axis_profiles)

    def __call__(self, *radii):
        if len(radii) != self.m:
            raise ValueError(f"expected {self.m} radii")
        out = 1.0
        for prof, r in zip(self.axis_profiles, radii):
            out = out * prof(r)
        return out

    def scaled(self, c: float) -> "SeparableRadialFunction":
        first, *rest = self.axis_profiles
        return SeparableRadialFunction((first.scaled(c), *rest))

    def dilated(self, lam: float) -> "SeparableRadialFunction":
        return SeparableRadialFunction(tuple(p.dilated(lam) for p in self.axis_profiles))

    def on_grid(self, nodes1, nodes2, n1: int, n2: int) -> TensorGridFunction:
        """Tensor-grid view (m = 2) keeping the profiles as the exact source."""
        if self.m != 2:
            raise GridMismatch("tensor grids are two-dimensional")
        f1, f2 = self.axis_profiles

        def source(r1, r2):
            return f1(r1) * f2(r2)

        return TensorGridFunction.from_callable(source, nodes1, nodes2, n1, n2)


@dataclass(frozen=True)
class PolarFactorization:
    Kq: float
    Kp: float


def hardy_axis(profile: RadialProfile, n: int, beta: float, spec: QuadratureSpec = DEFAULT_SPEC) -> RadialProfile:
    """Apply the n-dimensional fractional Hardy operator to a radial profile."""
    if not 0 <= beta < n:
        raise ValueError("need 0 <= beta < n")
    cum = cumulative(profile, n, spec)
    log_omega = special.log_sphere_area(n)
    log_unit_ball = log_omega - math.log(n)
    expo = beta / n - 1.0

    def log_fn(t):
        return expo * (log_unit_ball + n * np.asarray(t)) + log_omega + cum.log_F(t)

    out = RadialProfile(
        log_fn,
        f"H[n={n},beta={beta!r}]({profile.descriptor})",
        decay_exponent=n - beta,
        origin_exponent=min(profile.origin_exponent + beta, math.inf),
        breakpoints=profile.breakpoints,
    )
    object.__setattr__(out, "cumulative", cum)
    return out


def hardy_separable(f: SeparableRadialFunction, params: ProductParams, spec: QuadratureSpec = DEFAULT_SPEC):
    if f.m != params.m:
        raise ValueError(f"function has {f.m} axes but params have {params.m}")
    out = []
    for i, (prof, ax) in enumerate(zip(f.axis_profiles, params.axes)):
        try:
            out.append(hardy_axis(prof, ax.n, ax.beta, spec))
        except NonConvergence as exc:
            raise NonConvergence(f"axis {i}: {exc}", exc.level, exc.err_est) from exc
    return SeparableRadialFunction(tuple(out))


def hardy_tensor2(grid: TensorGridFunction, params: ProductParams, spec: QuadratureSpec = DEFAULT_SPEC) -> TensorGridFunction:
    """Operator on a (possibly non-separable) radial function of (r₁, r₂)."""
    if params.m != 2:
        raise GridMismatch("the tensor path is restricted to m = 2")
    a1, a2 = params.axes
    if (grid.n1, grid.n2) != (a1.n, a2.n):
        raise GridMismatch(f"grid dimensions {(grid.n1, grid.n2)} differ from params {(a1.n, a2.n)}")
    G = tensor_prefix_2d(grid, spec).values
    s1, s2 = grid.nodes1, grid.nodes2
    log_scale1 = special.log_sphere_area(a1.n) + (a1.beta / a1.n - 1) * np.array(
        [special.log_ball_volume(a1.n, r) for r in s1])
    log_scale2 = special.log_sphere_area(a2.n) + (a2.beta / a2.n - 1) * np.array(
        [special.log_ball_volume(a2.n, r) for r in s2])
    values = G * np.exp(log_scale1)[:, None] * np.exp(log_scale2)[None, :]
    return grid.with_values(values)


def _exponent_weight(params: ProductParams, selector: str):
    if selector == SOURCE:
        return params.p, [ax.gamma for ax in params.axes]
    if selector == TARGET:
        return params.q, [ax.alpha for ax in params.axes]
    raise ValueError(f"selector must be {SOURCE!r} or {TARGET!r}")


def axis_log_norm_integral(profile: RadialProfile, n: int, exponent: float, weight: float,
                           spec: QuadratureSpec = DEFAULT_SPEC):
    """ln ∫₀^∞ f(r)^e r^(w+n−1) dr and its relative error estimate."""
    if exponent * profile.decay_exponent <= weight + n:
        raise NonConvergence(
            f"profile decays like r^-{profile.decay_exponent:g}: not in L^{exponent:g}(|x|^{weight:g}) at infinity")
    if exponent * profile.origin_exponent <= -(weight + n):
        raise NonConvergence(
            f"profile behaves like r^{profile.origin_exponent:g} at 0: not in L^{exponent:g}(|x|^{weight:g})")

    def log_fn(t):
        return exponent * profile.log_eval(t) + (weight + n) * t

    return log_integrate(log_fn, spec, [math.log(b) for b in profile.breakpoints])


def weighted_norm(f, params: ProductParams, selector: str = SOURCE,
                  spec: QuadratureSpec = DEFAULT_SPEC, with_error: bool = False):
    """Weighted Lebesgue norm on the product space.

    ``selector`` picks ``(p, γ)`` for ``"source"`` or ``(q, α)`` for
    ``"target"``.  With ``with_error`` the relative error estimate is
    returned alongside the value.
    """
    exponent, weights = _exponent_weight(params, selector)
    if isinstance(f, SeparableRadialFunction):
        if f.m != params.m:
            raise ValueError("axis count mismatch")
        log_total = 0.0
        err = 0.0
        for prof, ax, w in zip(f.axis_profiles, params.axes, weights):
            li, ei = axis_log_norm_integral(prof, ax.n, exponent, w, spec)
            log_total += special.log_sphere_area(ax.n) + li
            err += ei
        value = math.exp(log_total / exponent) if log_total > -math.inf else 0.0
        rel = err / exponent
    elif isinstance(f, TensorGridFunction):
        if params.m != 2:
            raise GridMismatch("tensor grids need m = 2 params")
        a1, a2 = params.axes
        t1, t2 = np.log(f.nodes1), np.log(f.nodes2)
        h = f.values ** exponent * (f.nodes1 ** (weights[0] + a1.n))[:, None] \
            * (f.nodes2 ** (weights[1] + a2.n))[None, :]
        total = float(integrate_sampled(t2, integrate_sampled(t1, h, axis=0)))
        rel = math.nan
        if t1.size >= 9 and t2.size >= 9:
            # two-level estimate from every other node
            coarse = float(integrate_sampled(t2[::2], integrate_sampled(t1[::2], h[::2, ::2], axis=0)))
            if total > 0:
                rel = abs(coarse / total - 1) / exponent
        total *= special.sphere_area(a1.n) * special.sphere_area(a2.n)
        value = total ** (1.0 / exponent)
    else:
        raise TypeError(f"unsupported function representation {type(f).__name__}")
    return (value, rel) if with_error else value


def polar_factors(params: ProductParams) -> PolarFactorization:
    """Constants relating physical-space norms to the radial integrals."""
    p, q = params.p, params.q
    log_kq = 0.0
    log_kp = 0.0
    for ax in params.axes:
        lw = special.log_sphere_area(ax.n)
        log_kq += (1 - ax.beta / ax.n) * math.log(ax.n) + (1 / q + ax.beta / ax.n) * lw
        log_kp += lw / p
    return PolarFactorization(math.exp(log_kq), math.exp(log_kp))


# --------------------------------------------------------------------------
# spherical means and Monte Carlo estimators (non-radial inputs, n ≤ 3)


def uniform_sphere(rng: np.random.Generator, n: int, size: int) -> np.ndarray:
    """``size`` independent uniform points on S^(n−1) ⊂ R^n."""
    if n == 1:
        return rng.choice([-1.0, 1.0], size=(size, 1))
    g = rng.standard_normal((size, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def uniform_ball(rng: np.random.Generator, n: int, size: int) -> np.ndarray:
    return uniform_sphere(rng, n, size) * rng.random((size, 1)) ** (1.0 / n)


def _check_small_dims(n1, n2):
    if not (1 <= n1 <= 3 and 1 <= n2 <= 3):
        raise ValueError("spherical means are supported for dimensions 1..3")


def spherical_mean(f: Callable, n1: int, n2: int, nodes1, nodes2, samples: int = 1000,
                   seed: int = 0) -> TensorGridFunction:
    """Monte Carlo estimate of the product-sphere average g_f on a grid.

    ``f(x1, x2)`` takes arrays of shape ``(..., n1)`` and ``(..., n2)``.  The
    same direction samples are reused at every node; ``stderr`` holds the
    per-node standard error.
    """
    _check_small_dims(n1, n2)
    if samples < 1000:
        raise ValueError("use at least 1000 samples")
    nodes1 = np.asarray(nodes1, dtype=float)
    nodes2 = np.asarray(nodes2, dtype=float)
    rng = np.random.default_rng(seed)
    xi1 = uniform_sphere(rng, n1, samples)
    xi2 = uniform_sphere(rng, n2, samples)
    mean = np.empty((nodes1.size, nodes2.size))
    se = np.empty_like(mean)
    for i, r1 in enumerate(nodes1):
        x1 = r1 * xi1
        for j, r2 in enumerate(nodes2):
            v = np.abs(np.asarray(f(x1, r2 * xi2), dtype=float))
            mean[i, j] = v.mean()
            se[i, j] = v.std(ddof=1) / math.sqrt(samples)
    return TensorGridFunction(nodes1, nodes2, mean, n1, n2, stderr=se)


def _sphere_rule(n: int, order: int):
    """Directions and weights (summing to one) for averaging over S^(n−1)."""
    if n == 1:
        return np.array([[-1.0], [1.0]]), np.array([0.5, 0.5])
    if n == 2:
        ang = 2 * np.pi * np.arange(order) / order
        return np.stack([np.cos(ang), np.sin(ang)], axis=1), np.full(order, 1.0 / order)
    z, wz = np.polynomial.legendre.leggauss(order)
    phi = 2 * np.pi * np.arange(2 * order) / (2 * order)
    zz, pp = np.meshgrid(z, phi, indexing="ij")
    rho = np.sqrt(1 - zz ** 2)
    dirs = np.stack([rho * np.cos(pp), rho * np.sin(pp), zz], axis=-1).reshape(-1, 3)
    w = (wz[:, None] * np.full(2 * order, 1.0 / (2 * order))[None, :] / 2.0).reshape(-1)
    return dirs, w


def spherical_mean_quadrature(f: Callable, n1: int, n2: int, order: int = 16) -> Callable:
    """Deterministic g_f(r₁, r₂) by product quadrature on the spheres.

    Exact for angular dependence that is a trigonometric (n = 2) or
    spherical (n = 3) polynomial of degree below ``order``.
    """
    _check_small_dims(n1, n2)
    d1, w1 = _sphere_rule(n1, order)
    d2, w2 = _sphere_rule(n2, order)
    wt = (w1[:, None] * w2[None, :]).reshape(-1)
    x1u = np.repeat(d1, d2.shape[0], axis=0)
    x2u = np.tile(d2, (d1.shape[0], 1))

    def g(r1, r2):
        r1, r2 = np.broadcast_arrays(np.asarray(r1, dtype=float), np.asarray(r2, dtype=float))
        shape = r1.shape
        a = r1.reshape(-1)
        b = r2.reshape(-1)
        out = np.empty(a.size)
        chunk = max(1, 2_000_000 // wt.size)
        for s in range(0, a.size, chunk):
            aa = a[s:s + chunk, None, None] * x1u[None]
            bb = b[s:s + chunk, None, None] * x2u[None]
            vals = np.abs(np.asarray(f(aa, bb), dtype=float))
            out[s:s + chunk] = vals @ wt
        return out.reshape(shape)

    return g


def hardy_monte_carlo(f: Callable, params: ProductParams, probes1, probes2, samples: int = 100_000,
                      seed: int = 0):
    """Monte Carlo estimate of H(|f|) at probe radii, with standard errors.

    Uses uniform samples in B(0, s₁) × B(0, s₂):
    H(|f|)(s) = ∏ |B(0, sᵢ)|^(βᵢ/nᵢ) · E|f(y)|.
    """
    if params.m != 2:
        raise ValueError("Monte Carlo operator evaluation is implemented for m = 2")
    a1, a2 = params.axes
    _check_small_dims(a1.n, a2.n)
    rng = np.random.default_rng(seed)
    u1 = uniform_ball(rng, a1.n, samples)
    u2 = uniform_ball(rng, a2.n, samples)
    probes1 = np.asarray(probes1, dtype=float)
    probes2 = np.asarray(probes2, dtype=float)
    est = np.empty((probes1.size, probes2.size))
    se = np.empty_like(est)
    for i, s1 in enumerate(probes1):
        for j, s2 in enumerate(probes2):
            v = np.abs(np.asarray(f(s1 * u1, s2 * u2), dtype=float))
            scale = special.ball_volume(a1.n, s1) ** (a1.beta / a1.n) * special.ball_volume(a2.n, s2) ** (a2.beta / a2.n)
            est[i, j] = scale * v.mean()
            se[i, j] = scale * v.std(ddof=1) / math.sqrt(samples)
    return est, se


def norm_monte_carlo(f: Callable, dims: Sequence[int], exponent: float, weights: Sequence[float],
                     samples: int = 100_000, seed: int = 0, scales: Sequence[float] = (1.0, 1.0)):
    """Full-dimensional Monte Carlo estimate of ‖f‖ in L^e(|x₁|^w₁ |x₂|^w₂).

    Gaussian importance sampling in R^(n₁) × R^(n₂) with standard deviations
    ``scales``.  Returns ``(norm, standard_error)`` (delta method).
    """
    n1, n2 = dims
    rng = np.random.default_rng(seed)
    s1, s2 = scales
    x1 = rng.standard_normal((samples, n1)) * s1
    x2 = rng.standard_normal((samples, n2)) * s2
    r1 = np.linalg.norm(x1, axis=1)
    r2 = np.linalg.norm(x2, axis=1)
    log_dens = (-0.5 * n1 * math.log(2 * math.pi * s1 * s1) - r1 ** 2 / (2 * s1 * s1)
                - 0.5 * n2 * math.log(2 * math.pi * s2 * s2) - r2 ** 2 / (2 * s2 * s2))
    vals = np.abs(np.asarray(f(x1, x2), dtype=float)) ** exponent
    with np.errstate(divide="ignore"):
        terms = vals * np.exp(weights[0] * np.log(r1) + weights[1] * np.log(r2) - log_dens)
    integral = terms.mean()
    se_integral = terms.std(ddof=1) / math.sqrt(samples)
    norm = integral ** (1.0 / exponent)
    se = norm / (exponent * integral) * se_integral
    return norm, se
