"""Verification harness: extremizers, norm ratios and consistency checks."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import constants, profiles, special
from .errors import HypothesisViolation, ZeroNorm
from .operator import (
    SOURCE,
    TARGET,
    SeparableRadialFunction,
    axis_log_norm_integral,
    hardy_monte_carlo,
    hardy_separable,
    hardy_tensor2,
    norm_monte_carlo,
    spherical_mean_quadrature,
    weighted_norm,
)
from .params import AxisParams, Exponents, Mode, ProductParams, derive_alpha, validate
from .profiles import RadialProfile
from .quadrature import DEFAULT_SPEC, QuadratureSpec, TensorGridFunction, cumulative, log_grid, log_integrate

__all__ = [
    "VerificationReport",
    "SubstitutionMap",
    "SubstitutionReport",
    "SweepRow",
    "ReductionReport",
    "FAMILIES",
    "extremizer_thm1",
    "extremizer_thm2",
    "ratio",
    "random_test_function",
    "substitution_check",
    "sweep_q_to_p",
    "reduction_check",
    "polar_integrals",
    "run_batch",
    "to_json",
    "to_csv",
    "REPORT_COLUMNS",
]

FAMILIES = ("powerBump", "logNormalBump", "mixture")


@dataclass(frozen=True)
class VerificationReport:
    params: ProductParams
    constant: float
    ratio: float
    gap: float
    rel_gap: float
    quad_err_est: float
    function_id: str
    seed: int | None = None

    def as_record(self) -> dict:
        return {
            "params": self.params.describe(),
            "constant": self.constant,
            "ratio": self.ratio,
            "gap": self.gap,
            "relGap": self.rel_gap,
            "quadErrEst": self.quad_err_est,
            "functionId": self.function_id,
            "seed": self.seed,
        }


REPORT_COLUMNS = ("params", "constant", "ratio", "gap", "relGap", "quadErrEst", "functionId", "seed")


# --------------------------------------------------------------------------
# extremizers and ratios


def extremizer_thm1(params: ProductParams) -> SeparableRadialFunction:
    if params.mode is not Mode.THM1:
        raise HypothesisViolation("extremizer_thm1 needs thm1 params")
    return SeparableRadialFunction(
        tuple(profiles.thm1_extremizer_axis(ax.n, params.q, ax.beta) for ax in params.axes))


def extremizer_thm2(params: ProductParams, d_scale: float = 1.0) -> SeparableRadialFunction:
    """Two-weight extremizer; ``d_scale`` multiplies every dᵢ."""
    if params.mode not in (Mode.THM2, Mode.LEMMA2) or not params.q > params.p:
        raise HypothesisViolation("extremizer_thm2 needs thm2 params with p < q")
    p, q = params.p, params.q
    axes = []
    for ax in params.axes:
        np1 = ax.n * (p - 1)
        d = (np1 / (np1 - ax.gamma)) ** (1.0 / ax.n) * d_scale
        axes.append(profiles.thm2_extremizer_axis(ax.n, p, q, ax.gamma, d))
    return SeparableRadialFunction(tuple(axes))


def ratio(f, params: ProductParams, spec: QuadratureSpec = DEFAULT_SPEC,
          function_id: str = "custom", seed: int | None = None) -> VerificationReport:
    """‖ℋf‖_{q,α} / ‖f‖_{p,γ} against the governing sharp constant."""
    const = constants.mode_constant(params).value
    den, den_err = weighted_norm(f, params, SOURCE, spec, with_error=True)
    if den == 0:
        raise ZeroNorm(f"{function_id}: source norm is zero")
    if isinstance(f, TensorGridFunction):
        h = hardy_tensor2(f, params, spec)
    else:
        h = hardy_separable(f, params, spec)
    num, num_err = weighted_norm(h, params, TARGET, spec, with_error=True)
    r = num / den
    gap = const - r
    err = abs(num_err) + abs(den_err)
    if isinstance(f, SeparableRadialFunction):
        err += sum(p.cumulative.err_est for p in h.axis_profiles)
    return VerificationReport(params, const, r, gap, gap / const, float(err), function_id, seed)


def polar_integrals(f: SeparableRadialFunction, params: ProductParams, spec: QuadratureSpec = DEFAULT_SPEC):
    """Both sides of the unweighted polar-coordinate rewrite, before exponents.

    Returns ``(lhs, rhs)`` with
    lhs = ∏ nᵢ ∫₀^∞ (nᵢ Fᵢ(s))^q s^(q(βᵢ−nᵢ)+nᵢ−1) ds and
    rhs = ∏ nᵢ ∫₀^∞ fᵢ(s)^p s^(nᵢ−1) ds, where Fᵢ is the cumulative integral.
    """
    q, p = params.q, params.p
    log_lhs = 0.0
    log_rhs = 0.0
    for prof, ax in zip(f.axis_profiles, params.axes):
        cum = cumulative(prof, ax.n, spec)
        n = ax.n
        ln_n = math.log(n)

        def log_fn(t, cum=cum, n=n, beta=ax.beta, ln_n=ln_n):
            return q * (ln_n + cum.log_F(t)) + (q * (beta - n) + n) * t

        li, _ = log_integrate(log_fn, spec)
        log_lhs += ln_n + li
        lr, _ = axis_log_norm_integral(prof, n, p, 0.0, spec)
        log_rhs += ln_n + lr
    return math.exp(log_lhs), math.exp(log_rhs)


# --------------------------------------------------------------------------
# random admissible functions


def _axis_margin(theta: float) -> float:
    return 0.1 * max(abs(theta), 1.0)


def _random_axis_profile(rng: np.random.Generator, theta: float, family: str) -> RadialProfile:
    # admissible: r^a near 0 with a > -theta, r^-D at infinity with D > theta
    margin = _axis_margin(theta)
    if family == "powerBump":
        a = -theta + margin + rng.uniform(0.0, 2.0)
        decay = theta + margin + rng.uniform(0.0, 3.0)
        b = rng.uniform(0.5, 4.0)
        k = (decay + a) / b
        c = math.exp(rng.uniform(-1.5, 1.5))
        return profiles.power_bump(a, b, k, c)
    if family == "logNormalBump":
        return profiles.lognormal_bump(rng.uniform(-1.5, 1.5), rng.uniform(0.3, 1.5), rng.uniform(-1.0, 1.0))
    if family == "mixture":
        count = int(rng.integers(2, 4))
        comps = [_random_axis_profile(rng, theta, FAMILIES[int(rng.integers(0, 2))]) for _ in range(count)]
        weights = rng.uniform(0.2, 1.0, size=count)
        return profiles.mixture(comps, list(weights))
    raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")


def random_test_function(seed: int, params: ProductParams, family: str = "powerBump") -> SeparableRadialFunction:
    """Reproducible separable f with finite source norm.

    Exponents are drawn with a 10% margin inside the admissible region
    a > −(γ+n)/p at the origin and decay D > (γ+n)/p at infinity.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    rng = np.random.default_rng([int(seed), FAMILIES.index(family)])
    axes = []
    for ax in params.axes:
        theta = (ax.gamma + ax.n) / params.p
        axes.append(_random_axis_profile(rng, theta, family))
    return SeparableRadialFunction(tuple(axes))


# --------------------------------------------------------------------------
# change of variables


@dataclass(frozen=True)
class SubstitutionMap:
    """s(ρ)ⁿ/n = ∫₀^ρ t^(n−1−γ/(p−1)) dt and g(s) = f(ρ) ρ^(γ/(p−1))."""

    axis: AxisParams
    p: float

    def __post_init__(self):
        if not self.axis.gamma < self.axis.n * (self.p - 1):
            raise HypothesisViolation("gamma < n(p-1)", self.axis.gamma - self.axis.n * (self.p - 1))

    @property
    def k(self) -> float:
        return (self.axis.n * (self.p - 1) - self.axis.gamma) / (self.p - 1)

    def log_s_of_log_rho(self, t):
        n = self.axis.n
        return (math.log(n / self.k) + self.k * np.asarray(t)) / n

    def log_rho_of_log_s(self, t):
        n = self.axis.n
        return (math.log(self.k / n) + n * np.asarray(t)) / self.k

    def s_of_rho(self, rho):
        return np.exp(self.log_s_of_log_rho(np.log(rho)))

    def rho_of_s(self, s):
        return np.exp(self.log_rho_of_log_s(np.log(s)))

    def g_of_f(self, f: RadialProfile) -> RadialProfile:
        shift = self.axis.gamma / (self.p - 1)
        scale = self.axis.n / self.k
        to_rho = self.log_rho_of_log_s
        fn = f.log_eval

        def log_fn(t):
            lr = to_rho(t)
            return fn(lr) + shift * lr

        return RadialProfile(
            log_fn,
            f"g[{f.descriptor}]",
            decay_exponent=scale * (f.decay_exponent - shift),
            origin_exponent=scale * (f.origin_exponent + shift),
            breakpoints=tuple(float(self.s_of_rho(b)) for b in f.breakpoints),
        )


@dataclass(frozen=True)
class SubstitutionReport:
    lhs: float
    rhs: float
    rel_diff: float
    inverse_err: float


def substitution_check(profile: RadialProfile, axis: AxisParams, p: float,
                       spec: QuadratureSpec = DEFAULT_SPEC) -> SubstitutionReport:
    """Compare ∫ f^p ρ^(n−1+γ) dρ with ∫ g^p s^(n−1) ds."""
    smap = SubstitutionMap(axis, p)
    g = smap.g_of_f(profile)
    llhs, _ = axis_log_norm_integral(profile, axis.n, p, axis.gamma, spec)
    lrhs, _ = axis_log_norm_integral(g, axis.n, p, 0.0, spec)
    nodes = log_grid(spec.r_min, spec.r_max, 64)
    inv = float(np.max(np.abs(smap.s_of_rho(smap.rho_of_s(nodes)) / nodes - 1)))
    return SubstitutionReport(math.exp(llhs), math.exp(lrhs), abs(math.expm1(llhs - lrhs)), inv)


# --------------------------------------------------------------------------
# q → p sweep


@dataclass(frozen=True)
class SweepRow:
    eps: float
    q: float
    constant: float
    limit: float
    gap: float


def sweep_q_to_p(base: ProductParams, epsilons: Sequence[float]) -> list[SweepRow]:
    """Two-weight constant at q = p(1+ε) against its q → p limit."""
    for i, ax in enumerate(base.axes):
        if ax.beta != 0:
            raise HypothesisViolation("beta == 0", ax.beta, axis=i)
    p = base.p
    limit_params = validate([AxisParams(ax.n, 0.0, ax.gamma, ax.gamma) for ax in base.axes],
                            Exponents(p, p), Mode.LIMIT)
    limit = constants.limit_constant(limit_params).value
    rows = []
    for eps in epsilons:
        q = p * (1 + eps)
        axes = [AxisParams(ax.n, 0.0, ax.gamma, derive_alpha(ax.n, 0.0, ax.gamma, p, q)) for ax in base.axes]
        c = constants.thm2_constant(validate(axes, Exponents(p, q), Mode.THM2)).value
        rows.append(SweepRow(float(eps), q, c, limit, abs(c - limit)))
    return rows


# --------------------------------------------------------------------------
# spherical-mean reduction


DEFAULT_PROBES = (0.25, 0.5, 1.0, 2.0)


@dataclass(frozen=True)
class PerturbedRadial:
    """exp(−(a r₁² + b r₂² + c r₁r₂)) (1 + ε₁ x₁·e₁/|x₁|)(1 + ε₂ x₂·e₂/|x₂|)."""

    a: float
    b: float
    c: float
    eps1: float
    eps2: float
    e1: np.ndarray
    e2: np.ndarray

    @classmethod
    def random(cls, seed: int, n1: int, n2: int, radial: bool = False):
        rng = np.random.default_rng(seed)
        a, b = rng.uniform(0.5, 1.5, size=2)
        c = rng.uniform(0.0, 0.5)
        eps = (0.0, 0.0) if radial else tuple(rng.uniform(0.2, 0.8, size=2))
        e1 = rng.standard_normal(n1)
        e2 = rng.standard_normal(n2)
        return cls(float(a), float(b), float(c), float(eps[0]), float(eps[1]),
                   e1 / np.linalg.norm(e1), e2 / np.linalg.norm(e2))

    def radial_part(self, r1, r2):
        return np.exp(-(self.a * r1 * r1 + self.b * r2 * r2 + self.c * r1 * r2))

    def __call__(self, x1, x2):
        r1 = np.linalg.norm(x1, axis=-1)
        r2 = np.linalg.norm(x2, axis=-1)
        with np.errstate(invalid="ignore", divide="ignore"):
            c1 = np.where(r1 > 0, (x1 @ self.e1) / r1, 0.0)
            c2 = np.where(r2 > 0, (x2 @ self.e2) / r2, 0.0)
        return self.radial_part(r1, r2) * (1 + self.eps1 * c1) * (1 + self.eps2 * c2)


@dataclass(frozen=True)
class ReductionReport:
    probes: tuple[float, ...]
    deterministic: np.ndarray
    monte_carlo: np.ndarray
    stderr: np.ndarray
    max_z: float
    norm_g: float
    norm_f: float
    norm_f_se: float
    seed: int
    samples: int
    contraction_ok: bool = field(init=False)
    identity_ok: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "contraction_ok", bool(self.norm_g <= self.norm_f + 3 * self.norm_f_se))
        object.__setattr__(self, "identity_ok", bool(self.max_z <= 3.0))

    @property
    def passed(self) -> bool:
        return self.contraction_ok and self.identity_ok


def _spherical_mean_norm(g: Callable, params: ProductParams, spec: QuadratureSpec) -> float:
    nodes = log_grid(1e-4, 1e2, 193)
    a1, a2 = params.axes
    grid = TensorGridFunction.from_callable(g, nodes, nodes, a1.n, a2.n)
    return weighted_norm(grid, params, SOURCE, spec)


def reduction_check(params: ProductParams, seed: int = 0, samples: int = 100_000,
                    spec: QuadratureSpec = DEFAULT_SPEC, probes: Sequence[float] = DEFAULT_PROBES,
                    radial: bool = False) -> ReductionReport:
    """ℋ(g_f) by quadrature against Monte Carlo ℋ(|f|), plus ‖g_f‖ ≤ ‖f‖.

    f is a seeded perturbed-radial function with an odd angular factor on
    each axis; g_f is computed by product quadrature on the spheres.
    """
    if params.m != 2:
        raise HypothesisViolation("reduction_check needs m == 2", params.m - 2)
    a1, a2 = params.axes
    if a1.n > 3 or a2.n > 3:
        raise HypothesisViolation("reduction_check needs n1, n2 <= 3")
    f = PerturbedRadial.random(seed, a1.n, a2.n, radial=radial)
    g = spherical_mean_quadrature(f, a1.n, a2.n)
    pr = np.asarray(probes, dtype=float)
    det = hardy_tensor2(TensorGridFunction.from_callable(g, pr, pr, a1.n, a2.n), params, spec).values
    mc, se = hardy_monte_carlo(f, params, pr, pr, samples=samples, seed=seed)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(se > 0, np.abs(det - mc) / se, np.where(det == mc, 0.0, np.inf))
    norm_g = _spherical_mean_norm(g, params, spec)
    p = params.p
    scales = (1 / math.sqrt(2 * p * f.a), 1 / math.sqrt(2 * p * f.b))
    norm_f, norm_f_se = norm_monte_carlo(f, (a1.n, a2.n), p, (a1.gamma, a2.gamma),
                                         samples=samples, seed=seed + 1, scales=scales)
    return ReductionReport(tuple(float(x) for x in pr), det, mc, se, float(np.max(z)),
                           float(norm_g), float(norm_f), float(norm_f_se), seed, samples)


# --------------------------------------------------------------------------
# batches and serialization


def _thread_cap() -> int:
    env = os.environ.get("HARDY_SHARP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def run_batch(jobs: Sequence[Callable[[], object]], threads: int | None = None) -> list:
    """Run independent jobs, returning results in input order."""
    jobs = list(jobs)
    workers = min(len(jobs), threads or _thread_cap())
    if workers <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: job(), jobs))


def _fmt(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            return "null"
        return format(v, ".17g")
    return json.dumps(str(value))


def to_json(records: Sequence[dict]) -> str:
    """Flat JSON array with floats written to 17 significant digits."""
    lines = []
    for rec in records:
        body = ", ".join(f"{json.dumps(k)}: {_fmt(v)}" for k, v in rec.items())
        lines.append("  {" + body + "}")
    return "[\n" + ",\n".join(lines) + "\n]\n"


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def to_csv(records: Sequence[dict], columns: Sequence[str] | None = None) -> str:
    records = list(records)
    if columns is None:
        columns = list(records[0].keys()) if records else list(REPORT_COLUMNS)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for rec in records:
        w.writerow([_csv_cell(rec.get(c)) for c in columns])
    return buf.getvalue()


def sphere_ball_table(max_n: int = 5):
    """(n, |S^(n−1)|, |B(0,1)|) rows, handy for the CLI and for spot checks."""
    return [(n, special.sphere_area(n), special.ball_volume(n)) for n in range(1, max_n + 1)]
