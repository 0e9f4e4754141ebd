"""Semi-infinite quadrature, cumulative transforms and 2-D prefix integrals.

All radial integrals are computed in the log variable t = ln r, where the
power-law behaviour of every integrand in scope at r → 0 and r → ∞ turns
into exponential decay.  Integrands are supplied as *log* integrands
``L(t) = ln(integrand(t))`` and summed with ``logsumexp``; this keeps the
p-th and q-th powers of singular profiles representable.  The node maps are
the standard double-exponential ones:

* ``real``    t = c + (π/2) sinh u                     on (−∞, ∞)
* ``upper``   t = a + exp((π/2) sinh u)                on [a, ∞)
* ``lower``   t = b − exp((π/2) sinh u)                on (−∞, b]
* ``finite``  t = mid + half·tanh((π/2) sinh u)        on [a, b]

The trapezoidal step is halved level by level until two successive levels
agree to ``rel_tol``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator
from scipy.special import logsumexp

from .errors import GridMismatch, NonConvergence
from .profiles import RadialProfile

__all__ = [
    "QuadratureSpec",
    "DEFAULT_SPEC",
    "log_integrate_batch",
    "log_integrate",
    "integrate_zero_to_inf",
    "CumulativeProfile",
    "cumulative",
    "TensorGridFunction",
    "tensor_prefix_2d",
    "integrate_sampled",
    "log_grid",
]

_HALF_PI = 0.5 * math.pi
_U_MAX = {"finite": 3.5, "upper": 4.0, "lower": 4.0, "real": 6.8}
# |t| beyond which the truncation check is made for infinite ends
_T_FAR = 700.0
# plain (non-log) integrands are sampled on |t| <= _T_PLAIN so that moderate
# powers of r neither overflow nor form inf*0 products
_T_PLAIN = 150.0
_MIN_LEVEL = 3
# |ln r| beyond which cumulative queries switch to asymptotic continuation
_T_DEEP = 1000.0


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    max_level: int = 10
    grid_points: int = 512
    r_min: float = 1e-6
    r_max: float = 1e6
    panel_order: int = 12
    tensor_order: int = 6
    head_level: int = 4
    max_panel_width: float = 0.125

    def __post_init__(self):
        if not 0 < self.rel_tol <= 1e-6:
            raise ValueError("rel_tol must lie in (0, 1e-6]")
        if not 3 <= self.max_level <= 14:
            raise ValueError("max_level must lie in [3, 14]")
        if self.grid_points < 64:
            raise ValueError("grid_points must be at least 64")
        if not 0 < self.r_min < self.r_max:
            raise ValueError("need 0 < r_min < r_max")

    def grid(self) -> np.ndarray:
        return log_grid(self.r_min, self.r_max, self.grid_points)


DEFAULT_SPEC = QuadratureSpec()


def log_grid(r_min: float, r_max: float, points: int) -> np.ndarray:
    return np.exp(np.linspace(math.log(r_min), math.log(r_max), points))


@lru_cache(maxsize=None)
def _gauss_legendre(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _log_cosh(x):
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2 * ax)) - math.log(2.0)


@lru_cache(maxsize=64)
def _de_abscissae(kind: str, level: int):
    h = 2.0 ** (-level)
    k = int(math.ceil(_U_MAX[kind] / h))
    u = np.arange(-k, k + 1) * h
    return u, h


def _de_map(kind, u, a, b):
    """Nodes t and log-weights ln(dt/du) for query intervals a, b (shape (Q, 1))."""
    s = _HALF_PI * np.sinh(u)
    lcu = np.log(_HALF_PI * np.cosh(u))
    if kind == "real":
        return a + s, np.broadcast_to(lcu, np.broadcast_shapes(np.shape(a), u.shape))
    if kind == "upper":
        return a + np.exp(s), np.broadcast_to(lcu + s, np.broadcast_shapes(np.shape(a), u.shape))
    if kind == "lower":
        return b - np.exp(s), np.broadcast_to(lcu + s, np.broadcast_shapes(np.shape(b), u.shape))
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    with np.errstate(divide="ignore"):
        lhalf = np.log(half)
    return mid + half * np.tanh(s), lhalf + lcu - 2 * _log_cosh(s)


def _edge_index(kind, size):
    """Positions of the outermost nodes that sit at an infinite end."""
    if kind == "real":
        return [0, size - 1]
    if kind in ("upper", "lower"):
        return [size - 1]
    return []


def log_integrate_batch(log_fn: Callable, kind: str, a=0.0, b=0.0, spec: QuadratureSpec = DEFAULT_SPEC):
    """ln ∫ exp(log_fn(t)) dt over a batch of intervals.

    ``a``/``b`` are arrays of lower/upper limits (only the relevant one is
    used for half-lines; ``a`` is the centre for ``real``).  Returns
    ``(log_values, rel_err)`` with one entry per query.  Raises
    :class:`NonConvergence` when some query fails to settle by
    ``spec.max_level`` or its integrand does not decay.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    a, b = np.broadcast_arrays(a, b)
    qn = a.shape[0]
    out = np.full(qn, -np.inf)
    err = np.zeros(qn)
    if kind == "finite":
        active = np.flatnonzero(b > a)
    else:
        active = np.arange(qn)
    if active.size == 0:
        return out, err

    def level_sum(idx, level):
        u, h = _de_abscissae(kind, level)
        t, lw = _de_map(kind, u, a[idx, None], b[idx, None])
        with np.errstate(all="ignore"):
            lv = np.asarray(log_fn(t), dtype=float)
        terms = lv + lw
        if np.any(np.isnan(terms)) or np.any(terms == np.inf):
            raise NonConvergence(f"non-finite integrand values ({kind} rule, level {level})", level)
        edges = _edge_index(kind, terms.shape[1])
        edge = np.max(terms[:, edges], axis=1) if edges else np.full(terms.shape[0], -np.inf)
        return logsumexp(terms, axis=1) + math.log(h), edge + math.log(h)

    prev, _ = level_sum(active, _MIN_LEVEL - 1)
    level = _MIN_LEVEL
    edge_out = np.full(qn, -np.inf)
    while True:
        cur, edge = level_sum(active, level)
        both_zero = np.isneginf(cur) & np.isneginf(prev)
        with np.errstate(invalid="ignore"):
            diff = np.where(both_zero, 0.0, np.abs(np.expm1(cur - prev)))
        diff = np.nan_to_num(diff, nan=np.inf)
        done = diff <= spec.rel_tol
        out[active[done]] = cur[done]
        err[active[done]] = diff[done]
        edge_out[active[done]] = edge[done]
        if np.all(done):
            break
        if level >= spec.max_level:
            raise NonConvergence(
                f"{kind} rule did not converge by level {level} (err {np.max(diff):.3g})",
                level,
                float(np.max(diff)),
            )
        active, prev = active[~done], cur[~done]
        level += 1

    # truncation: the outermost terms at an infinite end must be negligible
    with np.errstate(invalid="ignore"):
        bad = np.isfinite(out) & (edge_out - out > math.log(spec.rel_tol))
    if np.any(bad):
        raise NonConvergence(f"integrand does not decay on the {kind} rule's infinite end", level)
    return out, err


def log_integrate(log_fn: Callable, spec: QuadratureSpec = DEFAULT_SPEC, breakpoints=(), center: float = 0.0):
    """ln ∫_{−∞}^{∞} exp(log_fn(t)) dt, split at the given t-breakpoints."""
    bps = sorted({float(x) for x in breakpoints})
    if not bps:
        v, e = log_integrate_batch(log_fn, "real", center, 0.0, spec)
        return float(v[0]), float(e[0])
    pieces = [log_integrate_batch(log_fn, "lower", 0.0, bps[0], spec)]
    for lo, hi in zip(bps[:-1], bps[1:]):
        pieces.append(log_integrate_batch(log_fn, "finite", lo, hi, spec))
    pieces.append(log_integrate_batch(log_fn, "upper", bps[-1], 0.0, spec))
    logs = np.array([p[0][0] for p in pieces])
    errs = np.array([p[1][0] for p in pieces])
    total = logsumexp(logs)
    if np.isneginf(total):
        return total, 0.0
    weights = np.exp(logs - total)
    return float(total), float(np.sum(weights * errs))


def integrate_zero_to_inf(f: Callable, spec: QuadratureSpec = DEFAULT_SPEC, breakpoints=()):
    """∫₀^∞ f(r) dr for a nonnegative integrand f.

    Returns ``(value, err_est)``.  The integrand must be finite on (0, ∞) and
    integrable at both ends; otherwise :class:`NonConvergence` is raised.
    """

    def log_fn(t):
        t = np.asarray(t, dtype=float)
        inside = np.abs(t) <= _T_PLAIN
        r = np.exp(np.where(inside, t, 0.0))
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            v = np.broadcast_to(np.asarray(f(r), dtype=float), t.shape)
            if np.any(v[inside] < 0):
                raise ValueError("integrate_zero_to_inf expects a nonnegative integrand")
            lv = np.log(v) + t
        # outside the representable range the integrand is treated as negligible;
        # the truncation check evaluates exactly at |t| = _T_PLAIN
        return np.where(inside, lv, -np.inf)

    lv, err = log_integrate(log_fn, spec, [math.log(b) for b in breakpoints])
    if np.isfinite(lv):
        # the mask hides anything beyond |t| = _T_PLAIN; demand decay there
        ends = np.asarray(log_fn(np.array([-_T_PLAIN, _T_PLAIN])), dtype=float)
        if np.any(np.isnan(ends)) or np.any(ends - lv > math.log(spec.rel_tol)):
            raise NonConvergence("integrand does not decay at the ends of the representable range")
    return math.exp(lv), err * math.exp(lv)


# --------------------------------------------------------------------------
# cumulative transforms


class CumulativeProfile:
    """F(s) = ∫₀^s f(r) r^(n−1) dr, evaluable at any s > 0.

    Built from a log-spaced node grid: a double-exponential head integral
    below the first node, Gauss–Legendre panel integrals between nodes, and
    their running (log-space) prefix sums.  Evaluation adds a partial panel
    to the prefix; queries beyond the grid fall back to half-line rules.
    """

    def __init__(self, source: RadialProfile, n: int, spec: QuadratureSpec = DEFAULT_SPEC):
        self.source = source
        self.n = int(n)
        self.spec = spec
        self._total = None
        self._deep_anchor = None
        self._deep_tail = None
        t_lo, t_hi = math.log(spec.r_min), math.log(spec.r_max)
        width = (t_hi - t_lo) / (spec.grid_points - 1)
        bps = [math.log(b) for b in source.breakpoints if b > 0]
        if bps:
            lo = min(t_lo, min(bps) - 1.0)
            hi = max(t_hi, max(bps) + 1.0)
            count = max(spec.grid_points, int(math.ceil((hi - lo) / width)) + 1)
            base = np.linspace(lo, hi, count)
        else:
            base = np.linspace(t_lo, t_hi, spec.grid_points)
        self.t = np.unique(np.concatenate([base, bps]))
        self.nodes = np.exp(self.t)

        head, head_err = log_integrate_batch(self._log_integrand, "lower", 0.0, self.t[0], spec)
        panels = self._log_panels(self.t[:-1], self.t[1:])
        self._log_prefix = np.logaddexp.accumulate(np.concatenate([head, panels]))
        self.err_est = float(head_err[0])

    def _log_integrand(self, t):
        return self.source.log_eval(t) + self.n * t

    def _log_panels(self, lo, hi):
        x, w = _gauss_legendre(self.spec.panel_order)
        lo = np.asarray(lo, dtype=float)[:, None]
        hi = np.asarray(hi, dtype=float)[:, None]
        half = 0.5 * (hi - lo)
        t = lo + half * (x + 1.0)
        with np.errstate(divide="ignore"):
            lw = np.log(w) + np.log(half)
        terms = self._log_integrand(t) + lw
        return logsumexp(terms, axis=1)

    def _log_total(self):
        if self._total is None:
            try:
                tail, _ = log_integrate_batch(self._log_integrand, "upper", self.t[-1], 0.0, self.spec)
                self._total = float(np.logaddexp(self._log_prefix[-1], tail[0]))
            except NonConvergence:
                self._total = math.inf
        return self._total

    @property
    def log_prefix(self) -> np.ndarray:
        """ln F at the grid nodes."""
        return self._log_prefix.copy()

    def _deep_ends(self, t):
        # DE nodes b ∓ e^s collapse onto b once ulp(b) is comparable to the
        # integrand's scale, so very distant queries use the asymptotics
        lo = t < min(self.t[0], -_T_DEEP)
        hi = t > max(self.t[-1], _T_DEEP)
        if np.any(hi):
            total = self._log_total()
            if not math.isfinite(total):
                hi[:] = False
            else:
                if self._deep_tail is None:
                    tail, _ = log_integrate_batch(self._log_integrand, "upper", _T_DEEP, 0.0, self.spec)
                    self._deep_tail = float(tail[0])
                if self._deep_tail - total > math.log(self.spec.rel_tol):
                    hi[:] = False
        return lo, hi

    def _deep_below(self, t):
        """F ≍ r^(A+n) at the origin, continued from its value at t = −_T_DEEP."""
        slope = self.source.origin_exponent + self.n
        if slope == math.inf:
            return np.full(t.shape, -np.inf)
        if not slope > 0:
            raise NonConvergence(f"profile behaves like r^{self.source.origin_exponent:g} at 0: F is infinite")
        if self._deep_anchor is None:
            anchor, _ = log_integrate_batch(self._log_integrand, "lower", 0.0, -_T_DEEP, self.spec)
            self._deep_anchor = float(anchor[0])
        return self._deep_anchor + slope * (t + _T_DEEP)

    def log_F(self, t):
        t = np.asarray(t, dtype=float)
        shape = t.shape
        t = t.reshape(-1)
        out = np.empty_like(t)
        deep_lo, deep_hi = self._deep_ends(t)
        if np.any(deep_lo):
            out[deep_lo] = self._deep_below(t[deep_lo])
        if np.any(deep_hi):
            out[deep_hi] = self._log_total()
        below = (t < self.t[0]) & ~deep_lo
        above = (t > self.t[-1]) & ~deep_hi
        inside = ~(below | above | deep_lo | deep_hi)
        if np.any(below):
            out[below], _ = log_integrate_batch(self._log_integrand, "lower", 0.0, t[below], self.spec)
        if np.any(inside):
            ti = t[inside]
            j = np.clip(np.searchsorted(self.t, ti, side="right") - 1, 0, self.t.size - 2)
            part = self._log_panels(self.t[j], ti)
            out[inside] = np.logaddexp(self._log_prefix[j], part)
        if np.any(above):
            ta = t[above]
            total = self._log_total()
            res = np.empty_like(ta)
            use_tail = np.zeros(ta.shape, dtype=bool)
            if math.isfinite(total):
                tail, _ = log_integrate_batch(self._log_integrand, "upper", ta, 0.0, self.spec)
                use_tail = tail - total < math.log(0.5)
                with np.errstate(divide="ignore"):
                    res[use_tail] = total + np.log1p(-np.exp(tail[use_tail] - total))
            rest = ~use_tail
            if np.any(rest):
                extra, _ = log_integrate_batch(self._log_integrand, "finite", self.t[-1], ta[rest], self.spec)
                res[rest] = np.logaddexp(self._log_prefix[-1], extra)
            out[above] = res
        return out.reshape(shape)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        return np.exp(self.log_F(np.log(s)))


def cumulative(profile: RadialProfile, n: int, spec: QuadratureSpec = DEFAULT_SPEC) -> CumulativeProfile:
    """Cumulative transform s ↦ ∫₀^s profile(r) r^(n−1) dr."""
    return CumulativeProfile(profile, n, spec)


# --------------------------------------------------------------------------
# tensor grids


@dataclass(frozen=True, eq=False)
class TensorGridFunction:
    """Values of a function of (r₁, r₂) on a tensor product of radial grids.

    ``source``, when present, is a vectorised callable ``source(r1, r2)``
    that the quadrature may evaluate between nodes.  ``stderr`` carries
    per-node Monte Carlo standard errors.
    """

    nodes1: np.ndarray
    nodes2: np.ndarray
    values: np.ndarray
    n1: int
    n2: int
    source: Callable | None = None
    stderr: np.ndarray | None = None

    def __post_init__(self):
        n1 = np.asarray(self.nodes1, dtype=float)
        n2 = np.asarray(self.nodes2, dtype=float)
        v = np.asarray(self.values, dtype=float)
        for nodes in (n1, n2):
            if nodes.ndim != 1 or nodes.size < 2 or nodes[0] <= 0 or np.any(np.diff(nodes) <= 0):
                raise GridMismatch("grid nodes must be positive, strictly increasing 1-D arrays")
        if v.shape != (n1.size, n2.size):
            raise GridMismatch(f"values shape {v.shape} does not match grid ({n1.size}, {n2.size})")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid values must be finite")
        if np.any(v < 0):
            raise ValueError("grid values must be nonnegative")
        object.__setattr__(self, "nodes1", n1)
        object.__setattr__(self, "nodes2", n2)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, fn, nodes1, nodes2, n1, n2):
        nodes1 = np.asarray(nodes1, dtype=float)
        nodes2 = np.asarray(nodes2, dtype=float)
        values = fn(nodes1[:, None], nodes2[None, :])
        values = np.broadcast_to(values, (nodes1.size, nodes2.size)).astype(float)
        return cls(nodes1, nodes2, values, n1, n2, source=fn)

    def with_values(self, values, source=None, stderr=None):
        return TensorGridFunction(self.nodes1, self.nodes2, values, self.n1, self.n2, source, stderr)

    def to_csv(self, path):
        import csv

        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["r1", "r2", "value"])
            for i, r1 in enumerate(self.nodes1):
                for j, r2 in enumerate(self.nodes2):
                    w.writerow([format(r1, ".17g"), format(r2, ".17g"), format(self.values[i, j], ".17g")])

    @classmethod
    def read_csv(cls, path, n1, n2):
        import csv

        with open(path, newline="") as fh:
            rows = [(float(r["r1"]), float(r["r2"]), float(r["value"])) for r in csv.DictReader(fh)]
        r1 = np.unique([x[0] for x in rows])
        r2 = np.unique([x[1] for x in rows])
        if len(rows) != r1.size * r2.size:
            raise GridMismatch("CSV rows do not form a full tensor grid")
        values = np.empty((r1.size, r2.size))
        i1 = {v: i for i, v in enumerate(r1)}
        i2 = {v: i for i, v in enumerate(r2)}
        for a, b, v in rows:
            values[i1[a], i2[b]] = v
        return cls(r1, r2, values, n1, n2)


def _axis_subnodes(t_nodes, spec):
    """Sub-nodes, weights and per-cell start offsets for one tensor axis.

    Cell 0 is the head (−∞, t₀]; cell j ≥ 1 is (t_{j−1}, t_j], refined into
    Gauss–Legendre sub-panels no wider than ``spec.max_panel_width``.
    """
    u, h = _de_abscissae("lower", spec.head_level)
    th, lw = _de_map("lower", u, None, np.array([[t_nodes[0]]]))
    sub_t = [th.reshape(-1)]
    sub_w = [np.exp(lw.reshape(-1)) * h]
    starts = [0]
    count = sub_t[0].size
    x, w = _gauss_legendre(spec.tensor_order)
    for lo, hi in zip(t_nodes[:-1], t_nodes[1:]):
        pieces = max(1, int(math.ceil((hi - lo) / spec.max_panel_width)))
        edges = np.linspace(lo, hi, pieces + 1)
        half = 0.5 * np.diff(edges)[:, None]
        tt = (edges[:-1, None] + half * (x + 1.0)).reshape(-1)
        ww = (half * w).reshape(-1)
        starts.append(count)
        sub_t.append(tt)
        sub_w.append(ww)
        count += tt.size
    sub_t = np.concatenate(sub_t)
    sub_w = np.concatenate(sub_w)
    # head nodes below e^-700 contribute nothing representable; keep r > 0
    far = sub_t < -_T_FAR
    sub_w[far] = 0.0
    sub_t[far] = -_T_FAR
    return sub_t, sub_w, np.array(starts)


def _cells_from_callable(grid: TensorGridFunction, spec: QuadratureSpec):
    t1 = np.log(grid.nodes1)
    t2 = np.log(grid.nodes2)
    s1, w1, st1 = _axis_subnodes(t1, spec)
    s2, w2, st2 = _axis_subnodes(t2, spec)
    r1 = np.exp(s1)
    r2 = np.exp(s2)
    col_w = w2 * r2 ** grid.n2
    cells = np.empty((t1.size, t2.size))
    # row chunks aligned to cell boundaries keep memory bounded
    bounds = list(st1) + [s1.size]
    budget = max(1, 4_000_000 // max(1, s2.size))
    c = 0
    while c < t1.size:
        c_end = c + 1
        while c_end < t1.size and bounds[c_end + 1] - bounds[c] <= budget:
            c_end += 1
        lo, hi = bounds[c], bounds[c_end]
        vals = np.asarray(grid.source(r1[lo:hi, None], r2[None, :]), dtype=float)
        vals = np.broadcast_to(vals, (hi - lo, s2.size))
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise ValueError("tensor source must be finite and nonnegative")
        a = vals * (w1[lo:hi] * r1[lo:hi] ** grid.n1)[:, None] * col_w[None, :]
        rows = np.add.reduceat(a, st1[c:c_end] - lo, axis=0)
        cells[c:c_end] = np.add.reduceat(rows, st2, axis=1)
        c = c_end
    return cells


def _extrapolated_edge(y_edge, y_next, dt):
    """∫ beyond an edge node of a log-linear extrapolation (per line)."""
    y_edge = np.asarray(y_edge, dtype=float)
    y_next = np.asarray(y_next, dtype=float)
    out = np.zeros_like(y_edge)
    pos = y_edge > 0
    if np.any(pos):
        with np.errstate(divide="ignore"):
            kappa = (np.log(y_next[pos]) - np.log(y_edge[pos])) / dt
        if np.any(~(kappa > 0)):
            raise NonConvergence("sampled data does not decay beyond the grid edge")
        out[pos] = y_edge[pos] / kappa
    return out


def _cells_along_axis0(t, y):
    """Head + PCHIP panel integrals along axis 0 of sampled data y(t, ...)."""
    head = _extrapolated_edge(y[0], y[1], t[1] - t[0])
    anti = PchipInterpolator(t, y, axis=0).antiderivative()(t)
    panels = np.clip(np.diff(anti, axis=0), 0.0, None)
    return np.concatenate([head[None], panels], axis=0)


def tensor_prefix_2d(grid: TensorGridFunction, spec: QuadratureSpec = DEFAULT_SPEC) -> TensorGridFunction:
    """G(s₁, s₂) = ∫₀^{s₁}∫₀^{s₂} f r₁^(n₁−1) r₂^(n₂−1) dr₁ dr₂ at every node.

    Cell integrals come from a separable panel rule (on ``grid.source`` when
    available, otherwise on a shape-preserving interpolant of the samples);
    G is their 2-D inclusive prefix sum, hence monotone in both arguments.
    """
    if grid.source is not None:
        cells = _cells_from_callable(grid, spec)
    else:
        t1 = np.log(grid.nodes1)
        t2 = np.log(grid.nodes2)
        h = grid.values * (grid.nodes1 ** grid.n1)[:, None] * (grid.nodes2 ** grid.n2)[None, :]
        cells = _cells_along_axis0(t1, h)
        cells = _cells_along_axis0(t2, cells.T).T
    prefix = np.cumsum(np.cumsum(cells, axis=0), axis=1)
    return grid.with_values(prefix)


_SPLINE_WEIGHTS: dict = {}


def _spline_weights(t):
    key = (t.size, float(t[0]), float(t[-1]), hash(t.tobytes()))
    w = _SPLINE_WEIGHTS.get(key)
    if w is None:
        w = CubicSpline(t, np.eye(t.size)).integrate(t[0], t[-1])
        _SPLINE_WEIGHTS[key] = w
    return w


def integrate_sampled(t, y, axis: int = 0):
    """∫_{−∞}^{∞} y dt for samples of a nonnegative function on nodes t.

    Cubic-spline weights cover [t₀, t_N]; both tails are closed with
    log-linear (power-law in r) extrapolation from the two edge samples.
    """
    t = np.asarray(t, dtype=float)
    y = np.moveaxis(np.asarray(y, dtype=float), axis, 0)
    core = np.tensordot(_spline_weights(t), y, axes=(0, 0))
    head = _extrapolated_edge(y[0], y[1], t[1] - t[0])
    tail = _extrapolated_edge(y[-1], y[-2], t[-1] - t[-2])
    return core + head + tail
