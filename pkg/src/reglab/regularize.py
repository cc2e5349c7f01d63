"""Epsilon-regularized integrals, covariations and their limit estimation.

All functionals map a pair of paths on a shared grid to a cumulative curve
on the same grid.  The smoothing width eps must be an integer multiple
k * dt with k >= 4, so the ds-quadrature error O(dt/eps) stays subordinate.
Two quadratures are available for the three directed integrals:

* ``grid``     - left-endpoint sums, respecting adaptedness;
* ``jittered`` - the integrand is evaluated at t_i + U_i * dt with
  independent uniform offsets (integrator interpolated), for integrands
  that are only defined Lebesgue-almost everywhere.

Limits are estimated over ensembles: per eps, the sup distance to a
reference curve is summarized by median / 90th percentile / exceedance
frequency, and the decay rate is a least-squares slope in log-log scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .paths import Grid, SamplePath, jitter_offsets

DEFAULT_LADDER = (128, 64, 32, 16, 8, 4)
MIN_EPS_MULTIPLE = 4
MIN_UCP_MEMBERS = 30


def eps_multiple(g: Grid, eps: float) -> int:
    """Validate eps = k * dt with integer k >= 4 and return k."""
    k = eps / g.dt
    ki = int(round(k))
    if not math.isclose(k, ki, rel_tol=0.0, abs_tol=1e-9):
        raise ValueError(f"eps={eps} is not an integer multiple of dt={g.dt}")
    if ki < MIN_EPS_MULTIPLE:
        raise ValueError(f"eps must be at least {MIN_EPS_MULTIPLE} grid steps, got {ki}")
    return ki


def eps_ladder(g: Grid, multipliers: Sequence[int] = DEFAULT_LADDER) -> tuple[float, ...]:
    """Strictly decreasing eps values k * dt from a multiplier ladder."""
    ks = [int(m) for m in multipliers]
    if len(ks) < 1 or any(k < MIN_EPS_MULTIPLE for k in ks):
        raise ValueError(f"multipliers must be integers >= {MIN_EPS_MULTIPLE}")
    if any(a <= b for a, b in zip(ks, ks[1:])):
        raise ValueError("ladder must be strictly decreasing")
    return tuple(k * g.dt for k in ks)


def _same_grid(*paths: SamplePath) -> Grid:
    g = paths[0].grid
    for p in paths[1:]:
        if p.grid is not g and (p.grid.n != g.n or p.grid.T != g.T):
            raise ValueError("paths must share one grid")
    return g


def _shift_forward(values: np.ndarray, k: int) -> np.ndarray:
    """values at t_i + k*dt under constant extension, for i = 0..n."""
    n = len(values) - 1
    idx = np.minimum(np.arange(n + 1) + k, n)
    return values[idx]


def _shift_backward(values: np.ndarray, k: int) -> np.ndarray:
    n = len(values) - 1
    idx = np.maximum(np.arange(n + 1) - k, 0)
    return values[idx]


def _integrand_values(Y, g: Grid, s: np.ndarray) -> np.ndarray:
    """Evaluate the integrand at quadrature points s (callable or path)."""
    if isinstance(Y, SamplePath):
        return np.asarray(Y.at(s), dtype=np.float64)
    if callable(Y):
        return np.asarray(Y(s), dtype=np.float64)
    return np.full(len(s), float(Y))


def _jitter_points(g: Grid, jitter) -> np.ndarray:
    if jitter is None:
        raise ValueError("jittered quadrature needs a jitter seed or offsets")
    if isinstance(jitter, (int, np.integer)):
        offs = jitter_offsets(g, int(jitter))
    else:
        offs = np.asarray(jitter, dtype=np.float64)
        if offs.shape != (g.n,):
            raise ValueError(f"expected {g.n} jitter offsets")
    return g.times[:-1] + offs * g.dt


def _accumulate(core: np.ndarray, weight: float) -> np.ndarray:
    out = np.empty(len(core) + 1)
    out[0] = 0.0
    np.cumsum(core, out=out[1:])
    out *= weight
    return out


def _directed_eps(Y, X: SamplePath, eps: float, mode: str, quadrature: str, jitter):
    g = X.grid
    if isinstance(Y, SamplePath):
        _same_grid(Y, X)
    k = eps_multiple(g, eps)
    if quadrature == "grid":
        s = g.times[:-1]
        y = _integrand_values(Y, g, s)
        if mode == "forward":
            inc = _shift_forward(X.values, k)[:-1] - X.values[:-1]
        elif mode == "backward":
            inc = X.values[:-1] - _shift_backward(X.values, k)[:-1]
        else:
            inc = 0.5 * (
                _shift_forward(X.values, k)[:-1] - _shift_backward(X.values, k)[:-1]
            )
    elif quadrature == "jittered":
        s = _jitter_points(g, jitter)
        y = _integrand_values(Y, g, s)
        if mode == "forward":
            inc = X.at(s + eps) - X.at(s)
        elif mode == "backward":
            inc = X.at(s) - X.at(s - eps)
        else:
            inc = 0.5 * (X.at(s + eps) - X.at(s - eps))
    else:
        raise ValueError(f"unknown quadrature {quadrature!r}")
    return SamplePath(g, _accumulate(y * inc, g.dt / eps))


def forward_eps(Y, X: SamplePath, eps: float, quadrature: str = "grid", jitter=None) -> SamplePath:
    """Curve t -> int_0^t Y(s) (X(s+eps) - X(s)) / eps ds."""
    return _directed_eps(Y, X, eps, "forward", quadrature, jitter)


def backward_eps(Y, X: SamplePath, eps: float, quadrature: str = "grid", jitter=None) -> SamplePath:
    """Curve t -> int_0^t Y(s) (X(s) - X(s-eps)) / eps ds."""
    return _directed_eps(Y, X, eps, "backward", quadrature, jitter)


def symmetric_eps(Y, X: SamplePath, eps: float, quadrature: str = "grid", jitter=None) -> SamplePath:
    """Curve t -> int_0^t Y(s) (X(s+eps) - X(s-eps)) / (2 eps) ds."""
    return _directed_eps(Y, X, eps, "symmetric", quadrature, jitter)


def cov_eps(X: SamplePath, Y: SamplePath, eps: float) -> SamplePath:
    """Curve t -> int_0^t (X(s+eps) - X(s)) (Y(s+eps) - Y(s)) / eps ds."""
    g = _same_grid(X, Y)
    k = eps_multiple(g, eps)
    dx = _shift_forward(X.values, k)[:-1] - X.values[:-1]
    dy = _shift_forward(Y.values, k)[:-1] - Y.values[:-1]
    return SamplePath(g, _accumulate(dx * dy, g.dt / eps))


def levy_area_eps(X: SamplePath, Y: SamplePath, eps: float) -> SamplePath:
    """Curve t -> int_0^t (X(s) Y(s+eps) - X(s+eps) Y(s)) / eps ds."""
    g = _same_grid(X, Y)
    k = eps_multiple(g, eps)
    xs = _shift_forward(X.values, k)[:-1]
    ys = _shift_forward(Y.values, k)[:-1]
    core = X.values[:-1] * ys - xs * Y.values[:-1]
    return SamplePath(g, _accumulate(core, g.dt / eps))


def vector_forward_eps(
    gX1, gX2, X1: SamplePath, X2: SamplePath, eps: float,
    quadrature: str = "grid", jitter=None,
) -> SamplePath:
    """Two-dimensional forward functional: sum of the coordinate curves."""
    a = forward_eps(gX1, X1, eps, quadrature, jitter)
    b = forward_eps(gX2, X2, eps, quadrature, jitter)
    return SamplePath(a.grid, a.values + b.values)


# ---------------------------------------------------------------------------
# Ladders and limit estimation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EpsFamily:
    """Curves of one functional along a strictly decreasing eps ladder."""

    eps: tuple[float, ...]
    curves: tuple[SamplePath, ...]

    def __post_init__(self):
        if len(self.eps) != len(self.curves) or not self.eps:
            raise ValueError("need one curve per eps value")
        g = self.curves[0].grid
        for e in self.eps:
            eps_multiple(g, e)
        if any(a <= b for a, b in zip(self.eps, self.eps[1:])):
            raise ValueError("eps ladder must be strictly decreasing")
        for c in self.curves:
            if c.values[0] != 0.0:
                raise ValueError("functional curves start at 0")

    @property
    def grid(self) -> Grid:
        return self.curves[0].grid

    @property
    def finest(self) -> SamplePath:
        return self.curves[-1]


_KINDS: dict[str, Callable] = {
    "forward": forward_eps,
    "backward": backward_eps,
    "symmetric": symmetric_eps,
}


def functional_family(
    A, B: SamplePath, eps_values: Sequence[float], kind: str = "forward",
    quadrature: str = "grid", jitter=None,
) -> EpsFamily:
    """Evaluate one functional along a whole eps ladder.

    For the directed kinds (A, B) is (integrand, integrator); for ``cov``
    and ``levy`` the pair is passed through in order.
    """
    if kind in _KINDS:
        fn = _KINDS[kind]
        curves = tuple(fn(A, B, e, quadrature, jitter) for e in eps_values)
    elif kind == "cov":
        curves = tuple(cov_eps(A, B, e) for e in eps_values)
    elif kind == "levy":
        curves = tuple(levy_area_eps(A, B, e) for e in eps_values)
    else:
        raise ValueError(f"unknown functional kind {kind!r}")
    return EpsFamily(tuple(float(e) for e in eps_values), curves)


@dataclass(frozen=True)
class ConvergenceReport:
    """Ensemble summary of sup-distances along an eps ladder."""

    eps: tuple[float, ...]
    median: tuple[float, ...]
    p90: tuple[float, ...]
    exceed: tuple[float, ...]
    delta: float
    slope: float
    intercept: float
    fit_residual: float
    n_members: int
    converges: bool

    def median_at_finest(self) -> float:
        return self.median[-1]


def fit_loglog_slope(eps: Sequence[float], values: Sequence[float]):
    """Least-squares slope of log(values) against log(eps).

    Points with non-positive values are dropped; with fewer than two usable
    points the decay is treated as immediate (slope +inf, zero residual).
    """
    e = np.asarray(eps, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    mask = v > 0
    if mask.sum() < 2:
        return math.inf, -math.inf, 0.0
    x = np.log(e[mask])
    y = np.log(v[mask])
    A = np.vstack([x, np.ones_like(x)]).T
    coef, res, _, _ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(res[0]) if len(res) else 0.0
    return float(coef[0]), float(coef[1]), resid


def sup_distance(a: SamplePath, b) -> float:
    ref = b.values if isinstance(b, SamplePath) else b
    return float(np.max(np.abs(a.values - ref)))


def report_from_distances(
    ladder: Sequence[float],
    D: np.ndarray,
    delta: float | None,
    ref_scale: float = 1.0,
    fit_drop_last: bool = False,
) -> ConvergenceReport:
    """Summarize an (members x rungs) sup-distance matrix into a report."""
    med = np.median(D, axis=0)
    p90 = np.quantile(D, 0.9, axis=0)
    if delta is None:
        delta = 0.01 * ref_scale if ref_scale > 0 else 0.01
    exceed = (D > delta).mean(axis=0)
    fit_eps, fit_med = (ladder[:-1], med[:-1]) if fit_drop_last else (ladder, med)
    slope, intercept, resid = fit_loglog_slope(fit_eps, fit_med)
    return ConvergenceReport(
        eps=tuple(float(e) for e in ladder),
        median=tuple(float(x) for x in med),
        p90=tuple(float(x) for x in p90),
        exceed=tuple(float(x) for x in exceed),
        delta=float(delta),
        slope=slope,
        intercept=intercept,
        fit_residual=resid,
        n_members=D.shape[0],
        converges=bool(med[-1] < delta and slope > 0),
    )


def ucp_limit(
    families: Sequence[EpsFamily],
    reference=None,
    delta: float | None = None,
    min_members: int = MIN_UCP_MEMBERS,
) -> ConvergenceReport:
    """Monte-Carlo surrogate for uniform convergence in probability.

    ``reference`` is an analytic curve (one SamplePath, broadcast), a
    per-member sequence of curves, or None, in which case each member's
    finest-eps curve serves as its own reference (Cauchy diagnostic).
    Verdict: converges iff the median sup-distance at the finest eps is
    below delta and the fitted log-log slope is positive.
    """
    m = len(families)
    if m < min_members:
        raise ValueError(f"need at least {min_members} ensemble members, got {m}")
    ladder = families[0].eps
    if len(ladder) < 2:
        raise ValueError("need at least two eps values")
    for fam in families:
        if fam.eps != ladder:
            raise ValueError("all members must share one eps ladder")

    cauchy = reference is None
    if cauchy:
        refs = [fam.finest.values for fam in families]
    elif isinstance(reference, SamplePath):
        refs = [reference.values] * m
    else:
        refs = [r.values if isinstance(r, SamplePath) else np.asarray(r) for r in reference]
        if len(refs) != m:
            raise ValueError("need one reference per member")

    D = np.empty((m, len(ladder)))
    for i, fam in enumerate(families):
        for j, curve in enumerate(fam.curves):
            D[i, j] = np.max(np.abs(curve.values - refs[i]))

    ref_scale = float(np.median([np.max(np.abs(r)) for r in refs]))
    # in Cauchy mode the finest column is identically zero by construction
    return report_from_distances(ladder, D, delta, ref_scale, fit_drop_last=cauchy)
