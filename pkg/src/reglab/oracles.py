"""Classical discretization oracles and identity checkers.

Everything here is built from plain partition sums over grid nodes (left
point for Ito-style integrals), so the regularized functionals can be
validated against an independent route.  Refinement studies coarsen the
partition of one fixed grid rather than resampling paths, which keeps
discretization error separate from sampling error.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .paths import CANTOR_MAX_DEPTH, Grid, SamplePath, cantor_function
from .regularize import (
    ConvergenceReport,
    EpsFamily,
    cov_eps,
    forward_eps,
    report_from_distances,
    ucp_limit,
)

EXACT_CANTOR_MAX_DEPTH = 22  # 2**depth interval enumeration


@dataclass(frozen=True)
class Partition:
    """Ordered subset of grid nodes from 0 to T."""

    grid: Grid
    idx: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.idx, dtype=np.int64)
        if idx[0] != 0 or idx[-1] != self.grid.n or np.any(np.diff(idx) <= 0):
            raise ValueError("partition must run strictly from node 0 to node n")
        idx = idx.copy()
        idx.flags.writeable = False
        object.__setattr__(self, "idx", idx)

    @property
    def times(self) -> np.ndarray:
        return self.grid.times[self.idx]

    @property
    def mesh(self) -> float:
        return float(np.max(np.diff(self.times)))


def full_partition(g: Grid) -> Partition:
    return Partition(g, np.arange(g.n + 1))


def strided_partition(g: Grid, stride: int) -> Partition:
    if stride < 1 or g.n % stride != 0:
        raise ValueError(f"stride {stride} does not divide n = {g.n}")
    return Partition(g, np.arange(0, g.n + 1, stride))


def _left_values(H, pi: Partition) -> np.ndarray:
    """Integrand at the left endpoint of every partition interval."""
    t_left = pi.times[:-1]
    if isinstance(H, SamplePath):
        return np.asarray(H.at(t_left), dtype=np.float64)
    if callable(H):
        return np.asarray(H(t_left), dtype=np.float64)
    return np.full(len(t_left), float(H))


def _interval_of_node(pi: Partition) -> np.ndarray:
    """For every grid node, the partition interval it falls into."""
    g = pi.grid
    loc = np.searchsorted(pi.idx, np.arange(g.n + 1), side="right") - 1
    return np.minimum(loc, len(pi.idx) - 2)


def ito_sum(H, X: SamplePath, pi: Partition | None = None) -> SamplePath:
    """Left-point partition sum sum_i H(t_i) (X(t_{i+1} ^ t) - X(t_i ^ t))."""
    pi = pi if pi is not None else full_partition(X.grid)
    h = _left_values(H, pi)
    xp = X.values[pi.idx]
    prefix = np.concatenate([[0.0], np.cumsum(h * np.diff(xp))])
    loc = _interval_of_node(pi)
    curve = prefix[loc] + h[loc] * (X.values - xp[loc])
    return SamplePath(X.grid, curve)


def stieltjes_sum(Y, V: SamplePath, pi: Partition | None = None) -> SamplePath:
    """Left-point Riemann-Stieltjes sum against a bounded-variation path."""
    return ito_sum(Y, V, pi)


def qv_partition(X: SamplePath, pi: Partition | None = None) -> SamplePath:
    """Partition quadratic variation sum (X(t_{i+1} ^ t) - X(t_i ^ t))^2."""
    pi = pi if pi is not None else full_partition(X.grid)
    xp = X.values[pi.idx]
    prefix = np.concatenate([[0.0], np.cumsum(np.diff(xp) ** 2)])
    loc = _interval_of_node(pi)
    curve = prefix[loc] + (X.values - xp[loc]) ** 2
    return SamplePath(X.grid, curve)


def stratonovich_sum(
    H: SamplePath, X: SamplePath, pi: Partition | None = None, eps: float | None = None
) -> SamplePath:
    """Ito partition sum plus half the finest-eps bracket of (H, X)."""
    g = X.grid
    eps = eps if eps is not None else 4 * g.dt
    ito = ito_sum(H, X, pi)
    bracket = cov_eps(H, X, eps)
    return SamplePath(g, ito.values + 0.5 * bracket.values)


# ---------------------------------------------------------------------------
# Exact integration against the level-depth Cantor measure
# ---------------------------------------------------------------------------

@lru_cache(maxsize=2)
def _cantor_interval_starts(depth: int) -> np.ndarray:
    """Sorted left endpoints of the 2^depth level-`depth` intervals."""
    b = np.arange(2 ** depth, dtype=np.int64)
    a = np.zeros(len(b))
    for k in range(depth):  # bit k of b (MSB first) -> ternary digit 2
        bit = (b >> (depth - 1 - k)) & 1
        a += bit * (2.0 * 3.0 ** -(k + 1))
    return a


def cantor_measure_curve(Y, g: Grid, depth: int = 20) -> SamplePath:
    """Exact curve t -> int_[0,t] Y dpsi for the level-`depth` Cantor measure.

    Each of the 2^depth support intervals carries mass 2^-depth, evaluated
    at its left endpoint; the interval containing t contributes its exact
    partial mass psi(t) - psi(a).  Supports depth <= 22.
    """
    if not 1 <= depth <= EXACT_CANTOR_MAX_DEPTH:
        raise ValueError(f"exact evaluator supports depth <= {EXACT_CANTOR_MAX_DEPTH}")
    if g.times[-1] > 1.0 + 1e-12:
        raise ValueError("Cantor measure lives on [0, 1]")
    a = _cantor_interval_starts(int(depth))
    mass = 2.0 ** -depth
    y = np.asarray(Y(a), dtype=np.float64) if callable(Y) else np.full(len(a), float(Y))
    cum = np.concatenate([[0.0], np.cumsum(y * mass)])

    t = np.minimum(g.times, 1.0)
    k = np.searchsorted(a, t, side="right") - 1  # last interval start <= t
    k = np.maximum(k, 0)
    width = 3.0 ** -depth
    inside = (t >= a[k]) & (t < a[k] + width)
    curve = cum[np.where(inside, k, k + 1)]
    if np.any(inside):
        pa = cantor_function(a[k[inside]], depth)
        pt = cantor_function(t[inside], depth)
        curve = curve.astype(np.float64)
        curve[inside] += y[k[inside]] * (pt - pa)
    return SamplePath(g, curve)


# ---------------------------------------------------------------------------
# Identity checkers
# ---------------------------------------------------------------------------

def _zero_reference(g: Grid) -> SamplePath:
    return SamplePath(g, np.zeros(g.n + 1))


def _stieltjes_against_curve(w: np.ndarray, curve: SamplePath) -> np.ndarray:
    """Left-point integral of node weights w against a cumulative curve."""
    out = np.empty(len(curve.values))
    out[0] = 0.0
    np.cumsum(w * np.diff(curve.values), out=out[1:])
    return out


def ito_formula_residual_c2(
    f: Callable, f1: Callable, f2: Callable,
    paths: Sequence[SamplePath], eps_values: Sequence[float],
    delta: float | None = None,
) -> ConvergenceReport:
    """Residual of the second-order change-of-variable formula.

    R_eps(t) = f(X_t) - f(X_0) - int_0^t f'(X) d-X
               - 1/2 int_0^t f''(X) d(bracket_eps)
    summarized over the ensemble against the zero curve.
    """
    families = []
    for X in paths:
        g = X.grid
        fx = f(X.values)
        fpx = SamplePath(g, f1(X.values))
        curves = []
        for e in eps_values:
            fwd = forward_eps(fpx, X, e)
            br = cov_eps(X, X, e)
            second = _stieltjes_against_curve(f2(X.values[:-1]), br)
            curves.append(SamplePath(g, fx - fx[0] - fwd.values - 0.5 * second))
        families.append(EpsFamily(tuple(float(e) for e in eps_values), tuple(curves)))
    return ucp_limit(families, reference=_zero_reference(paths[0].grid), delta=delta)


def ito_formula_residual_c1(
    f: Callable, f1: Callable,
    paths: Sequence[SamplePath], eps_values: Sequence[float],
    delta: float | None = None,
) -> ConvergenceReport:
    """Residual of the first-order formula for reversible integrators.

    R_eps(t) = f(S_t) - f(S_0) - sum f'(S) dS - 1/2 bracket_eps(f'(S), S)(t),
    with the integral term a left-point partition sum on the full grid.
    """
    families = []
    for S in paths:
        g = S.grid
        fs = f(S.values)
        fps = SamplePath(g, f1(S.values))
        base = fs - fs[0] - ito_sum(fps, S).values
        curves = []
        for e in eps_values:
            br = cov_eps(fps, S, e)
            curves.append(SamplePath(g, base - 0.5 * br.values))
        families.append(EpsFamily(tuple(float(e) for e in eps_values), tuple(curves)))
    return ucp_limit(families, reference=_zero_reference(paths[0].grid), delta=delta)


def chain_rule_check(
    H, K, Ms: Sequence[SamplePath], strides: Sequence[int] = (64, 16, 4, 1),
    delta: float | None = None,
) -> ConvergenceReport:
    """Associativity of iterated integrals under partition refinement.

    N is accumulated on the full grid; on every coarsened partition the sup
    distance between sum K dN and sum (H K) dM is reported, indexed by the
    partition mesh (standing in the report's eps axis).  At stride 1 the
    two sums coincide identically, so the ladder refines to exact zero.
    """
    def eval_any(F, t):
        if isinstance(F, SamplePath):
            return np.asarray(F.at(t), dtype=np.float64)
        if callable(F):
            return np.asarray(F(t), dtype=np.float64)
        return np.full(len(t), float(F))

    g = Ms[0].grid
    D = np.empty((len(Ms), len(strides)))
    for i, M in enumerate(Ms):
        N = ito_sum(H, M)
        for j, s in enumerate(strides):
            pi = strided_partition(g, int(s))
            lhs = ito_sum(K, N, pi)
            rhs = ito_sum(lambda t: eval_any(H, t) * eval_any(K, t), M, pi)
            D[i, j] = np.max(np.abs(lhs.values - rhs.values))
    meshes = [s * g.dt for s in strides]
    return report_from_distances(meshes, D, delta)


def integration_by_parts_check(X: SamplePath, Y: SamplePath, eps: float) -> SamplePath:
    """Residual of X_t Y_t = X_0 Y_0 + int X d-Y + int Y d-X + [X, Y] at one eps."""
    g = X.grid
    prod = X.values * Y.values
    resid = (
        prod - prod[0]
        - forward_eps(X, Y, eps).values
        - forward_eps(Y, X, eps).values
        - cov_eps(X, Y, eps).values
    )
    return SamplePath(g, resid)


def c1_stability_check(
    f: Callable, f1: Callable, g_fn: Callable, g1: Callable,
    pairs: Sequence[tuple[SamplePath, SamplePath]],
    eps_values: Sequence[float],
    delta: float | None = None,
) -> ConvergenceReport:
    """Bracket stability under C1 maps.

    Compares bracket_eps(f(X1), g(X2)) with the left-point integral of
    f'(X1) g'(X2) against bracket_eps(X1, X2), per member and per eps.
    """
    families = []
    for X1, X2 in pairs:
        g = X1.grid
        fX = SamplePath(g, f(X1.values))
        gX = SamplePath(g, g_fn(X2.values))
        w = f1(X1.values[:-1]) * g1(X2.values[:-1])
        curves = []
        for e in eps_values:
            lhs = cov_eps(fX, gX, e)
            rhs = _stieltjes_against_curve(w, cov_eps(X1, X2, e))
            curves.append(SamplePath(g, lhs.values - rhs))
        families.append(EpsFamily(tuple(float(e) for e in eps_values), tuple(curves)))
    return ucp_limit(families, reference=_zero_reference(pairs[0][0].grid), delta=delta)
