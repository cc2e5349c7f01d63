"""Process path generation on uniform time grids.

Every path lives on a uniform grid over [0, T] and is prolongated to the
whole real line by constant extension: value at t <= 0 is the value at 0,
value at t >= T is the value at T.  Off-grid points inside (0, T) are
linearly interpolated.  All random generators are driven by counter-style
seed streams (master seed, generator id, path index) so ensembles are
reproducible bit for bit and extensible without resampling earlier paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import _kernels

# Stream ids keeping the random draws of distinct generators independent.
GEN_BM = 1
GEN_FBM = 2
GEN_SDE = 3
GEN_VOLTERRA_W = 4
GEN_VOLTERRA_B = 5
GEN_JITTER = 6
GEN_AUX = 7

FBM_MAX_STEPS = 4096
CANTOR_MAX_DEPTH = 32  # 3**depth must stay exactly representable in float64


def stream_rng(master_seed: int, gen_id: int, index: int = 0) -> np.random.Generator:
    """Independent generator for one (seed, generator, path) triple."""
    return np.random.default_rng(np.random.SeedSequence((master_seed, gen_id, index)))


@dataclass(frozen=True)
class Grid:
    """Uniform mesh 0 = t_0 < t_1 < ... < t_n = T with step T/n."""

    T: float
    n: int
    times: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not np.isfinite(self.T) or self.T <= 0:
            raise ValueError(f"horizon must be a positive real, got {self.T}")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"need at least 2 steps, got {self.n}")
        t = np.linspace(0.0, self.T, self.n + 1)
        t.flags.writeable = False
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "times", t)

    @property
    def dt(self) -> float:
        return self.T / self.n


def make_grid(T: float, n: int) -> Grid:
    return Grid(float(T), int(n))


@dataclass(frozen=True)
class SamplePath:
    """One realization sampled at the nodes of a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.grid.n + 1,):
            raise ValueError(
                f"expected {self.grid.n + 1} node values, got shape {v.shape}"
            )
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def at(self, t) -> np.ndarray | float:
        """Evaluate with constant extension outside [0, T], interpolation inside."""
        return np.interp(t, self.grid.times, self.values)

    def __call__(self, t):
        return self.at(t)


def eval_extended(p: SamplePath, t) -> np.ndarray | float:
    """Path value at arbitrary real t (constant beyond the horizon)."""
    return p.at(t)


def path_from_function(g: Grid, f: Callable[[np.ndarray], np.ndarray]) -> SamplePath:
    return SamplePath(g, np.asarray(f(g.times), dtype=np.float64))


def constant_path(g: Grid, c: float) -> SamplePath:
    return SamplePath(g, np.full(g.n + 1, float(c)))


@dataclass(frozen=True)
class Ensemble:
    """Jointly seeded collection of paths (or tuples of paths)."""

    master_seed: int
    generator: str
    grid: Grid
    paths: tuple

    @property
    def count(self) -> int:
        return len(self.paths)


# ---------------------------------------------------------------------------
# Gaussian generators
# ---------------------------------------------------------------------------

def sample_bm(g: Grid, master_seed: int, index: int = 0) -> SamplePath:
    """Standard Brownian motion: independent N(0, dt) increments from 0."""
    return SamplePath(g, _bm_values(g, master_seed, GEN_BM, index))


@lru_cache(maxsize=2)
def _fbm_increment_cholesky(T: float, n: int, H: float) -> np.ndarray:
    # Covariance of the stationary increment sequence is Toeplitz and much
    # better conditioned than the path covariance itself; the implied path
    # covariance is exactly (t^2H + s^2H - |t-s|^2H) / 2 either way.
    dt = T / n
    j = np.arange(n, dtype=np.float64)
    c = 0.5 * dt ** (2 * H) * (
        np.abs(j + 1) ** (2 * H) + np.abs(j - 1) ** (2 * H) - 2 * j ** (2 * H)
    )
    idx = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    return np.linalg.cholesky(c[idx])


def sample_fbm(g: Grid, H: float, master_seed: int, index: int = 0) -> SamplePath:
    """Fractional Brownian motion with Hurst index H, exact covariance.

    Uses a dense Cholesky factor of the increment covariance (cached per
    grid and H), so the cost is O(n^3) once and O(n^2) per path; guarded to
    n <= 4096.
    """
    if not 0.0 < H < 1.0:
        raise ValueError(f"Hurst index must lie in (0, 1), got {H}")
    if g.n > FBM_MAX_STEPS:
        raise ValueError(f"dense factorization guarded to n <= {FBM_MAX_STEPS}")
    L = _fbm_increment_cholesky(g.T, g.n, float(H))
    rng = stream_rng(master_seed, GEN_FBM, index)
    inc = L @ rng.standard_normal(g.n)
    v = np.empty(g.n + 1)
    v[0] = 0.0
    np.cumsum(inc, out=v[1:])
    return SamplePath(g, v)


def sample_sde_euler(
    g: Grid,
    sigma: Callable[[float, float], float],
    b: Callable[[float, float], float],
    x0: float,
    master_seed: int,
    index: int = 0,
) -> SamplePath:
    """Euler-Maruyama path of dX = sigma(t, X) dW + b(t, X) dt."""
    rng = stream_rng(master_seed, GEN_SDE, index)
    dw = rng.standard_normal(g.n) * np.sqrt(g.dt)
    t = g.times
    v = np.empty(g.n + 1)
    v[0] = float(x0)
    for i in range(g.n):
        s = sigma(t[i], v[i])
        d = b(t[i], v[i])
        if not (np.isfinite(s) and np.isfinite(d)):
            raise FloatingPointError(
                f"non-finite coefficient at t={t[i]}: sigma={s}, drift={d}"
            )
        v[i + 1] = v[i] + s * dw[i] + d * g.dt
    return SamplePath(g, v)


def sample_volterra(
    g: Grid, master_seed: int, index: int = 0
) -> tuple[SamplePath, SamplePath, SamplePath]:
    """Moving-average path X(t_j) = sum_{i<j} B(t_j - t_i) (W_{i+1} - W_i).

    B and W are independent Brownian paths; the left-point sum in dW keeps
    the construction adapted.  Returns (X, B, W).
    """
    B = SamplePath(g, _bm_values(g, master_seed, GEN_VOLTERRA_B, index))
    W = SamplePath(g, _bm_values(g, master_seed, GEN_VOLTERRA_W, index))
    dw = np.diff(W.values)
    x = _kernels.volterra_sum(np.ascontiguousarray(B.values), np.ascontiguousarray(dw))
    return SamplePath(g, x), B, W


def _bm_values(g: Grid, master_seed: int, gen_id: int, index: int) -> np.ndarray:
    rng = stream_rng(master_seed, gen_id, index)
    inc = rng.standard_normal(g.n) * np.sqrt(g.dt)
    v = np.empty(g.n + 1)
    v[0] = 0.0
    np.cumsum(inc, out=v[1:])
    return v


# ---------------------------------------------------------------------------
# Cantor function and Cantor set membership
# ---------------------------------------------------------------------------

def _check_cantor_args(t, depth):
    if int(depth) != depth or not 1 <= depth <= CANTOR_MAX_DEPTH:
        raise ValueError(f"depth must be an integer in [1, {CANTOR_MAX_DEPTH}]")
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < 0.0) or np.any(t > 1.0):
        raise ValueError("argument outside [0, 1]")
    return t


def _to_lattice(t: np.ndarray, depth: int) -> np.ndarray:
    # snap to the nearest point of the 3^-depth lattice; exact for every
    # ternary rational with at most `depth` digits entered as a float
    return np.rint(t * float(3 ** depth)).astype(np.int64)


def cantor_function(t, depth: int = 20):
    """Cantor-Lebesgue function evaluated at ternary resolution `depth`.

    Nondecreasing, maps [0,1] onto [0,1], flat outside the level-`depth`
    Cantor set approximation.
    """
    arr = _check_cantor_args(t, depth)
    u = _to_lattice(np.atleast_1d(arr), int(depth))
    out = _kernels.cantor_from_lattice(u, int(depth))
    return float(out[0]) if np.isscalar(t) or arr.ndim == 0 else out


def cantor_support_indicator(t, depth: int = 20):
    """1 on the closed level-`depth` Cantor set at lattice resolution, else 0.

    Endpoints of removed intervals count as members (closed level sets);
    ternary rationals entered as floats are snapped to their exact lattice
    point before the digit test.
    """
    arr = _check_cantor_args(t, depth)
    x = np.atleast_1d(arr) * float(3 ** int(depth))
    out = _kernels.cantor_member(x, int(depth))
    return int(out[0]) if np.isscalar(t) or arr.ndim == 0 else out


def cantor_clock(g: Grid, depth: int = 20) -> SamplePath:
    """The Cantor function sampled on a grid over [0, 1]."""
    if abs(g.T - 1.0) > 1e-12:
        raise ValueError("Cantor clock is defined on horizon T = 1")
    return SamplePath(g, cantor_function(g.times, depth))


# ---------------------------------------------------------------------------
# Time change
# ---------------------------------------------------------------------------

def time_change(w: SamplePath, psi) -> SamplePath:
    """Path t -> w(psi(t)) on w's grid; psi nondecreasing into w's clock."""
    g = w.grid
    if callable(psi):
        clock = np.asarray(psi(g.times), dtype=np.float64)
    else:
        clock = np.asarray(psi, dtype=np.float64)
        if clock.shape != g.times.shape:
            raise ValueError("clock sample count must match the grid")
    if np.any(np.diff(clock) < 0):
        raise ValueError("time change must be nondecreasing")
    return SamplePath(g, w.at(clock))


# ---------------------------------------------------------------------------
# Ensembles
# ---------------------------------------------------------------------------

_GENERATORS = {
    "bm": lambda g, seed, i, kw: sample_bm(g, seed, i),
    "fbm": lambda g, seed, i, kw: sample_fbm(g, kw["H"], seed, i),
    "sde": lambda g, seed, i, kw: sample_sde_euler(
        g, kw["sigma"], kw["b"], kw.get("x0", 0.0), seed, i
    ),
    "volterra": lambda g, seed, i, kw: sample_volterra(g, seed, i),
}


def make_ensemble(g: Grid, count: int, master_seed: int, generator: str, **kw) -> Ensemble:
    """Sample `count` independent realizations of one generator.

    Path k only consumes stream (master_seed, generator, k), so growing
    `count` later reproduces the earlier paths unchanged.
    """
    if generator not in _GENERATORS:
        raise ValueError(f"unknown generator {generator!r}")
    if count < 1:
        raise ValueError("ensemble needs at least one path")
    fn = _GENERATORS[generator]
    paths = tuple(fn(g, master_seed, i, kw) for i in range(count))
    return Ensemble(master_seed, generator, g, paths)


def jitter_offsets(g: Grid, master_seed: int, index: int = 0) -> np.ndarray:
    """Uniform(0,1) offsets, one per grid cell, for jittered quadrature."""
    rng = stream_rng(master_seed, GEN_JITTER, index)
    return rng.random(g.n)
