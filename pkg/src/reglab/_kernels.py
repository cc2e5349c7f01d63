"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The jitted path is used whenever numba imports cleanly; set the environment
variable ``REGLAB_NO_NUMBA=1`` before import to force the numpy fallback
(useful for debugging and for the benchmark in ``benchmarks/``).
Both implementations are kept importable side by side so they can be
compared directly.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("REGLAB_NO_NUMBA", "").strip().lower()
_NUMBA_REQUESTED = _FLAG not in {"1", "true", "yes"}

if _NUMBA_REQUESTED:
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
        NUMBA_ENABLED = False
else:
    NUMBA_ENABLED = False


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


# ---------------------------------------------------------------------------
# Hoelder quotient scans
# ---------------------------------------------------------------------------

def _holder_best_over_lags(values, dt, alpha, lags):
    # on a uniform grid the denominator (lag*dt)^alpha is constant per lag,
    # so each lag costs one abs-diff pass plus a scalar pow
    n = len(values)
    best = 0.0
    bi = 0
    bj = 0
    for lag in lags:
        lag = int(lag)
        if lag < 1 or lag >= n:
            continue
        num = np.abs(values[lag:] - values[:-lag])
        k = int(np.argmax(num))
        q = num[k] / (lag * dt) ** alpha
        if q > best:
            best = float(q)
            bi = k
            bj = k + lag
    return best, bi, bj


def _holder_full_np(values, dt, alpha):
    """Exact max of |f(t_j)-f(t_i)| / ((j-i) dt)^alpha over all i<j pairs."""
    return _holder_best_over_lags(values, dt, alpha, range(1, len(values)))


def _holder_lags_np(values, dt, alpha, lags):
    """Same scan restricted to a given set of index lags."""
    return _holder_best_over_lags(values, dt, alpha, lags)


# ---------------------------------------------------------------------------
# Lower-triangular moving-kernel sum (Volterra path construction)
# ---------------------------------------------------------------------------

def _volterra_np(kernel_values, dw):
    """out[j] = sum_{i<j} kernel_values[j-i] * dw[i]; kernel_values[0] unused.

    np.convolve's C inner loop beats a jitted rewrite here, so this one has
    no numba counterpart.
    """
    n = len(dw)
    full = np.convolve(kernel_values[1:], dw)
    out = np.zeros(n + 1)
    out[1:] = full[: n]
    return out


# ---------------------------------------------------------------------------
# Ternary digit walks (Cantor function / Cantor set membership)
# ---------------------------------------------------------------------------

def _cantor_from_lattice_np(u, depth):
    """Cantor-Lebesgue values of lattice points u / 3**depth, u int64 array."""
    u = u.astype(np.int64)
    out = np.zeros(u.shape, dtype=np.float64)
    alive = np.ones(u.shape, dtype=bool)  # no digit 1 seen yet
    top = np.int64(3) ** depth
    done = u >= top  # input 1.0 maps to value 1.0
    out[done] = 1.0
    alive &= ~done
    p = 1.0
    rem = u.copy()
    scale = top
    for _ in range(depth):
        scale //= 3
        d = rem // scale
        rem = rem - d * scale
        p *= 0.5
        hit1 = alive & (d == 1)
        out[hit1] += p
        alive &= ~hit1
        out[alive & (d == 2)] += p
    return out


def _snap_tol(depth):
    # covers the float representation error of exact ternary rationals after
    # scaling by 3**depth; clamped below half a lattice cell
    return min(0.25, 3.0 ** depth * 2.0 ** -51)


def _avoid1_np(w, depth):
    """True where 0 <= w < 3**depth has no ternary digit equal to 1."""
    ok = np.ones(w.shape, dtype=bool)
    rem = np.clip(w, 0, None)
    scale = np.int64(3) ** depth
    inrange = (w >= 0) & (w < scale)
    for _ in range(depth):
        scale //= 3
        d = rem // scale
        rem = rem - d * scale
        ok &= d != 1
    return ok & inrange


def _cantor_member_np(x, depth):
    """Membership of t = x / 3**depth in the closed level-`depth` set.

    x is the float-scaled coordinate t * 3**depth.  Points within snap
    tolerance of a lattice endpoint count as that endpoint (so ternary
    rationals entered as floats test exactly, including right endpoints of
    removed intervals); interior points test their enclosing cell.
    """
    near = np.rint(x).astype(np.int64)
    snapped = np.abs(x - near) <= _snap_tol(depth)
    cell = np.floor(x).astype(np.int64)
    endpoint_hit = _avoid1_np(near, depth) | _avoid1_np(near - 1, depth)
    interior_hit = _avoid1_np(cell, depth)
    return np.where(snapped, endpoint_hit, interior_hit).astype(np.int64)


if NUMBA_ENABLED:

    @njit(cache=False)
    def _holder_scan_nb(values, dt, alpha, lags):  # pragma: no cover - jitted
        n = len(values)
        best = 0.0
        bi = 0
        bj = 0
        for k in range(len(lags)):
            lag = lags[k]
            if lag < 1 or lag >= n:
                continue
            m = 0.0
            mi = 0
            for i in range(n - lag):
                d = abs(values[i + lag] - values[i])
                if d > m:
                    m = d
                    mi = i
            q = m / (lag * dt) ** alpha
            if q > best:
                best = q
                bi = mi
                bj = mi + lag
        return best, bi, bj

    @njit(cache=False)
    def _holder_full_nb(values, dt, alpha):  # pragma: no cover - jitted
        return _holder_scan_nb(values, dt, alpha, np.arange(1, len(values)))

    @njit(cache=False)
    def _holder_lags_nb(values, dt, alpha, lags):  # pragma: no cover
        return _holder_scan_nb(values, dt, alpha, lags)

    @njit(cache=False)
    def _cantor_from_lattice_nb(u, depth):  # pragma: no cover
        top = np.int64(3) ** depth
        out = np.zeros(u.shape, dtype=np.float64)
        for k in range(u.size):
            w = u.flat[k]
            if w >= top:
                out.flat[k] = 1.0
                continue
            val = 0.0
            p = 1.0
            scale = top
            rem = w
            for _ in range(depth):
                scale //= 3
                d = rem // scale
                rem -= d * scale
                p *= 0.5
                if d == 1:
                    val += p
                    break
                if d == 2:
                    val += p
            out.flat[k] = val
        return out

    @njit(cache=False)
    def _avoid1_scalar_nb(w, depth):  # pragma: no cover
        top = np.int64(3) ** depth
        if w < 0 or w >= top:
            return False
        scale = top
        rem = w
        for _ in range(depth):
            scale //= 3
            d = rem // scale
            rem -= d * scale
            if d == 1:
                return False
        return True

    @njit(cache=False)
    def _cantor_member_nb(x, depth):  # pragma: no cover
        tol = min(0.25, 3.0 ** depth * 2.0 ** -51)
        out = np.zeros(x.shape, dtype=np.int64)
        for k in range(x.size):
            v = x.flat[k]
            near = np.int64(round(v))
            if abs(v - near) <= tol:
                hit = _avoid1_scalar_nb(near, depth) or _avoid1_scalar_nb(near - 1, depth)
            else:
                hit = _avoid1_scalar_nb(np.int64(np.floor(v)), depth)
            if hit:
                out.flat[k] = 1
        return out

    holder_full = _holder_full_nb
    holder_lags = _holder_lags_nb
    cantor_from_lattice = _cantor_from_lattice_nb
    cantor_member = _cantor_member_nb
else:
    holder_full = _holder_full_np
    holder_lags = _holder_lags_np
    cantor_from_lattice = _cantor_from_lattice_np
    cantor_member = _cantor_member_np

volterra_sum = _volterra_np
