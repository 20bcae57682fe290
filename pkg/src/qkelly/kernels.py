"""Hot numeric kernels: batch quantile evaluation over point clouds.

The grid oracle, the surface writer and the restricted-family scan all reduce
to the same inner loop: for many wealth profiles at once, form the count
monomials, sort them, accumulate mass, and read off the upper quantile atom.
That loop carries a numba @njit kernel with a pure-numpy fallback.  Selection:

  * QKELLY_PURE_NUMPY=1 forces the numpy path,
  * otherwise numba is used when importable (falling back silently if not).

Zero wealth coordinates enter as log-weight LOG_ZERO; since exponents are
small integers, exp() maps those monomials back to exactly 0.0, so boundary
faces need no special casing.

`python benchmarks/bench_kernels.py` compares both paths.
"""

from __future__ import annotations

import math
import os
from typing import Optional, Sequence, Tuple

import numpy as np

LOG_ZERO = -1.0e9
_ALPHA_GUARD = 1e-12

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - environment without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


def pure_numpy_forced() -> bool:
    return os.environ.get("QKELLY_PURE_NUMPY", "").strip().lower() in ("1", "true", "yes")


def using_numba() -> bool:
    return HAVE_NUMBA and not pure_numpy_forced()


def quantile_batch_numpy(logw: np.ndarray, K: np.ndarray, probs: np.ndarray, alpha: float) -> np.ndarray:
    """Vectorized upper quantiles: logw (P, m), K (L, m), probs (L,)."""
    vals = logw @ K.T  # (P, L) log monomials; LOG_ZERO rows push to -inf scale
    order = np.argsort(-vals, axis=1, kind="stable")
    svals = np.take_along_axis(vals, order, axis=1)
    cum = np.cumsum(probs[order], axis=1)
    idx = np.argmax(cum >= alpha - _ALPHA_GUARD, axis=1)
    chosen = svals[np.arange(vals.shape[0]), idx]
    return np.exp(chosen)


@njit(cache=True)
def _quantile_batch_numba(logw, K, probs, alpha):  # pragma: no cover - jitted
    P, m = logw.shape
    L = K.shape[0]
    out = np.empty(P)
    vals = np.empty(L)
    used = np.empty(L, dtype=np.bool_)
    for p in range(P):
        for l in range(L):
            s = 0.0
            for j in range(m):
                s += K[l, j] * logw[p, j]
            vals[l] = s
            used[l] = False
        # selection scan: pull atoms in decreasing value until the mass crosses
        # alpha; the crossing is usually within the top few atoms
        cum = 0.0
        chosen = 64.0 * LOG_ZERO
        for _ in range(L):
            best = -1
            bv = -1.0e308
            for l in range(L):
                if not used[l] and vals[l] > bv:
                    bv = vals[l]
                    best = l
            used[best] = True
            cum += probs[best]
            if cum >= alpha - 1e-12:
                chosen = bv
                break
        out[p] = math.exp(chosen)
    return out


def quantile_batch(
    logw: np.ndarray,
    K: np.ndarray,
    probs: np.ndarray,
    alpha: float,
    force: Optional[str] = None,
) -> np.ndarray:
    """Dispatch the batch quantile kernel.  force in {"numba", "numpy", None}."""
    logw = np.ascontiguousarray(logw, dtype=np.float64)
    K = np.ascontiguousarray(K, dtype=np.float64)
    probs = np.ascontiguousarray(probs, dtype=np.float64)
    if force == "numba" or (force is None and using_numba()):
        if not HAVE_NUMBA:
            raise RuntimeError("numba requested but not importable")
        return _quantile_batch_numba(logw, K, probs, float(alpha))
    return quantile_batch_numpy(logw, K, probs, float(alpha))


# ---------------------------------------------------------------------------
# simplex lattices
# ---------------------------------------------------------------------------

def simplex_lattice(q: Sequence, m: int, resolution: int) -> np.ndarray:
    """All budget-share compositions j/resolution mapped to wealth points
    W_i = j_i / (resolution * q_i); includes every boundary face."""
    if resolution < 1:
        raise ValueError(f"resolution must be >= 1, got {resolution}")
    qf = np.array([float(x) for x in q])
    comps = _compositions(m, resolution)
    return comps / (resolution * qf)


def _compositions(m: int, total: int) -> np.ndarray:
    if m == 1:
        return np.array([[total]], dtype=np.int64)
    blocks = []
    for first in range(total, -1, -1):
        rest = _compositions(m - 1, total - first)
        col = np.full((rest.shape[0], 1), first, dtype=np.int64)
        blocks.append(np.hstack([col, rest]))
    return np.vstack(blocks)


def instance_kernel_data(inst) -> Tuple[np.ndarray, np.ndarray]:
    """Count matrix and mass vector of an instance as float arrays."""
    from .model import enumerate_counts, multinomial_mass

    counts = enumerate_counts(inst.m, inst.n)
    K = np.array(counts, dtype=np.float64)
    probs = np.array([float(multinomial_mass(inst, k)) for k in counts])
    return K, probs


def log_wealth(points: np.ndarray) -> np.ndarray:
    logw = np.full_like(points, LOG_ZERO, dtype=np.float64)
    pos = points > 0
    logw[pos] = np.log(points[pos])
    return logw


def quantile_lattice_best(inst, resolution: int, family=None):
    """Best (value, point) of quantile_at over the simplex lattice, optionally
    filtered by a restricted family; None if nothing is feasible."""
    points = simplex_lattice(inst.q, inst.m, resolution)
    if family is not None:
        mask = np.ones(len(points), dtype=bool)
        for a, b in family.halfspaces:
            mask &= points @ np.asarray(a, dtype=np.float64) <= b + 1e-9
        points = points[mask]
        if len(points) == 0:
            return None
    K, probs = instance_kernel_data(inst)
    vals = quantile_batch(log_wealth(points), K, probs, float(inst.alpha))
    best = int(np.argmax(vals))
    return float(vals[best]), tuple(float(x) for x in points[best])
