"""Independent oracles: dense grid search, Monte Carlo quantiles, and the
asymptotic sweep toward the ordinary Kelly point."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .kernels import instance_kernel_data, log_wealth, quantile_batch, simplex_lattice
from .model import InstanceError, ProblemInstance
from .shadow import kelly_point
from .solver import GlobalSolution, RestrictedFamily, solve

GRID_MAX_M = 4
SWEEP_MAX_N = {2: 40, 3: 12}


@dataclass(frozen=True)
class GridReport:
    resolution: int
    best_value: float
    best_point: Tuple[float, ...]
    evaluations: int


@dataclass(frozen=True)
class SweepRow:
    n: int
    scaled_log_value: float
    argmax: Tuple[float, ...]
    kelly_distance: float


def grid_oracle(
    inst: ProblemInstance,
    resolution: int,
    family: Optional[RestrictedFamily] = None,
) -> GridReport:
    """Brute-force maximum of quantile_at over the simplex lattice.

    The composition lattice j/resolution includes every boundary face, so
    support-face optima like tie walls are hit exactly at even resolutions.
    """
    if inst.m > GRID_MAX_M:
        raise InstanceError(f"grid oracle supports m <= {GRID_MAX_M}, got m = {inst.m}")
    if resolution < 10:
        raise InstanceError(f"grid resolution must be >= 10, got {resolution}")
    points = simplex_lattice(inst.q, inst.m, resolution)
    if family is not None:
        mask = np.ones(len(points), dtype=bool)
        for a, b in family.halfspaces:
            mask &= points @ np.asarray(a, dtype=np.float64) <= b + 1e-9
        points = points[mask]
        if len(points) == 0:
            raise InstanceError("restricted family excludes the whole lattice")
    K, probs = instance_kernel_data(inst)
    vals = quantile_batch(log_wealth(points), K, probs, float(inst.alpha))
    best = int(np.argmax(vals))
    return GridReport(
        resolution=resolution,
        best_value=float(vals[best]),
        best_point=tuple(float(x) for x in points[best]),
        evaluations=len(points),
    )


def mc_quantile(inst: ProblemInstance, W: Sequence, samples: int, seed: int) -> float:
    """Empirical upper alpha-quantile of terminal wealth by direct simulation.

    Counts come from a counter-based Philox generator keyed by the seed, so
    runs are reproducible.  The estimator snaps to an atom of the terminal
    distribution: the largest observed value v with P_hat(X >= v) >= alpha.
    It matches the exact quantile atom with failure probability below 1e-6
    once samples >= 10^6 and the cumulative mass at the atom clears alpha by
    at least 0.01; borderline instances (cumulative mass within that margin)
    can legitimately snap to a neighboring atom.
    """
    if samples < 1000:
        raise InstanceError(f"need at least 1000 samples, got {samples}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    p = np.array([float(x) for x in inst.p])
    p = p / p.sum()  # exact-rational inputs may not sum to float 1.0
    counts = rng.multinomial(inst.n, p, size=samples)
    logw = log_wealth(np.array([[float(x) for x in W]]))[0]
    x = np.exp(counts @ logw)
    x.sort()
    rank = math.ceil(float(inst.alpha) * samples)  # rank-th largest observation
    return float(x[samples - rank])


def asymptotic_sweep(
    p: Sequence,
    q: Sequence,
    alpha,
    horizons: Sequence[int],
) -> List[SweepRow]:
    """Exact solve per horizon; scaled log values should drift toward the
    Kelly growth rate and argmaxes toward p/q.  No rate is asserted."""
    from .model import validate_instance

    m = len(p)
    if m not in SWEEP_MAX_N:
        raise InstanceError(f"sweep supports m in {sorted(SWEEP_MAX_N)}, got m = {m}")
    horizons = list(horizons)
    if any(b <= a for a, b in zip(horizons, horizons[1:])):
        raise InstanceError("horizons must be strictly ascending")
    cap = SWEEP_MAX_N[m]
    if horizons and horizons[-1] > cap:
        raise InstanceError(f"sweep horizon cap for m={m} is {cap}, got {horizons[-1]}")

    wk = tuple(float(x) for x in kelly_point(p, q))
    rows = []
    for n in horizons:
        inst = validate_instance(m, p, q, n, alpha)
        sol = solve(inst)
        value = float(sol.value)
        if value <= 0:
            scaled = -math.inf
        else:
            scaled = math.log(value) / n
        arg = tuple(float(x) for x in sol.argmax)
        dist = max(abs(a - b) for a, b in zip(arg, wk))
        rows.append(SweepRow(n=n, scaled_log_value=scaled, argmax=arg, kelly_distance=dist))
    return rows


def sweep_rows_csv(rows: Sequence[SweepRow]) -> str:
    m = len(rows[0].argmax) if rows else 0
    header = ["n", "scaled_log_value", "kelly_distance"] + [f"W{i+1}" for i in range(m)]
    lines = [",".join(header)]
    for r in rows:
        cells = [str(r.n), f"{r.scaled_log_value:.12g}", f"{r.kelly_distance:.12g}"]
        cells += [f"{x:.12g}" for x in r.argmax]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VerifyReport:
    exact_value: float
    grid_value: float
    mc_value: float
    grid_rel_err: float
    mc_rel_err: float
    grid_pass: bool
    mc_pass: bool

    @property
    def passed(self) -> bool:
        return self.grid_pass and self.mc_pass


def cross_verify(
    inst: ProblemInstance,
    resolution: int = 400,
    samples: int = 1_000_000,
    seed: int = 20260808,
    grid_rtol: float = 2e-3,
    mc_rtol: float = 1e-9,
) -> Tuple[VerifyReport, GlobalSolution]:
    """Exact solve vs grid oracle vs Monte Carlo at the argmax."""
    sol = solve(inst)
    exact = float(sol.value)
    grid = grid_oracle(inst, resolution)
    mc = mc_quantile(inst, sol.argmax, samples, seed)
    scale = max(abs(exact), 1e-300)
    grid_err = abs(grid.best_value - exact) / scale
    mc_err = abs(mc - exact) / scale
    report = VerifyReport(
        exact_value=exact,
        grid_value=grid.best_value,
        mc_value=mc,
        grid_rel_err=grid_err,
        mc_rel_err=mc_err,
        grid_pass=grid_err <= grid_rtol,
        mc_pass=mc_err <= mc_rtol,
    )
    return report, sol
