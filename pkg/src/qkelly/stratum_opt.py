"""Maximizing the stratum objective over a closed arrangement face.

The objective in ratio coordinates is

    psi(z) = sum_{i in S\\{r}} k_i z_i - n log(q_r + sum q_i e^{z_i}),

the log of the active monomial on the support face.  It is strictly concave
(log-sum-exp), so each same-support face problem has at most one maximizer.
The solver runs equality-constrained damped Newton on the affine hull of the
face and classifies the result against the strict face inequalities: an
interior stationary point is the unique face maximizer, anything else is an
escape to the boundary (covered by lower-rank strata) or an unbounded ascent
towards a support collapse.

A shadow fast path returns the closed-form monomial maximizer whenever it is
strictly feasible for the face, with exact rational feasibility tests when
the point is rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ._numbers import is_exact, log_of
from .geometry import from_ratio, monomial_value, pair_sign_at, ratio_coords
from .shadow import shadow_point, shadow_value

KKT_TOL = 1e-10
TIGHT_TOL = 1e-8
ESCAPE_NORM = 500.0
# a vanishing gradient beyond this radius is an asymptotic escape, not a
# stationary point: along directions with k_i = 0 the gradient decays like
# e^{-|z|} and the objective climbs toward a support-collapse limit
DRIFT_BOUND = 20.0
MAX_ITER = 10_000
ARMIJO_C = 1e-4
ARMIJO_FACTOR = 0.5


class SolveError(RuntimeError):
    """Numerical failure inside a stratum solve (iteration cap exceeded)."""

    def __init__(self, msg, best_z=None, best_value=None):
        super().__init__(msg)
        self.best_z = best_z
        self.best_value = best_value


@dataclass(frozen=True)
class StratumObjective:
    k: Tuple[int, ...]
    support: Tuple[int, ...]
    q: Tuple
    n: int

    @property
    def coords(self) -> Tuple[int, ...]:
        return ratio_coords(self.support)

    @property
    def anchor(self) -> int:
        return self.support[0]

    @property
    def k_proj(self) -> Tuple[int, ...]:
        return tuple(self.k[i] for i in self.coords)


@dataclass(frozen=True)
class FacePolyhedron:
    """Closure of a face: equalities d.z = 0, inequalities sign*(d.z) >= 0,
    plus optional wealth-halfspace extras c0 + sum c_i e^{z_i} <= 0."""

    eqs: Tuple[Tuple[int, ...], ...]
    ineqs: Tuple[Tuple[Tuple[int, ...], int], ...]
    extras: Tuple[Tuple[float, Tuple[float, ...]], ...] = ()


@dataclass(frozen=True)
class SolveOutcome:
    status: str  # interior | boundary | unbounded | infeasible
    z: Optional[Tuple[float, ...]]
    value: object  # exp(psi) at the maximizer; exact when the fast path fired
    tight: Tuple[int, ...] = ()  # inequality indices tight or violated at z
    direction: Optional[Tuple[float, ...]] = None  # unbounded ascent direction
    iterations: int = 0
    kkt_residual: float = float("nan")
    exact: bool = False


# ---------------------------------------------------------------------------
# objective, gradient, Hessian
# ---------------------------------------------------------------------------

def _lse_terms(obj: StratumObjective, z: Sequence[float]):
    terms = [log_of(obj.q[obj.anchor])]
    for qi, zi in zip((obj.q[i] for i in obj.coords), z):
        terms.append(log_of(qi) + float(zi))
    m = max(terms)
    total = sum(math.exp(t - m) for t in terms)
    lse = m + math.log(total)
    return terms, lse


def psi(obj: StratumObjective, z: Sequence[float]) -> float:
    """log W(z)^k on the support face."""
    _, lse = _lse_terms(obj, z)
    return float(sum(ki * float(zi) for ki, zi in zip(obj.k_proj, z)) - obj.n * lse)


def psi_gradient(obj: StratumObjective, z: Sequence[float]) -> np.ndarray:
    terms, lse = _lse_terms(obj, z)
    w = np.array([math.exp(t - lse) for t in terms[1:]])
    return np.array(obj.k_proj, dtype=float) - obj.n * w


def psi_hessian(obj: StratumObjective, z: Sequence[float]) -> np.ndarray:
    terms, lse = _lse_terms(obj, z)
    w = np.array([math.exp(t - lse) for t in terms[1:]])
    return -obj.n * (np.diag(w) - np.outer(w, w))


def extras_value(extra: Tuple[float, Tuple[float, ...]], z: Sequence[float]) -> float:
    c0, cv = extra
    return c0 + sum(c * math.exp(min(700.0, float(zi))) for c, zi in zip(cv, z))


# ---------------------------------------------------------------------------
# main solve
# ---------------------------------------------------------------------------

def maximize_on_face(
    obj: StratumObjective,
    poly: FacePolyhedron,
    start: Sequence[float],
) -> SolveOutcome:
    """Maximize psi over the closed face, classifying the outcome.

    Fast path: when supp(k) = S and the shadow point satisfies every face
    constraint strictly, it is returned with its closed-form value (exact for
    rational prices).  Otherwise: damped Newton restricted to the equality
    nullspace, then sign classification with margin 1e-8.
    """
    d = len(obj.coords)
    if d == 0:
        return _point_outcome(obj, poly, ())
    if poly.eqs and _nullspace_basis(poly.eqs, d).shape[1] == 0:
        # equalities pin the face to the origin of the chart
        return _point_outcome(obj, poly, tuple(0.0 for _ in range(d)))

    if not poly.extras:
        fast = _shadow_fast_path(obj, poly)
        if fast is not None:
            return fast
        return _newton_path(obj, poly, start)

    if d == 1:
        return _interval_path(obj, poly)

    base = _shadow_fast_path(obj, poly)
    if base is not None and _extras_ok(poly, base.z):
        return base
    out = _newton_path(obj, poly, start)
    if out.status == "interior" and _extras_ok(poly, out.z):
        return out
    return _polish_with_extras(obj, poly, start, seeds=[out.z] if out.z else [])


def _point_outcome(obj, poly, z) -> SolveOutcome:
    if poly.extras and not _extras_ok(poly, z):
        return SolveOutcome(status="infeasible", z=tuple(z), value=0.0)
    W = from_ratio(obj.support, z, obj.q, len(obj.k))
    val = monomial_value(W, obj.k)
    return SolveOutcome(
        status="interior", z=tuple(z), value=val, kkt_residual=0.0, exact=is_exact(val)
    )


def _extras_ok(poly: FacePolyhedron, z, tol: float = 1e-9) -> bool:
    return z is not None and all(extras_value(e, z) <= tol for e in poly.extras)


def _shadow_fast_path(obj: StratumObjective, poly: FacePolyhedron) -> Optional[SolveOutcome]:
    if any(obj.k[i] == 0 for i in obj.support):
        return None
    W = shadow_point(obj.k, obj.n, obj.q)
    for e in poly.eqs:
        if pair_sign_at(W, obj.support, e) != 0:
            return None
    for dvec, s in poly.ineqs:
        if pair_sign_at(W, obj.support, dvec) != s:
            return None
    val = shadow_value(obj.k, obj.n, obj.q)
    zf = tuple(
        float(log_of(W[i]) - log_of(W[obj.anchor])) for i in obj.coords
    )
    return SolveOutcome(
        status="interior", z=zf, value=val, kkt_residual=0.0, exact=is_exact(val)
    )


def _nullspace_basis(eqs, d) -> np.ndarray:
    if not eqs:
        return np.eye(d)
    A = np.array(eqs, dtype=float).reshape(len(eqs), d)
    _, s, vt = np.linalg.svd(A)
    rank = int(np.sum(s > 1e-12 * max(1.0, s[0] if len(s) else 1.0)))
    return vt[rank:].T  # (d, d-rank), orthonormal columns


def _newton_path(obj: StratumObjective, poly: FacePolyhedron, start, on_step=None) -> SolveOutcome:
    d = len(obj.coords)
    B = _nullspace_basis(poly.eqs, d)
    if B.shape[1] == 0:
        return _point_outcome(obj, poly, tuple(0.0 for _ in range(d)))
    z0 = np.array([float(x) for x in start], dtype=float)
    y = B.T @ z0

    def finish(z, it, res, val):
        nz = float(np.max(np.abs(z))) if len(z) else 0.0
        if nz > DRIFT_BOUND:
            # a vanishing gradient out here is an asymptotic support collapse
            return SolveOutcome(
                status="unbounded",
                z=tuple(z),
                value=math.exp(val),
                direction=tuple(zi / nz for zi in z),
                iterations=it,
                kkt_residual=res,
            )
        return _classify(obj, poly, tuple(z), it, res)

    pure_steps = 0
    for it in range(1, MAX_ITER + 1):
        z = B @ y
        val = psi(obj, z)
        if on_step is not None:
            on_step(tuple(z), val)
        g = B.T @ psi_gradient(obj, z)
        res = float(np.max(np.abs(g))) if g.size else 0.0
        nz = float(np.max(np.abs(z))) if len(z) else 0.0
        if res < KKT_TOL * max(1.0, obj.n):
            return finish(z, it, res, val)
        if nz > ESCAPE_NORM:
            return SolveOutcome(
                status="unbounded",
                z=tuple(z),
                value=math.exp(val),
                direction=tuple(zi / nz for zi in z),
                iterations=it,
                kkt_residual=res,
            )
        H = B.T @ psi_hessian(obj, z) @ B
        try:
            step = np.linalg.solve(-H, g)
        except np.linalg.LinAlgError:
            step = g / max(1.0, res)
        gdot = float(g @ step)
        if gdot <= 1e-9 * (1.0 + abs(val)):
            # endgame: the predicted ascent is too small for a reliable line
            # search, but pure Newton steps still contract quadratically
            y = y + step
            pure_steps += 1
            if pure_steps >= 8:
                z = B @ y
                return finish(z, it, float(np.max(np.abs(B.T @ psi_gradient(obj, z)))), psi(obj, z))
            continue
        pure_steps = 0
        t = 1.0
        accepted = False
        while t > 1e-14:
            cand = psi(obj, B @ (y + t * step))
            if cand >= val + ARMIJO_C * t * gdot:
                accepted = True
                break
            t *= ARMIJO_FACTOR
        if not accepted:
            return finish(z, it, res, val)
        y = y + t * step
    z = B @ y
    raise SolveError(
        f"stratum Newton exceeded {MAX_ITER} iterations",
        best_z=tuple(z),
        best_value=psi(obj, z),
    )


def _classify(obj, poly, z, iterations, res) -> SolveOutcome:
    tight = []
    interior = True
    for idx, (dvec, s) in enumerate(poly.ineqs):
        v = sum(dk * zk for dk, zk in zip(dvec, z))
        if s * v <= TIGHT_TOL:
            tight.append(idx)
            interior = False
    val = math.exp(psi(obj, z))
    if interior:
        return SolveOutcome(
            status="interior", z=z, value=val, iterations=iterations, kkt_residual=res
        )
    return SolveOutcome(
        status="boundary",
        z=z,
        value=val,
        tight=tuple(tight),
        iterations=iterations,
        kkt_residual=res,
    )


# ---------------------------------------------------------------------------
# one-dimensional faces with extras: exact interval arithmetic
# ---------------------------------------------------------------------------

def _interval_path(obj: StratumObjective, poly: FacePolyhedron) -> SolveOutcome:
    """|S| = 2 with extras: the feasible set is an interval in z, solved in
    closed form."""
    lo, hi = -math.inf, math.inf
    for dvec, s in poly.ineqs:
        if dvec[0] * s > 0:
            lo = max(lo, 0.0)
        else:
            hi = min(hi, 0.0)
    for c0, cv in poly.extras:
        c1 = cv[0]
        if abs(c1) < 1e-300:
            if c0 > 1e-12:
                return SolveOutcome(status="infeasible", z=None, value=0.0)
            continue
        ratio = -c0 / c1
        if c1 > 0:
            if ratio <= 0:
                return SolveOutcome(status="infeasible", z=None, value=0.0)
            hi = min(hi, math.log(ratio))
        elif ratio > 0:
            lo = max(lo, math.log(ratio))
    if lo > hi + 1e-12:
        return SolveOutcome(status="infeasible", z=None, value=0.0)

    kc = obj.k_proj[0]
    qr = float(obj.q[obj.anchor])
    qc = float(obj.q[obj.coords[0]])
    if kc == 0:
        zstar = lo
    elif kc == obj.n:
        zstar = hi
    else:
        zstar = math.log(kc * qr / (qc * (obj.n - kc)))
        zstar = min(max(zstar, lo), hi)
    if math.isinf(zstar):
        direction = (-1.0,) if zstar < 0 else (1.0,)
        probe = (direction[0] * ESCAPE_NORM,)
        return SolveOutcome(
            status="unbounded",
            z=probe,
            value=math.exp(psi(obj, probe)),
            direction=direction,
        )
    return _classify(obj, poly, (zstar,), 1, 0.0)


# ---------------------------------------------------------------------------
# extras in dimension >= 2: seeded SLSQP polish
# ---------------------------------------------------------------------------

def _polish_with_extras(obj, poly, start, seeds=()) -> SolveOutcome:
    from scipy.optimize import minimize

    d = len(obj.coords)
    cons = []
    for e in poly.eqs:
        cons.append({"type": "eq", "fun": (lambda z, e=e: float(np.dot(e, z)))})
    for dvec, s in poly.ineqs:
        cons.append({"type": "ineq", "fun": (lambda z, dv=dvec, s=s: float(s * np.dot(dv, z)))})
    for extra in poly.extras:
        cons.append({"type": "ineq", "fun": (lambda z, ex=extra: -extras_value(ex, z))})

    best = None
    points = [tuple(float(x) for x in start)] + [tuple(s) for s in seeds if s is not None]
    for z0 in points:
        res = minimize(
            lambda z: -psi(obj, z),
            np.array(z0, dtype=float),
            jac=lambda z: -psi_gradient(obj, z),
            constraints=cons,
            method="SLSQP",
            options={"maxiter": 400, "ftol": 1e-14},
        )
        if not res.success and not np.all(np.isfinite(res.x)):
            continue
        z = tuple(float(v) for v in res.x)
        if not _extras_ok(poly, z, tol=1e-7):
            continue
        val = math.exp(psi(obj, z))
        if best is None or val > best[0]:
            best = (val, z)
    if best is None:
        return SolveOutcome(status="infeasible", z=None, value=0.0)
    val, z = best
    strict = all(
        s * sum(dk * zk for dk, zk in zip(dvec, z)) > TIGHT_TOL for dvec, s in poly.ineqs
    )
    eq_ok = all(abs(sum(dk * zk for dk, zk in zip(e, z))) <= 1e-7 for e in poly.eqs)
    if strict and eq_ok:
        return SolveOutcome(status="interior", z=z, value=val)
    return SolveOutcome(status="boundary", z=z, value=val)
