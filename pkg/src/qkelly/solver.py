"""Exact recursive boundary solve over the stratification.

Strata are processed in decreasing lexicographic rank (|S|, dim).  Supports
whose total mass falls below alpha are pruned wholesale (the quantile is
identically zero there).  On every other stratum the active monomial is
maximized over the face closure; interior maxima and pinned zero-dimensional
faces contribute candidates, while boundary or unbounded escapes contribute
nothing because their value is dominated by lower-rank strata.  The best
candidate is the global optimum and the recorded trace reconstructs the
descent edges taken by each escape.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from ._numbers import is_exact
from .arrangement import (
    FaceLattice,
    Stratum,
    classify_point,
    conformal_below,
    enumerate_strata,
    interior_point,
)
from .geometry import from_ratio, pair_sign_at, ratio_coords, support_of
from .model import InstanceError, ProblemInstance, multinomial_mass, support_mass
from .quantile import active_count, quantile_at
from .shadow import shadow_point, shadow_value
from .stratum_opt import (
    FacePolyhedron,
    SolveError,
    SolveOutcome,
    StratumObjective,
    maximize_on_face,
)

FAMILY_SCAN_RESOLUTION = 240
VALUE_TIE_REL = 1e-12


class EmptyFamilyError(ValueError):
    """The restricted family does not intersect the wealth simplex."""


@dataclass(frozen=True)
class RestrictedFamily:
    """Intersection of halfspaces a.W <= b with the closed simplex."""

    halfspaces: Tuple[Tuple[Tuple[float, ...], float], ...]

    @staticmethod
    def of(*halfspaces) -> "RestrictedFamily":
        return RestrictedFamily(
            halfspaces=tuple((tuple(float(x) for x in a), float(b)) for a, b in halfspaces)
        )

    def contains(self, W, tol: float = 1e-9) -> bool:
        return all(
            sum(ai * float(wi) for ai, wi in zip(a, W)) <= b + tol for a, b in self.halfspaces
        )


@dataclass
class VisitRecord:
    stratum_id: str
    rank: Tuple[int, int]
    active: Optional[Tuple[int, ...]]
    status: str
    value: Optional[float]
    shadow_violations: Tuple[int, ...] = ()


@dataclass
class DescentTrace:
    visited: List[VisitRecord] = field(default_factory=list)
    pruned_zero: int = 0
    descent_edges: List[Tuple[str, str]] = field(default_factory=list)

    def edge_supports(self) -> List[Tuple[str, str]]:
        return list(self.descent_edges)


@dataclass(frozen=True)
class GlobalSolution:
    value: object
    argmax: Tuple
    active_count: Tuple[int, ...]
    attained_stratum: Stratum
    trace: DescentTrace
    exact: bool

    @property
    def value_float(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class _Candidate:
    value: object
    W: Tuple
    active: Tuple[int, ...]
    stratum: Stratum
    exact: bool


def _all_supports(m: int) -> List[Tuple[int, ...]]:
    out = []
    for size in range(m, 0, -1):
        out.extend(combinations(range(m), size))
    return out


def _family_extras(family: Optional[RestrictedFamily], inst: ProblemInstance, support):
    """Map wealth halfspaces a.W <= b onto the support chart as
    c_r + sum c_i e^{z_i} <= 0 with c_i = a_i - b q_i."""
    if family is None:
        return ()
    S = tuple(sorted(support))
    coords = ratio_coords(S)
    extras = []
    for a, b in family.halfspaces:
        c = {i: a[i] - b * float(inst.q[i]) for i in S}
        extras.append((c[S[0]], tuple(c[i] for i in coords)))
    return tuple(extras)


def _face_polyhedron(st: Stratum, lattice: FaceLattice, extras) -> FacePolyhedron:
    eqs = tuple(d for d, s in zip(lattice.normals, st.signs) if s == 0)
    ineqs = tuple((d, s) for d, s in zip(lattice.normals, st.signs) if s != 0)
    return FacePolyhedron(eqs=eqs, ineqs=ineqs, extras=extras)


def _shadow_violation_set(inst: ProblemInstance, st: Stratum, lattice: FaceLattice, k) -> Tuple[int, ...]:
    """Indices of face constraints the shadow point of k fails, recorded in
    the trace as raw material for pruning research."""
    if any(k[i] == 0 for i in st.support):
        return tuple(range(len(lattice.normals)))  # off-support shadow point
    W = shadow_point(k, inst.n, inst.q)
    out = []
    for idx, (d, s) in enumerate(zip(lattice.normals, st.signs)):
        if pair_sign_at(W, st.support, d) != s:
            out.append(idx)
    return tuple(out)


def _worker_count() -> int:
    raw = os.environ.get("QKELLY_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def solve(
    inst: ProblemInstance,
    family: Optional[RestrictedFamily] = None,
    scan_resolution: int = FAMILY_SCAN_RESOLUTION,
) -> GlobalSolution:
    """Global maximum of the upper alpha-quantile of terminal wealth.

    With a restricted family, each stratum problem is additionally clipped by
    the family halfspaces and a lattice scan backstops the nonconvex cases;
    the returned value is always attained at a feasible point.
    """
    trace = DescentTrace()
    candidates: List[_Candidate] = []
    family_floor = None
    if family is not None:
        family_floor = _family_feasible_floor(inst, family, scan_resolution)

    for S in _all_supports(inst.m):
        pi_s = support_mass(inst, S)
        alpha = inst.alpha if inst.exact_mode else float(inst.alpha)
        if (pi_s if inst.exact_mode else float(pi_s)) < alpha:
            lattice = enumerate_strata(inst, S)
            trace.pruned_zero += len(lattice.strata)
            for st in lattice.strata:
                trace.visited.append(
                    VisitRecord(st.stratum_id, st.rank, None, "zero-pruned", None)
                )
            continue
        lattice = enumerate_strata(inst, S)
        extras = _family_extras(family, inst, S)
        ordered = sorted(lattice.strata, key=lambda s: (-s.dim, s.index))

        def _run(st: Stratum):
            ac = active_count(inst, st, lattice)
            obj = StratumObjective(k=ac.k, support=st.support, q=inst.q, n=inst.n)
            poly = _face_polyhedron(st, lattice, extras)
            start = interior_point(st, lattice)
            try:
                out = maximize_on_face(obj, poly, start)
            except SolveError as exc:
                exc.trace = trace
                raise
            return ac, out

        workers = _worker_count()
        if workers > 1 and len(ordered) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_run, ordered))
        else:
            results = [_run(st) for st in ordered]

        for st, (ac, out) in zip(ordered, results):
            viol = _shadow_violation_set(inst, st, lattice, ac.k)
            trace.visited.append(
                VisitRecord(
                    st.stratum_id,
                    st.rank,
                    ac.k,
                    out.status,
                    float(out.value) if out.value is not None else None,
                    viol,
                )
            )
            if out.status == "interior":
                W = _point_of(inst, st, out, ac.k)
                candidates.append(
                    _Candidate(value=out.value, W=W, active=ac.k, stratum=st, exact=out.exact)
                )
            elif out.status in ("boundary", "unbounded"):
                edge = _resolve_escape_edge(inst, st, lattice, out)
                if edge is not None:
                    trace.descent_edges.append((st.stratum_id, edge))

    if family is not None and family_floor is not None:
        candidates.append(family_floor)
    if not candidates:
        raise EmptyFamilyError("no feasible candidate found; family too tight for the scan")

    winner = _pick_winner(candidates)
    return GlobalSolution(
        value=winner.value,
        argmax=winner.W,
        active_count=winner.active,
        attained_stratum=winner.stratum,
        trace=trace,
        exact=winner.exact,
    )


def _point_of(inst: ProblemInstance, st: Stratum, out: SolveOutcome, active) -> Tuple:
    if out.exact:
        # rebuild the exact point: shadow fast path or a pinned face origin
        if out.z and any(z != 0 for z in out.z):
            return shadow_point(active, inst.n, inst.q)
        return from_ratio(st.support, tuple(Fraction(0) for _ in out.z), inst.q, inst.m)
    return from_ratio(st.support, out.z, inst.q, inst.m)


def _pick_winner(candidates: Sequence[_Candidate]) -> _Candidate:
    best = max(candidates, key=lambda c: c.value)
    near = [
        c
        for c in candidates
        if c.value == best.value
        or abs(float(c.value) - float(best.value))
        <= VALUE_TIE_REL * max(abs(float(best.value)), 1e-300)
    ]
    near.sort(key=lambda c: (c.stratum.rank, c.stratum.support, c.stratum.index))
    return near[0]


def _resolve_escape_edge(inst, st: Stratum, lattice: FaceLattice, out: SolveOutcome) -> Optional[str]:
    """Child stratum the escape descends to, inferred from the solve geometry."""
    if out.z is None:
        return None
    if out.status == "boundary":
        child = classify_point(lattice, out.z, tol=1e-7)
        if (
            child is not None
            and child.signs != st.signs
            and conformal_below(child.signs, st.signs)
        ):
            return child.stratum_id
        # zero out the tight constraints on the parent sign vector
        idx_of = {d: i for i, d in enumerate(lattice.normals)}
        signs = list(st.signs)
        live = [(d, s) for d, s in zip(lattice.normals, st.signs) if s != 0]
        for t in out.tight:
            signs[idx_of[live[t][0]]] = 0
        child = lattice.by_signs.get(tuple(signs))
        return child.stratum_id if child is not None else None
    # unbounded: identify the support collapse target from the direction
    w = dict(zip(lattice.coords, out.direction))
    w[st.support[0]] = 0.0
    top = max(w.values())
    T = tuple(sorted(i for i in st.support if w[i] >= top - 1e-6))
    if not T or T == st.support:
        return None
    sub = enumerate_strata(inst, T)
    zf = dict(zip(lattice.coords, out.z))
    zf[st.support[0]] = 0.0
    anchor = T[0]
    y = tuple(zf[i] - zf[anchor] for i in ratio_coords(T))
    child = classify_point(sub, y, tol=1e-6)
    return child.stratum_id if child is not None else None


def _family_feasible_floor(inst, family: RestrictedFamily, resolution: int) -> Optional[_Candidate]:
    """Scan the simplex lattice under the family constraints and return the
    best feasible point as a guaranteed-attained candidate."""
    from .kernels import quantile_lattice_best

    best = quantile_lattice_best(inst, resolution, family=family)
    if best is None:
        raise EmptyFamilyError(
            "restricted family has empty intersection with the scanned simplex lattice"
        )
    value, W = best
    S = support_of(W, inst.q)
    lattice = enumerate_strata(inst, S)
    coords = ratio_coords(S)
    anchor = S[0]
    z = tuple(math.log(float(W[i])) - math.log(float(W[anchor])) for i in coords)
    st = classify_point(lattice, z, tol=1e-9)
    if st is None:
        st = lattice.strata[0]
    ac = active_count(inst, st, lattice)
    active = ac.k if ac.k is not None else tuple(0 for _ in range(inst.m))
    return _Candidate(value=value, W=W, active=active, stratum=st, exact=False)


# ---------------------------------------------------------------------------
# binary specialization
# ---------------------------------------------------------------------------

def solve_binary_fast(inst: ProblemInstance) -> GlobalSolution:
    """Direct two-outcome solution: tail index per chamber plus the wall.

    On U > D terminal wealth is increasing in the success count, so the
    quantile count is the largest j with P(B_n >= j) >= alpha; mirrored on
    U < D; the wall point is evaluated directly.  Must agree exactly with
    the general solve.
    """
    if inst.m != 2:
        raise InstanceError(f"binary fast path requires m = 2, got m = {inst.m}")
    n, alpha = inst.n, inst.alpha
    masses = [_binom_mass(inst, j) for j in range(n + 1)]
    exact = inst.exact_mode
    if not exact:
        alpha = float(alpha)

    trace = DescentTrace()
    lattice = enumerate_strata(inst, (0, 1))
    chamber_up = lattice.by_signs[(-1,)]  # z = log(D/U) < 0
    chamber_dn = lattice.by_signs[(1,)]
    wall = lattice.by_signs[(0,)]

    candidates: List[_Candidate] = []

    # chamber U > D
    tail = masses[-1] * 0
    m_alpha = None
    for j in range(n, -1, -1):
        tail = tail + masses[j]
        if tail >= alpha:
            m_alpha = j
            break
    k_up = (m_alpha, n - m_alpha)
    U, D = shadow_point(k_up, n, inst.q)
    if U > D:
        candidates.append(
            _Candidate(
                value=shadow_value(k_up, n, inst.q),
                W=(U, D),
                active=k_up,
                stratum=chamber_up,
                exact=exact and inst.q_exact,
            )
        )

    # chamber U < D
    cum = masses[0] * 0
    j_alpha = None
    for j in range(n + 1):
        cum = cum + masses[j]
        if cum >= alpha:
            j_alpha = j
            break
    k_dn = (j_alpha, n - j_alpha)
    U2, D2 = shadow_point(k_dn, n, inst.q)
    if U2 < D2:
        candidates.append(
            _Candidate(
                value=shadow_value(k_dn, n, inst.q),
                W=(U2, D2),
                active=k_dn,
                stratum=chamber_dn,
                exact=exact and inst.q_exact,
            )
        )

    # wall U = D
    Wwall = from_ratio((0, 1), (Fraction(0),), inst.q, 2)
    val = quantile_at(inst, Wwall)
    ac = active_count(inst, wall, lattice)
    candidates.append(
        _Candidate(value=val, W=Wwall, active=ac.k, stratum=wall, exact=is_exact(val))
    )

    winner = _pick_winner(candidates)
    return GlobalSolution(
        value=winner.value,
        argmax=winner.W,
        active_count=winner.active,
        attained_stratum=winner.stratum,
        trace=trace,
        exact=winner.exact,
    )


def _binom_mass(inst: ProblemInstance, j: int):
    return multinomial_mass(inst, (j, inst.n - j))


# ---------------------------------------------------------------------------
# reporting
# ---------------------------------------------------------------------------

def descent_trace(sol: GlobalSolution) -> str:
    """Human-readable descent report, deterministic line order."""
    lines = []
    lines.append(
        f"winner {sol.attained_stratum.stratum_id} rank={sol.attained_stratum.rank} "
        f"value={float(sol.value):.12g} active={sol.active_count}"
    )
    lines.append(f"zero strata pruned: {sol.trace.pruned_zero}")
    for rec in sol.trace.visited:
        val = "-" if rec.value is None else f"{rec.value:.12g}"
        act = "zero" if rec.active is None else str(rec.active)
        lines.append(
            f"[{rec.stratum_id}] rank={rec.rank} active={act} status={rec.status} value={val}"
        )
    for parent, child in sol.trace.descent_edges:
        lines.append(f"descend {parent} -> {child}")
    return "\n".join(lines)
