"""Central hyperplane arrangements of count-difference normals, per support set.

For a support set S the monomial comparisons live in the ratio chart of S as
sign conditions on integer normals.  This module enumerates every relatively
open face of that central arrangement exactly: the intersection lattice of the
normals is built with rational Gaussian elimination, and each face is produced
together with a rational witness point, so sign vectors are computed with
integer arithmetic only.  No LP solver and no floating-point margins are
involved; enumeration is deterministic.

Face inventory for a spanning central arrangement in dimension d:
  - the origin (all signs zero),
  - two rays per intersection-lattice line,
  - chambers and intermediate faces found by recursive localization
    (angular sweep in dimension 2, ray localization above).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from ._numbers import sgn
from .model import enumerate_counts
from .geometry import ratio_coords

SignVector = Tuple[int, ...]
Vec = Tuple[Fraction, ...]


# ---------------------------------------------------------------------------
# exact linear algebra on Fraction rows
# ---------------------------------------------------------------------------

def _rref(rows: Sequence[Sequence]) -> Tuple[Tuple[Vec, ...], Tuple[int, ...]]:
    mat = [list(map(Fraction, r)) for r in rows]
    if not mat:
        return (), ()
    ncols = len(mat[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return tuple(tuple(row) for row in mat[:r]), tuple(pivots)


def _nullspace(rows: Sequence[Sequence], dim: int) -> Tuple[Vec, ...]:
    """Basis of {z in Q^dim : row . z = 0 for all rows}."""
    rref, pivots = _rref(rows)
    pivset = set(pivots)
    basis = []
    for free in range(dim):
        if free in pivset:
            continue
        vec = [Fraction(0)] * dim
        vec[free] = Fraction(1)
        for row, pc in zip(rref, pivots):
            vec[pc] = -row[free]
        basis.append(tuple(vec))
    return tuple(basis)


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _scale_to_int(vec: Sequence) -> Tuple[int, ...]:
    """Scale a rational vector by a positive factor to a primitive integer
    vector, preserving orientation."""
    fr = [Fraction(x) for x in vec]
    den = 1
    for f in fr:
        den = den * f.denominator // math.gcd(den, f.denominator)
    ints = [int(f * den) for f in fr]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


def _subspace_key(basis: Sequence[Vec]) -> Tuple[Vec, ...]:
    rref, _ = _rref(basis)
    return rref


def _canon_int_dir(vec: Sequence[Fraction]) -> Tuple[int, ...]:
    """Scale a rational direction to a primitive integer vector, first nonzero
    entry positive."""
    fr = [Fraction(x) for x in vec]
    den = 1
    for f in fr:
        den = den * f.denominator // math.gcd(den, f.denominator)
    ints = [int(f * den) for f in fr]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    if g == 0:
        raise ValueError("zero vector has no direction")
    ints = [v // g for v in ints]
    for v in ints:
        if v != 0:
            if v < 0:
                ints = [-w for w in ints]
            break
    return tuple(ints)


# ---------------------------------------------------------------------------
# chamber witnesses of a central arrangement (recursive, exact)
# ---------------------------------------------------------------------------

def _unit(dim: int, j: int) -> Tuple[int, ...]:
    return tuple(1 if i == j else 0 for i in range(dim))


def _chamber_witnesses(normals: Sequence[Sequence], dim: int) -> List[Tuple[int, ...]]:
    """Integer witness points, one per chamber of the arrangement of
    `normals` in Q^dim.  Chambers are the faces with strict signs on every
    nonzero normal; normals identically zero must have been dropped by the
    caller.  Witnesses live on cones, so integer scaling is free."""
    if dim == 0 or not normals:
        return [tuple(0 for _ in range(dim))]
    normals = [_scale_to_int(g) for g in normals]
    lin = _nullspace(normals, dim)
    if lin:
        # quotient out the lineality space through unit vectors at pivot
        # columns of the normal row space, then lift by zero extension
        _, pivots = _rref(normals)
        reduced = [tuple(g[p] for p in pivots) for g in normals]
        wits = _spanning_chamber_witnesses(reduced, len(pivots))
        out = []
        for w in wits:
            vec = [0] * dim
            for val, p in zip(w, pivots):
                vec[p] = val
            out.append(tuple(vec))
        return out
    return _spanning_chamber_witnesses(list(normals), dim)


def _spanning_chamber_witnesses(normals: List[Tuple[int, ...]], dim: int) -> List[Tuple[int, ...]]:
    if dim == 1:
        return [(1,), (-1,)]
    if dim == 2:
        return _chambers_2d(normals)

    # dimension >= 3: every chamber of a spanning central arrangement is a
    # pointed cone, hence touches some intersection-lattice ray; localize
    # around each ray and recurse one dimension down.
    found: Dict[SignVector, Tuple[int, ...]] = {}
    for v in _dim1_directions(normals, dim):
        for ray in (v, tuple(-x for x in v)):
            vanishing = [g for g in normals if _dot(g, ray) == 0]
            piv = next(i for i, x in enumerate(ray) if x != 0)
            keep = [i for i in range(dim) if i != piv]
            reduced = [tuple(g[i] for i in keep) for g in vanishing]
            reduced_nz = [g for g in reduced if any(g)]
            assert len(reduced_nz) == len(reduced), "vanishing normal projected to zero"
            for w in _chamber_witnesses(reduced_nz, dim - 1):
                offset = [0] * dim
                for val, i in zip(w, keep):
                    offset[i] = val
                # scale the ray to dominate the offset on non-vanishing normals
                t = 1
                for g in normals:
                    gv = _dot(g, ray)
                    if gv != 0:
                        t = max(t, 1 + abs(_dot(g, offset)) // abs(gv) + 1)
                z = tuple(t * rv + ov for rv, ov in zip(ray, offset))
                key = tuple(sgn(_dot(g, z)) for g in normals)
                assert all(key), "chamber witness landed on a hyperplane"
                found.setdefault(key, z)
    return [found[k] for k in sorted(found)]


def _chambers_2d(normals: List[Tuple[int, ...]]) -> List[Tuple[int, ...]]:
    lines = sorted({_canon_int_dir(g) for g in normals})
    if len(lines) == 1:
        g = lines[0]
        return [g, (-g[0], -g[1])]
    rays: List[Tuple[int, ...]] = []
    for g in lines:
        rays.append((-g[1], g[0]))
        rays.append((g[1], -g[0]))
    rays = _sort_angular(rays)
    # with >= 2 distinct lines every angular gap is < pi, so the sum of two
    # consecutive rays is an interior direction of the open sector between them
    out = []
    for a, b in zip(rays, rays[1:] + rays[:1]):
        out.append((a[0] + b[0], a[1] + b[1]))
    return out


def _half_turn(u: Vec) -> int:
    x, y = u
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _angular_cmp(u: Vec, v: Vec) -> int:
    """Exact comparison of 2-d directions by angle in [0, 2*pi)."""
    hu, hv = _half_turn(u), _half_turn(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = u[0] * v[1] - u[1] * v[0]
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


def _sort_angular(dirs: List[Vec]) -> List[Vec]:
    from functools import cmp_to_key

    return sorted(dirs, key=cmp_to_key(_angular_cmp))


def _dim1_directions(normals: List[Vec], dim: int) -> List[Tuple[int, ...]]:
    """Canonical directions of the 1-dimensional intersection subspaces."""
    dirs = set()
    for a, b in combinations(range(len(normals)), 2):
        ns = _nullspace([normals[a], normals[b]], dim)
        if len(ns) == 1:
            dirs.add(_canon_int_dir(ns[0]))
    if dim >= 4:
        # deeper intersections can create lines not visible from pairs
        lattice = _intersection_lattice(normals, dim)
        for t, basis in lattice.values():
            if t == 1:
                dirs.add(_canon_int_dir(basis[0]))
    return sorted(dirs)


def _intersection_lattice(normals: Sequence[Vec], dim: int) -> Dict[Tuple, Tuple[int, Tuple[Vec, ...]]]:
    """All distinct subspaces obtained by intersecting hyperplanes, keyed by
    canonical RREF of a basis.  Includes the full space."""
    full = tuple(_unit(dim, j) for j in range(dim))
    spaces: Dict[Tuple, Tuple[int, Tuple[Vec, ...]]] = {_subspace_key(full): (dim, full)}
    frontier = [full]
    while frontier:
        basis = frontier.pop()
        for d in normals:
            proj = tuple(_dot(d, b) for b in basis)
            if not any(proj):
                continue
            ys = _nullspace([proj], len(basis))
            newbasis = tuple(
                _scale_to_int(
                    tuple(sum(y[j] * basis[j][c] for j in range(len(basis))) for c in range(dim))
                )
                for y in ys
            )
            key = _subspace_key(newbasis)
            if key not in spaces:
                spaces[key] = (len(newbasis), newbasis)
                if newbasis:
                    frontier.append(newbasis)
    return spaces


# ---------------------------------------------------------------------------
# strata
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Stratum:
    """A support set together with a relatively open arrangement face."""

    support: Tuple[int, ...]
    signs: SignVector
    dim: int
    witness: Vec  # exact interior point in ratio coordinates
    index: int

    @property
    def rank(self) -> Tuple[int, int]:
        return (len(self.support), self.dim)

    @property
    def stratum_id(self) -> str:
        su = ",".join(str(i + 1) for i in self.support)
        return f"S{{{su}}}#{self.index}"


@dataclass(frozen=True)
class FaceLattice:
    """Every stratum of one support set, plus the pair comparison table."""

    m: int
    n: int
    support: Tuple[int, ...]
    normals: Tuple[Tuple[int, ...], ...]
    strata: Tuple[Stratum, ...]
    by_signs: Dict[SignVector, Stratum] = field(repr=False)
    # (k, l) count pair -> (normal index, flip) with sign(W^k/W^l) = flip * sign_normal
    pair_table: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Tuple[Optional[int], int]] = field(repr=False)

    @property
    def anchor(self) -> int:
        return self.support[0]

    @property
    def coords(self) -> Tuple[int, ...]:
        return ratio_coords(self.support)

    def pair_sign(self, signs: SignVector, k, l) -> int:
        """Sign of log(W^k / W^l) anywhere on the face with this sign vector."""
        idx, flip = self.pair_table[(k, l)]
        if idx is None:
            return 0
        return flip * signs[idx]


def difference_normals(counts: Sequence[Tuple[int, ...]], support: Sequence[int]) -> Tuple[Tuple[int, ...], ...]:
    """Deduplicated canonical integer normals of all count pair differences,
    projected to the ratio coordinates of the support set."""
    S = tuple(sorted(support))
    coords = ratio_coords(S)
    seen = set()
    for k, l in combinations(counts, 2):
        d = tuple(k[i] - l[i] for i in coords)
        if not any(d):
            continue
        seen.add(_canon_int_dir(tuple(Fraction(x) for x in d)))
    return tuple(sorted(seen))


def _build_pair_table(counts, support, normals):
    coords = ratio_coords(tuple(sorted(support)))
    index = {d: i for i, d in enumerate(normals)}
    table = {}
    for k, l in combinations(counts, 2):
        d = tuple(k[i] - l[i] for i in coords)
        if not any(d):
            table[(k, l)] = (None, 1)
            table[(l, k)] = (None, 1)
            continue
        c = _canon_int_dir(tuple(Fraction(x) for x in d))
        flip = 1
        for dv, cv in zip(d, c):
            if cv != 0 or dv != 0:
                flip = 1 if (dv > 0) == (cv > 0) else -1
                break
        i = index[c]
        table[(k, l)] = (i, flip)
        table[(l, k)] = (i, -flip)
    return table


@lru_cache(maxsize=None)
def _face_lattice(m: int, n: int, support: Tuple[int, ...]) -> FaceLattice:
    S = tuple(sorted(support))
    counts = tuple(
        k for k in enumerate_counts(m, n) if all(i in set(S) for i, ki in enumerate(k) if ki > 0)
    )
    normals = difference_normals(counts, S)
    dim = len(S) - 1
    faces = _central_faces(normals, dim)
    strata = tuple(
        Stratum(support=S, signs=signs, dim=fdim, witness=wit, index=i)
        for i, (signs, fdim, wit) in enumerate(faces)
    )
    by_signs = {st.signs: st for st in strata}
    pair_table = _build_pair_table(counts, S, normals)
    return FaceLattice(
        m=m,
        n=n,
        support=S,
        normals=normals,
        strata=strata,
        by_signs=by_signs,
        pair_table=pair_table,
    )


def enumerate_strata(inst, support: Sequence[int]) -> FaceLattice:
    """Face lattice of the count-difference arrangement on one support set.

    Deterministic: strata are ordered by decreasing dimension, then by sign
    vector.  The lattice depends only on (m, n, S), so it is cached.
    """
    S = tuple(sorted(set(support)))
    if not S:
        raise ValueError("support set must be nonempty")
    return _face_lattice(inst.m, inst.n, S)


def _central_faces(normals: Sequence[Tuple[int, ...]], dim: int):
    """All (signs, dim, witness) triples of the central arrangement."""
    nvecs = [tuple(Fraction(x) for x in d) for d in normals]
    if dim == 0:
        return [((), 0, ())]
    out: Dict[SignVector, Tuple[int, Vec]] = {}
    lattice = _intersection_lattice(nvecs, dim)
    for key in sorted(lattice, key=lambda k: (-lattice[k][0], k)):
        t, basis = lattice[key]
        projected = []
        for d in nvecs:
            proj = tuple(_dot(d, b) for b in basis)
            projected.append(proj if any(proj) else None)
        live = [p for p in projected if p is not None]
        for y in _chamber_witnesses(live, t):
            z = tuple(
                sum(y[j] * basis[j][c] for j in range(len(basis)))
                for c in range(dim)
            )
            if any(z):
                z = _scale_to_int(z)
            else:
                z = tuple(0 for _ in range(dim))
            signs = tuple(sgn(_dot(d, z)) for d in nvecs)
            if signs in out:
                raise AssertionError("duplicate face sign vector across subspaces")
            out[signs] = (t, z)
    faces = [(signs, t, z) for signs, (t, z) in out.items()]
    faces.sort(key=lambda f: (-f[1], f[0]))
    return faces


# ---------------------------------------------------------------------------
# interior points, ranks, children
# ---------------------------------------------------------------------------

INTERIOR_MARGIN = 1e-6
INTERIOR_BOX = 10.0


def interior_point(st: Stratum, lattice: FaceLattice) -> Tuple[float, ...]:
    """Deterministic float interior point of a stratum, scaled into the box
    |z_i| <= 10 with margin >= 1e-6 on every nonzero sign."""
    if st.dim == 0 or not any(st.witness):
        return tuple(0.0 for _ in st.witness)
    z = [Fraction(x) for x in st.witness]
    norm = max(abs(x) for x in z)
    z = [x / norm for x in z]  # sup-norm 1, signs preserved (cone scaling)
    zf = tuple(float(x) for x in z)
    margin = min(
        abs(sum(d * x for d, x in zip(nv, zf)))
        for nv, s in zip(lattice.normals, st.signs)
        if s != 0
    ) if any(st.signs) else 1.0
    scale = 1.0
    if 0 < margin < INTERIOR_MARGIN:
        scale = min(INTERIOR_BOX, INTERIOR_MARGIN / margin)
    return tuple(x * scale for x in zf)


def stratum_rank(st: Stratum) -> Tuple[int, int]:
    """Lexicographic rank (|S|, dim F) used by the descent."""
    return st.rank


def conformal_below(child_signs: SignVector, parent_signs: SignVector) -> bool:
    """Face order of the arrangement: child in closure(parent) iff每 sign is
    0 or agrees."""
    return all(c == 0 or c == p for c, p in zip(child_signs, parent_signs))


def cone_generators(st: Stratum, lattice: FaceLattice) -> List[Vec]:
    """Generator rays of closure(F): witnesses of the conformal 1-faces."""
    gens = []
    for tau in lattice.strata:
        if tau.dim == 1 and conformal_below(tau.signs, st.signs):
            gens.append(tau.witness)
    return gens


def _project_to_support(z: Sequence[Fraction], coords: Sequence[int], sub: Sequence[int]) -> Vec:
    """Reanchor a ratio vector to the chart of a smaller support set."""
    subS = tuple(sorted(sub))
    sub_anchor = subS[0]
    lookup = dict(zip(coords, z))
    lookup_full = dict(lookup)

    def val(i):
        return lookup_full.get(i, Fraction(0))  # anchor coordinate is 0

    base = val(sub_anchor)
    return tuple(val(i) - base for i in subS[1:])


def _cone_feasible(rows_eq: List[Vec], rows_strict: List[Vec], rows_weak: List[Vec], dim: int) -> bool:
    """Exact feasibility of a homogeneous system {e.x = 0, s.x > 0, w.x >= 0}
    with x != 0, for dim <= 2 (reduced through the equality nullspace first)."""
    basis = _nullspace(rows_eq, dim) if rows_eq else tuple(_unit(dim, j) for j in range(dim))
    q = len(basis)
    stricts = [tuple(_dot(s, b) for b in basis) for s in rows_strict]
    weaks = [tuple(_dot(w, b) for b in basis) for w in rows_weak]
    if any(not any(s) for s in stricts):
        return False
    weaks = [w for w in weaks if any(w)]
    if q == 0:
        return False  # only x = 0 satisfies the equalities
    if q == 1:
        for side in (Fraction(1), Fraction(-1)):
            if all(s[0] * side > 0 for s in stricts) and all(w[0] * side >= 0 for w in weaks):
                return True
        return False
    if q == 2:
        return _cone_feasible_2d(stricts, weaks)
    raise NotImplementedError(f"exact cone feasibility limited to dim <= 2, got {q}")


def _cone_feasible_2d(stricts: List[Vec], weaks: List[Vec]) -> bool:
    cands = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)),
             (Fraction(-1), Fraction(0)), (Fraction(0), Fraction(-1))]
    bounds = []
    for a in stricts + weaks:
        r = (-a[1], a[0])
        bounds.append(r)
        bounds.append((-r[0], -r[1]))
        cands.append(tuple(a))
    uniq = _sort_angular(sorted({_canon_signed(b) for b in bounds})) if bounds else []
    cands.extend(uniq)
    for u, v in zip(uniq, uniq[1:] + uniq[:1]):
        mid = (u[0] + v[0], u[1] + v[1])
        if any(mid):
            cands.append(mid)
        else:
            # antipodal gap (exactly one boundary line): probe both perps
            cands.append((-u[1], u[0]))
            cands.append((u[1], -u[0]))
    for c in cands:
        if not any(c):
            continue
        if all(_dot(s, c) > 0 for s in stricts) and all(_dot(w, c) >= 0 for w in weaks):
            return True
    return False


def _canon_signed(v: Vec) -> Vec:
    """Normalize a direction for deduping while keeping its orientation."""
    c = _canon_int_dir(v)
    cf = tuple(Fraction(x) for x in c)
    for a, b in zip(v, cf):
        if b != 0:
            return cf if (a > 0) == (b > 0) else tuple(-x for x in cf)
    return cf


def _in_cone(v: Vec, gens: List[Vec]) -> bool:
    """Exact membership of v in cone(gens) for ambient dimension <= 2."""
    if not any(v):
        return True
    if not gens:
        return False
    dim = len(v)
    if dim == 1:
        return any(g[0] != 0 and (g[0] > 0) == (v[0] > 0) for g in gens)
    if dim == 2:
        live = [g for g in gens if any(g)]
        for g in live:
            if _cross(g, v) == 0 and _dot(g, v) > 0:
                return True
        for g1, g2 in combinations(live, 2):
            c = _cross(g1, g2)
            if c == 0:
                if _dot(g1, g2) < 0 and _cross(g1, v) == 0:
                    return True  # opposite rays span the whole line
                continue
            a = _cross(v, g2) / c
            b = _cross(g1, v) / c
            if a >= 0 and b >= 0:
                return True
        return False
    raise NotImplementedError("cone membership limited to dimension <= 2")


def _cross(a: Vec, b: Vec) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def _argmax_system(gens: List[Vec], coords: Sequence[int], support: Sequence[int], target: Sequence[int]):
    """Linear system on cone coefficients lambda >= 0 expressing that the
    escape direction w = sum lambda_g g has extended argmax set == target."""
    S = tuple(sorted(support))
    T = set(target)
    G = len(gens)

    def w_ext(i):  # coefficient row of w^ext_i(lambda); anchor coordinate is 0
        if i == S[0]:
            return tuple(Fraction(0) for _ in range(G))
        ci = coords.index(i)
        return tuple(g[ci] for g in gens)

    t0 = min(T)
    base = w_ext(t0)
    eqs = []
    stricts = []
    weaks = [_unit(G, j) for j in range(G)]
    for i in S:
        row = w_ext(i)
        diff = tuple(b - r for b, r in zip(base, row))
        if i in T:
            if i != t0:
                eqs.append(diff)
        else:
            stricts.append(diff)  # w_t0 - w_i > 0
    if S[0] in T:
        # the common max equals the anchor level 0: base row must vanish
        eqs.append(base)
    else:
        stricts.append(base)  # common max > 0 so the anchor collapses
    return eqs, stricts, weaks, G


def reachable_supports(st: Stratum, lattice: FaceLattice) -> Dict[Tuple[int, ...], List[Vec]]:
    """Proper sub-supports reachable by escape from the stratum closure,
    mapped to the projected generator cone of the limit trace.

    Exact for |S| <= 3 (generator cones live in dimension <= 2); larger
    supports use the same test after equality reduction and raise if the
    reduced system is still higher-dimensional.
    """
    S = st.support
    coords = list(lattice.coords)
    gens = cone_generators(st, lattice)
    out: Dict[Tuple[int, ...], List[Vec]] = {}
    if not gens:
        return out
    subsets = []
    for size in range(len(S) - 1, 0, -1):
        subsets.extend(combinations(S, size))
    direct = set()
    for T in subsets:
        eqs, stricts, weaks, G = _argmax_system(gens, coords, S, T)
        try:
            ok = _cone_feasible(eqs, stricts, weaks, G)
        except NotImplementedError:
            ok = _sampled_feasible(eqs, stricts, weaks, G)
        if ok:
            direct.add(tuple(T))
    # one intermediate hop covers chains at desk scale: project the generator
    # cone onto a reachable support A and test reachability inside it
    reach = set(direct)
    for A in sorted(direct, key=len, reverse=True):
        if len(A) < 2:
            continue
        gens_A = [_project_to_support(g, coords, A) for g in gens]
        coords_A = list(ratio_coords(A))
        for T in subsets:
            if tuple(T) in reach or not set(T) < set(A):
                continue
            eqs, stricts, weaks, G = _argmax_system(gens_A, coords_A, A, T)
            try:
                if _cone_feasible(eqs, stricts, weaks, G):
                    reach.add(tuple(T))
            except NotImplementedError:
                if _sampled_feasible(eqs, stricts, weaks, G):
                    reach.add(tuple(T))
    for T in reach:
        out[T] = [_project_to_support(g, coords, T) for g in gens]
    return out


def _sampled_feasible(eqs, stricts, weaks, dim) -> bool:
    """Sound but possibly incomplete fallback for generator counts above the
    exact small-dimension solver: test deterministic nonnegative combinations."""
    from itertools import product

    basis = _nullspace(eqs, dim) if eqs else tuple(_unit(dim, j) for j in range(dim))
    if not basis:
        return False
    for combo in product((0, 1, 2), repeat=len(basis)):
        if not any(combo):
            continue
        x = tuple(sum(Fraction(c) * b[j] for c, b in zip(combo, basis)) for j in range(dim))
        if all(_dot(w, x) >= 0 for w in weaks) and all(_dot(s, x) > 0 for s in stricts):
            return True
    return False


def child_strata(inst, st: Stratum) -> List[Stratum]:
    """Strata contained in the relative boundary of the closure of `st`.

    Same-support children come from the conformal face order of the
    arrangement; smaller-support children are found through the exact escape
    cone of the stratum (complete for |S| <= 3, generator-sampled above).
    """
    lattice = enumerate_strata(inst, st.support)
    children: List[Stratum] = []
    for tau in lattice.strata:
        if tau.signs != st.signs and conformal_below(tau.signs, st.signs):
            children.append(tau)
    for T, proj_gens in sorted(reachable_supports(st, lattice).items()):
        sub = enumerate_strata(inst, T)
        for tau in sub.strata:
            tau_gens = cone_generators(tau, sub)
            try:
                inside = all(_in_cone(g, proj_gens) for g in tau_gens) if tau.dim > 0 else True
            except NotImplementedError:
                inside = tau.dim == 0
            if inside:
                children.append(tau)
    for tau in children:
        assert tau.rank < st.rank, "child rank must strictly decrease"
    return children


def classify_point(lattice: FaceLattice, z: Sequence[float], tol: float = 1e-9) -> Optional[Stratum]:
    """Stratum whose sign vector matches a float ratio point, within tol."""
    signs = []
    for d in lattice.normals:
        v = sum(dk * zk for dk, zk in zip(d, z))
        signs.append(0 if abs(v) <= tol else (1 if v > 0 else -1))
    return lattice.by_signs.get(tuple(signs))


def lattice_debug_dump(lattice: FaceLattice, inst=None) -> dict:
    """JSON-ready description of a face lattice (debug surface).

    With an instance, each stratum also lists its child stratum ids.
    """
    out = {
        "support": [i + 1 for i in lattice.support],
        "normals": [list(d) for d in lattice.normals],
        "strata": [
            {
                "id": st.stratum_id,
                "signs": list(st.signs),
                "dim": st.dim,
                "rank": list(st.rank),
                "witness": [str(x) for x in st.witness],
            }
            for st in lattice.strata
        ],
    }
    if inst is not None:
        for entry, st in zip(out["strata"], lattice.strata):
            entry["children"] = [c.stratum_id for c in child_strata(inst, st)]
    return out
