"""Upper quantiles of terminal wealth: the pointwise oracle and the per-stratum
monomial ordering, quantile index, and active count vector."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import List, Optional, Sequence, Tuple

from ._numbers import is_exact
from .arrangement import FaceLattice, Stratum
from .geometry import monomial_value, support_of
from .model import ProblemInstance, counts_on_support, enumerate_counts, multinomial_mass, support_mass

TIE_REL_TOL = 1e-12
ALPHA_FLOAT_GUARD = 1e-15


@dataclass(frozen=True)
class OrderedCounts:
    """Tie-grouped count vectors, strictly decreasing in monomial value on a
    stratum, with running cumulative mass per tier."""

    tiers: Tuple[Tuple[Tuple[int, ...], ...], ...]
    cum_mass: Tuple

    def flatten(self) -> List[Tuple[int, ...]]:
        return [k for tier in self.tiers for k in tier]


@dataclass(frozen=True)
class ActiveCount:
    """Either Zero (the quantile vanishes on the stratum) or a single count
    vector whose monomial equals the quantile there."""

    k: Optional[Tuple[int, ...]]

    @property
    def is_zero(self) -> bool:
        return self.k is None


def quantile_at(inst: ProblemInstance, W: Sequence):
    """Upper alpha-quantile of X_n(W): largest t >= 0 with P(X >= t) >= alpha.

    Values are tie-grouped before mass accumulation, exactly for rational W
    and within relative 1e-12 for floats.  Returns 0 when the total positive
    mass is below alpha.
    """
    counts = enumerate_counts(inst.m, inst.n)
    pairs = [(monomial_value(W, k), multinomial_mass(inst, k)) for k in counts]
    exact = inst.exact_mode and all(is_exact(v) for v, _ in pairs)
    if exact:
        pairs.sort(key=lambda vm: vm[0], reverse=True)
        zero = Fraction(0)
    else:
        pairs = [(float(v), float(mass)) for v, mass in pairs]
        pairs.sort(key=lambda vm: vm[0], reverse=True)
        zero = 0.0

    alpha = inst.alpha if exact else float(inst.alpha)
    guard = 0 if exact else ALPHA_FLOAT_GUARD
    cum = zero
    i = 0
    while i < len(pairs):
        v = pairs[i][0]
        tier_mass = zero
        j = i
        while j < len(pairs) and _same_value(pairs[j][0], v, exact):
            tier_mass += pairs[j][1]
            j += 1
        cum += tier_mass
        if cum >= alpha - guard:
            return v
        i = j
    return zero  # unreachable: total mass is 1 >= alpha


def _same_value(a, b, exact: bool) -> bool:
    if exact:
        return a == b
    scale = max(abs(a), abs(b), 1e-300)
    return abs(a - b) <= TIE_REL_TOL * scale


def stratum_ordering(inst: ProblemInstance, st: Stratum, lattice: FaceLattice) -> OrderedCounts:
    """Symbolic monomial ordering of the counts supported in S, on a stratum.

    Pairs compare through the stratum's sign vector (tie exactly when the pair
    normal projects to zero or carries sign 0), so the result is independent
    of any interior point.
    """
    counts = counts_on_support(inst, st.support)

    def cmp(k, l):
        s = lattice.pair_sign(st.signs, k, l)
        return -s  # descending monomial value

    ordering = sorted(counts, key=cmp_to_key(cmp))
    tiers: List[List[Tuple[int, ...]]] = []
    for k in ordering:
        if tiers and lattice.pair_sign(st.signs, k, tiers[-1][0]) == 0:
            tiers[-1].append(k)
        else:
            tiers.append([k])
    cum: List = []
    running = Fraction(0) if inst.exact_mode else 0.0
    for tier in tiers:
        for k in tier:
            running += multinomial_mass(inst, k)
        cum.append(running)
    return OrderedCounts(
        tiers=tuple(tuple(t) for t in tiers),
        cum_mass=tuple(cum),
    )


def active_count(inst: ProblemInstance, st: Stratum, lattice: FaceLattice) -> ActiveCount:
    """Count vector whose monomial equals the quantile on the stratum, or Zero
    when the support carries mass below alpha.

    Inside a tie tier any member works; the reported representative prefers
    counts supported on all of S, then the lexicographically largest (the
    acceptance examples pin the full-support choice on tie walls).
    """
    pi_s = support_mass(inst, st.support)
    alpha = inst.alpha
    if not inst.exact_mode:
        pi_s, alpha = float(pi_s), float(alpha)
    if pi_s < alpha:
        return ActiveCount(k=None)
    ordering = stratum_ordering(inst, st, lattice)
    guard = 0 if inst.exact_mode else ALPHA_FLOAT_GUARD
    for tier, cum in zip(ordering.tiers, ordering.cum_mass):
        if cum >= alpha - guard:
            rep = max(tier, key=lambda k: (sum(1 for ki in k if ki > 0), k))
            return ActiveCount(k=rep)
    raise AssertionError("cumulative support mass never reached alpha")


def quantile_matches_monomial(inst: ProblemInstance, W: Sequence, k: Sequence[int], rel_tol: float = 1e-12) -> bool:
    """Check quantile_at(W) == W^k, exactly for rationals else within rel_tol."""
    qv = quantile_at(inst, W)
    mv = monomial_value(W, k)
    if is_exact(qv) and is_exact(mv):
        return qv == mv
    qv, mv = float(qv), float(mv)
    return abs(qv - mv) <= rel_tol * max(abs(qv), abs(mv), 1e-300)


def point_support_check(inst: ProblemInstance, W: Sequence) -> Tuple[int, ...]:
    return support_of(W, inst.q)
