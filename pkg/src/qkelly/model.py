"""Problem data: outcome law, state prices, horizon, quantile level.

Count vectors are plain int tuples in a fixed reverse-lexicographic order and
all probability mass computations stay exact (Fraction) whenever the law and
the quantile level were supplied as rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Tuple

from ._numbers import all_exact, is_exact, parse_scalar

SUM_TOL = 1e-12


class InstanceError(ValueError):
    """Invalid problem data."""


@dataclass(frozen=True)
class ProblemInstance:
    """Validated tuple (m, p, q, n, alpha).

    exact_mode is set when p and alpha are exact rationals; q_exact is tracked
    separately because rational prices make optimizer points exact too.
    """

    m: int
    p: Tuple
    q: Tuple
    n: int
    alpha: object
    exact_mode: bool

    @property
    def q_exact(self) -> bool:
        return all_exact(self.q)

    def describe(self) -> str:
        return f"m={self.m} n={self.n} alpha={self.alpha} exact={self.exact_mode}"


def validate_instance(m, p, q, n, alpha) -> ProblemInstance:
    """Validate raw problem data, with one distinct diagnostic per violation."""
    if not isinstance(m, int) or isinstance(m, bool) or m < 2:
        raise InstanceError(f"m must be an integer >= 2, got {m!r}")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InstanceError(f"n must be an integer >= 1, got {n!r}")

    p = tuple(parse_scalar(x) for x in p)
    q = tuple(parse_scalar(x) for x in q)
    alpha = parse_scalar(alpha)

    if len(p) != m:
        raise InstanceError(f"p has length {len(p)}, expected m={m}")
    if len(q) != m:
        raise InstanceError(f"q has length {len(q)}, expected m={m}")
    if any(x <= 0 for x in p):
        raise InstanceError(f"probabilities must be strictly positive, got {p}")
    if any(x <= 0 for x in q):
        raise InstanceError(f"state prices must be strictly positive, got {q}")

    total = sum(p)
    if all_exact(p):
        if total != 1:
            raise InstanceError(f"probabilities do not sum to 1 (sum = {total})")
    elif abs(total - 1.0) > SUM_TOL:
        raise InstanceError(f"probabilities do not sum to 1 (sum = {total!r})")

    if not (0 < alpha < 1):
        raise InstanceError(f"alpha must lie strictly inside (0, 1), got {alpha!r}")

    exact_mode = all_exact(p) and is_exact(alpha)
    return ProblemInstance(m=m, p=p, q=q, n=n, alpha=alpha, exact_mode=exact_mode)


@lru_cache(maxsize=None)
def enumerate_counts(m: int, n: int) -> Tuple[Tuple[int, ...], ...]:
    """All nonnegative integer m-vectors summing to n, reverse-lexicographic.

    (2, 3) -> (3,0), (2,1), (1,2), (0,3).
    """
    if m < 1:
        raise InstanceError(f"m must be >= 1 for count enumeration, got {m}")
    if n < 0:
        raise InstanceError(f"n must be >= 0 for count enumeration, got {n}")
    if m == 1:
        return ((n,),)
    out = []
    for first in range(n, -1, -1):
        for rest in enumerate_counts(m - 1, n - first):
            out.append((first,) + rest)
    return tuple(out)


def count_support(k: Sequence[int]) -> Tuple[int, ...]:
    """Indices with k_i > 0 (0-based)."""
    return tuple(i for i, ki in enumerate(k) if ki > 0)


def multinomial_mass(inst: ProblemInstance, k: Sequence[int]):
    """P(N = k) = n!/(k_1! ... k_m!) * prod p_i^{k_i}, exact in exact mode."""
    k = tuple(k)
    if len(k) != inst.m:
        raise InstanceError(f"count vector length {len(k)} != m={inst.m}")
    if any(ki < 0 for ki in k) or sum(k) != inst.n:
        raise InstanceError(f"count vector {k} is not a composition of n={inst.n}")
    coeff = math.factorial(inst.n)
    for ki in k:
        coeff //= math.factorial(ki)
    mass = Fraction(coeff) if inst.exact_mode else float(coeff)
    for pi, ki in zip(inst.p, k):
        if ki:
            mass = mass * pi**ki
    return mass


def support_mass(inst: ProblemInstance, support: Sequence[int]):
    """Total mass of counts supported inside `support`: (sum_{i in S} p_i)^n."""
    S = tuple(sorted(set(support)))
    if not S:
        raise InstanceError("support set must be nonempty")
    if S[0] < 0 or S[-1] >= inst.m:
        raise InstanceError(f"support {S} out of range for m={inst.m}")
    total = sum(inst.p[i] for i in S)
    return total**inst.n


def counts_on_support(inst: ProblemInstance, support: Sequence[int]) -> Tuple[Tuple[int, ...], ...]:
    """Counts k with supp(k) inside the given support set, in global order."""
    S = frozenset(support)
    return tuple(
        k for k in enumerate_counts(inst.m, inst.n) if all(i in S for i in count_support(k))
    )
