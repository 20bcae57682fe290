"""Closed-form maximizer of a count monomial on the budget simplex, and the
ordinary one-period Kelly point/value.

Maximizing W^k over {W >= 0, q.W = 1} is a one-period Kelly problem for the
empirical law k/n; the unique maximizer puts budget share k_i/n on state i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from ._numbers import all_exact, log_of


@dataclass(frozen=True)
class ShadowSolution:
    k: Tuple[int, ...]
    point: Tuple
    value: object
    shadow_law: Tuple


def shadow_point(k: Sequence[int], n: int, q: Sequence) -> Tuple:
    """W_i = k_i / (n q_i), zero where k_i = 0.  Exact for rational q."""
    if sum(k) != n:
        raise ValueError(f"count {tuple(k)} does not sum to n={n}")
    out = []
    for ki, qi in zip(k, q):
        if ki == 0:
            out.append(Fraction(0) if all_exact(q) else 0.0)
        else:
            out.append(Fraction(ki, n) / qi if all_exact(q) else ki / (n * float(qi)))
    return tuple(out)


def shadow_value(k: Sequence[int], n: int, q: Sequence):
    """max of W^k on the simplex: prod over k_i > 0 of (k_i/(n q_i))^{k_i}.

    Exact for rational q; otherwise computed in log space to dodge underflow
    at large horizons.
    """
    if sum(k) != n:
        raise ValueError(f"count {tuple(k)} does not sum to n={n}")
    if all_exact(q):
        out = Fraction(1)
        for ki, qi in zip(k, q):
            if ki:
                out *= (Fraction(ki, n) / qi) ** ki
        return out
    logv = 0.0
    for ki, qi in zip(k, q):
        if ki:
            logv += ki * (math.log(ki) - math.log(n) - log_of(qi))
    return math.exp(logv)


def shadow_solution(k: Sequence[int], n: int, q: Sequence) -> ShadowSolution:
    k = tuple(k)
    return ShadowSolution(
        k=k,
        point=shadow_point(k, n, q),
        value=shadow_value(k, n, q),
        shadow_law=tuple(Fraction(ki, n) for ki in k),
    )


def kelly_point(p: Sequence, q: Sequence) -> Tuple:
    """Ordinary Kelly wealth profile W_i = p_i / q_i."""
    return tuple(pi / qi for pi, qi in zip(p, q))


def kelly_value(p: Sequence, q: Sequence) -> float:
    """L* = sum p_i log(p_i / q_i), the optimal one-period growth rate."""
    return float(sum(float(pi) * (log_of(pi) - log_of(qi)) for pi, qi in zip(p, q)))
