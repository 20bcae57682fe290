"""Wealth profiles on the budget simplex and the per-support ratio chart.

A wealth profile is a plain tuple W with q.W = 1.  On the open face of a
support set S the chart z_i = log(W_i / W_anchor), i in S minus the anchor,
identifies the face with a Euclidean space; monomial comparisons become
linear forms in z there.  The anchor is always min(S).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence, Tuple

from ._numbers import is_exact, log_of, sgn

ZERO_TOL = 1e-12
Z_CLAMP = 700.0  # exp overflow guard; larger magnitudes mean support collapse
BUDGET_TOL = 1e-10


def support_of(W: Sequence, q: Sequence) -> Tuple[int, ...]:
    """Indices carrying wealth.  Exact zero test for rationals, scaled
    threshold 1e-12/q_i for floats."""
    out = []
    for i, wi in enumerate(W):
        if is_exact(wi):
            if wi != 0:
                out.append(i)
        elif wi >= ZERO_TOL / float(q[i]):
            out.append(i)
    return tuple(out)


def budget_residual(W: Sequence, q: Sequence):
    """q.W - 1."""
    return sum(qi * wi for qi, wi in zip(q, W)) - 1


def is_feasible(W: Sequence, q: Sequence) -> bool:
    if any((wi < 0) for wi in W):
        return False
    res = budget_residual(W, q)
    if is_exact(res):
        return res == 0
    return abs(res) <= BUDGET_TOL


def monomial_value(W: Sequence, k: Sequence[int]):
    """prod W_i^{k_i} with the 0^0 = 1 convention; exact for rational W."""
    out = 1
    for wi, ki in zip(W, k):
        if ki == 0:
            continue
        if wi == 0:
            return Fraction(0) if is_exact(wi) else 0.0
        out = out * wi**ki
    return out


def anchor_of(support: Sequence[int]) -> int:
    return min(support)


def ratio_coords(support: Sequence[int]) -> Tuple[int, ...]:
    """Coordinate labels of the chart: sorted(S) minus the anchor."""
    S = tuple(sorted(support))
    return S[1:]


def to_ratio(W: Sequence, q: Sequence):
    """Chart coordinates of W on its own support face.

    Returns (support, z) with z_i = log(W_i / W_anchor) ordered per
    ratio_coords(support).
    """
    S = support_of(W, q)
    if not S:
        raise ValueError("wealth profile has empty support")
    r = S[0]
    wr = W[r]
    z = tuple(log_of(W[i]) - log_of(wr) for i in ratio_coords(S))
    return S, z


def from_ratio(support: Sequence[int], z: Sequence, q: Sequence, m: int):
    """Invert the chart: W_r = (q_r + sum q_i e^{z_i})^-1, W_i = e^{z_i} W_r.

    z_i == 0 keeps an exact factor 1, so rational chart points on walls stay
    rational when q is rational.
    """
    S = tuple(sorted(support))
    coords = ratio_coords(S)
    if len(z) != len(coords):
        raise ValueError(f"expected {len(coords)} ratio coordinates, got {len(z)}")
    factors = []
    for zi in z:
        if zi == 0:
            factors.append(1)
        else:
            zf = float(zi)
            factors.append(math.exp(max(-Z_CLAMP, min(Z_CLAMP, zf))))
    r = S[0]
    denom = q[r] + sum(q[i] * e for i, e in zip(coords, factors))
    wr = 1 / denom
    zero = wr * 0  # matches the arithmetic type of the chart (exact or float)
    W = [zero] * m
    W[r] = wr
    for i, e in zip(coords, factors):
        W[i] = e * wr
    return tuple(W)


def pair_sign_at(W: Sequence, support: Sequence[int], d: Sequence[int]) -> int:
    """Sign of sum d_i log(W_i / W_r) at a point with positive support values.

    For rational W the sign is computed exactly by comparing the integer power
    products, never through logs.
    """
    S = tuple(sorted(support))
    coords = ratio_coords(S)
    r = S[0]
    if all(is_exact(W[i]) for i in S):
        num = Fraction(1)
        den = Fraction(1)
        total = 0
        for i, di in zip(coords, d):
            if di > 0:
                num *= Fraction(W[i]) ** di
            elif di < 0:
                den *= Fraction(W[i]) ** (-di)
            total += di
        if total > 0:
            den *= Fraction(W[r]) ** total
        elif total < 0:
            num *= Fraction(W[r]) ** (-total)
        return sgn(num - den)
    val = sum(di * (log_of(W[i]) - log_of(W[r])) for i, di in zip(coords, d))
    if abs(val) <= 1e-12:
        return 0
    return sgn(val)
