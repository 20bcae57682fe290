"""Shared fixtures and exact-sampling helpers for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from qkelly.arrangement import cone_generators
from qkelly.geometry import ratio_coords
from qkelly.model import validate_instance


@pytest.fixture
def binary_median():
    """Worked two-outcome upper-median instance: p=(3/5,2/5), q=(1,1), n=3."""
    return validate_instance(2, (Fraction(3, 5), Fraction(2, 5)), (1, 1), 3, Fraction(1, 2))


@pytest.fixture
def binary_high():
    return validate_instance(2, (Fraction(3, 5), Fraction(2, 5)), (1, 1), 3, Fraction(4, 5))


@pytest.fixture
def ternary_median():
    """Worked three-outcome instance: p=(3/5,3/10,1/10), q=(1/3,1/3,1/3), n=2."""
    return validate_instance(
        3,
        (Fraction(3, 5), Fraction(3, 10), Fraction(1, 10)),
        (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)),
        2,
        Fraction(1, 2),
    )


def integer_stratum_points(st, lattice, count, rng: random.Random):
    """Exact integer ratio points in the relative interior of a stratum.

    Positive integer combinations of the witness and the conformal generator
    rays stay inside the relatively open cone, so every sign is exact.
    """
    gens = cone_generators(st, lattice)
    dirs = [st.witness] + [g for g in gens if tuple(g) != tuple(st.witness)]
    pts = []
    for _ in range(count):
        z = [0] * len(st.witness)
        for g in dirs:
            lam = rng.randint(1, 5)
            z = [a + lam * b for a, b in zip(z, g)]
        sv = tuple(
            (v > 0) - (v < 0) for v in (sum(d * x for d, x in zip(nv, z)) for nv in lattice.normals)
        )
        assert sv == st.signs, "integer cone sample left the stratum"
        pts.append(tuple(z))
    return pts


def rational_stratum_wealth(inst, st, lattice, count, rng: random.Random):
    """Exact rational wealth profiles in a stratum.

    Map integer ratio points z through rho_i = r^{z_i} for a rational base
    r > 1: signs of sum d_i log(rho_i) equal signs of d.z, so stratum
    membership is preserved exactly while the wealth stays rational.
    """
    zs = integer_stratum_points(st, lattice, count, rng)
    S = st.support
    coords = ratio_coords(S)
    out = []
    for z in zs:
        r = 1 + Fraction(rng.randint(1, 9), rng.randint(2, 9))
        rho = [r**zi for zi in z]
        denom = Fraction(inst.q[S[0]])
        for i, rh in zip(coords, rho):
            denom += Fraction(inst.q[i]) * rh
        wr = 1 / denom
        W = [Fraction(0)] * inst.m
        W[S[0]] = wr
        for i, rh in zip(coords, rho):
            W[i] = rh * wr
        out.append(tuple(W))
    return out
