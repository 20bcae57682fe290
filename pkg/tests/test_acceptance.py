"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
Criterion 11 asserts a strict-improvement comparison between horizons 39 and 5
of the binary sweep; at horizon 5 the optimizer coincides with the Kelly point
exactly (shadow count 3/5), so the strict comparison cannot hold and the test
records an honest failure.  See the decisions ledger for the analysis.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import combinations

import numpy as np

from qkelly.arrangement import enumerate_strata
from qkelly.geometry import monomial_value
from qkelly.model import enumerate_counts, multinomial_mass, validate_instance
from qkelly.quantile import active_count, quantile_at
from qkelly.shadow import kelly_value, shadow_point, shadow_value
from qkelly.solver import solve, solve_binary_fast
from qkelly.stratum_opt import StratumObjective, psi, psi_gradient, psi_hessian
from qkelly.verify import asymptotic_sweep, grid_oracle, mc_quantile

from conftest import rational_stratum_wealth


def report(num, ok, detail, elapsed=None):
    status = "PASS" if ok else "FAIL"
    timing = f" [{elapsed:.2f}s]" if elapsed is not None else ""
    print(f"\nACCEPTANCE {num}: {status} - {detail}{timing}")
    return ok


def binary(alpha="1/2", n=3):
    return validate_instance(2, ("3/5", "2/5"), ("1", "1"), n, alpha)


def ternary():
    return validate_instance(3, ("3/5", "3/10", "1/10"), ("1/3", "1/3", "1/3"), 2, "1/2")


def test_criterion_1_binary_median_optimum():
    t0 = time.monotonic()
    sol = solve(binary())
    elapsed = time.monotonic() - t0
    ok = (
        sol.value == Fraction(4, 27)
        and sol.argmax == (Fraction(2, 3), Fraction(1, 3))
        and elapsed < 1.0
    )
    assert report(1, ok, f"binary median optimum 4/27 at (2/3, 1/3), runtime {elapsed:.3f}s < 1s", elapsed)


def test_criterion_2_binary_wall_value():
    val = quantile_at(binary(), (Fraction(1, 2), Fraction(1, 2)))
    ok = val == Fraction(1, 8)
    assert report(2, ok, f"wall quantile at (1/2, 1/2) is exactly 1/8 (got {val})")


def test_criterion_3_binary_high_quantile():
    sol = solve(binary(alpha="4/5"))
    ok = sol.value == Fraction(1, 8) and sol.argmax == (Fraction(1, 2), Fraction(1, 2))
    assert report(3, ok, "alpha=0.8 optimum is exactly 1/8 at (1/2, 1/2)")


def test_criterion_4_ternary_descent():
    t0 = time.monotonic()
    inst = ternary()
    sol = solve(inst)
    grid = grid_oracle(inst, 400)
    elapsed = time.monotonic() - t0
    edges = sol.trace.descent_edges
    full_to_face = any(a.startswith("S{1,2,3}") and b.startswith("S{1,2}#") for a, b in edges)
    face_to_wall = any(a.startswith("S{1,2}#") and b == "S{1,2}#2" for a, b in edges)
    grid_ok = abs(grid.best_value - 2.25) <= 2e-3 * 2.25
    ok = (
        sol.value == Fraction(9, 4)
        and sol.argmax == (Fraction(3, 2), Fraction(3, 2), Fraction(0))
        and sol.active_count == (1, 1, 0)
        and full_to_face
        and face_to_wall
        and grid_ok
        and elapsed < 10.0
    )
    assert report(
        4,
        ok,
        "ternary solve 2.25 at (1.5, 1.5, 0), active (1,1,0), descent "
        f"full-support -> S={{1,2}} -> tie wall, grid(400) rel err "
        f"{abs(grid.best_value - 2.25) / 2.25:.2e}",
        elapsed,
    )


def test_criterion_5_zero_stratum():
    val = quantile_at(ternary(), (Fraction(3), Fraction(0), Fraction(0)))
    ok = val == 0
    assert report(5, ok, f"quantile at the vertex (3, 0, 0) is exactly 0 (got {val})")


def test_criterion_6_probability_tables():
    b = binary()
    t = ternary()
    binary_table = {
        (3, 0): Fraction(216, 1000),
        (2, 1): Fraction(432, 1000),
        (1, 2): Fraction(288, 1000),
        (0, 3): Fraction(64, 1000),
    }
    ternary_table = {
        (2, 0, 0): Fraction(36, 100),
        (1, 1, 0): Fraction(36, 100),
        (1, 0, 1): Fraction(12, 100),
        (0, 2, 0): Fraction(9, 100),
        (0, 1, 1): Fraction(6, 100),
        (0, 0, 2): Fraction(1, 100),
    }
    ok = all(multinomial_mass(b, k) == v for k, v in binary_table.items()) and all(
        multinomial_mass(t, k) == v for k, v in ternary_table.items()
    )
    assert report(6, ok, "both worked-example probability tables reproduced exactly")


def test_criterion_7_shadow_kelly_property_suite():
    t0 = time.monotonic()
    rng = random.Random(1234)
    ok = True
    for m in (2, 3, 4):
        for n in range(1, 6):
            q = tuple(rng.uniform(0.4, 2.0) for _ in range(m))
            for k in enumerate_counts(m, n):
                cap = shadow_value(k, n, q)
                point = shadow_point(k, n, q)
                raw = np.abs(np.array([[rng.uniform(0.01, 1.0) for _ in range(m)] for _ in range(1000)]))
                scale = raw @ np.array(q)
                W = raw / scale[:, None]
                logs = np.where(W > 0, np.log(np.maximum(W, 1e-300)), -1e9)
                vals = np.exp(logs @ np.array(k, dtype=float))
                ok &= bool(np.all(vals <= cap * (1 + 1e-12)))
                near = np.abs(vals - cap) <= 1e-12 * cap
                if near.any():
                    dist = np.max(np.abs(W[near] - np.array(point)), axis=1)
                    ok &= bool(np.all(dist < 1e-8))
                # the closed-form maximizer itself attains the cap
                attained = monomial_value(point, k)
                ok &= abs(attained - cap) <= 1e-12 * max(cap, 1e-300)
    elapsed = time.monotonic() - t0
    ok &= elapsed < 30.0
    assert report(7, ok, "AM-GM optimality and uniqueness sweeps (m <= 4, n <= 5, 1000 samples)", elapsed)


def test_criterion_8_stratum_monomial_identity():
    t0 = time.monotonic()
    rng = random.Random(88)
    ok = True
    checked = 0
    cases = [binary(n=n) for n in range(1, 6)] + [
        validate_instance(3, ("3/5", "3/10", "1/10"), ("1/3", "1/3", "1/3"), n, "1/2")
        for n in (1, 2, 3)
    ]
    for inst in cases:
        for size in range(inst.m, 0, -1):
            for S in combinations(range(inst.m), size):
                lattice = enumerate_strata(inst, S)
                for st in lattice.strata:
                    ac = active_count(inst, st, lattice)
                    if ac.is_zero:
                        continue
                    for W in rational_stratum_wealth(inst, st, lattice, 50, rng):
                        ok &= quantile_at(inst, W) == monomial_value(W, ac.k)
                        checked += 1
    elapsed = time.monotonic() - t0
    ok &= elapsed < 60.0
    assert report(
        8, ok, f"quantile == active monomial exactly at {checked} rational stratum points", elapsed
    )


def test_criterion_9_oracle_equivalence():
    t0 = time.monotonic()
    rng = random.Random(42)
    ok = True
    worst = 0.0
    for _ in range(20):
        m = rng.choice((2, 3))
        n = rng.randint(1, 4)
        alpha = rng.choice((Fraction(1, 4), Fraction(1, 2), Fraction(4, 5)))
        raw = [Fraction(rng.randint(2, 9), 10) for _ in range(m)]
        p = tuple(r / sum(raw) for r in raw)
        q = tuple(Fraction(rng.randint(1, 3), rng.randint(1, 3)) for _ in range(m))
        inst = validate_instance(m, p, q, n, alpha)
        sol = solve(inst)
        grid = grid_oracle(inst, 600)
        val = float(sol.value)
        rel = abs(grid.best_value - val) / max(val, 1e-12)
        worst = max(worst, rel)
        ok &= rel <= 2e-3 and grid.best_value <= val + 1e-9
        ok &= abs(float(quantile_at(inst, sol.argmax)) - val) <= 1e-10 * max(val, 1e-12)
    elapsed = time.monotonic() - t0
    ok &= elapsed < 300.0
    assert report(
        9, ok, f"20 random instances vs grid(600): worst rel err {worst:.2e} <= 2e-3", elapsed
    )


def test_criterion_10_solver_numerics():
    rng = random.Random(99)
    ok = True
    configs = [
        ((2, 1), (0, 1), (1.0, 1.0), 3),
        ((1, 1, 0), (0, 1), (1 / 3, 1 / 3, 1 / 3), 2),
        ((2, 1, 1), (0, 1, 2), (0.5, 1.0, 1.5), 4),
        ((1, 2, 2), (0, 1, 2), (1.0, 1.0, 1.0), 5),
    ]
    h = 1e-6
    for k, S, q, n in configs:
        obj = StratumObjective(k=k, support=S, q=q, n=n)
        dim = len(S) - 1
        for _ in range(100):
            z = np.array([rng.uniform(-3, 3) for _ in range(dim)])
            g = psi_gradient(obj, z)
            for i in range(dim):
                e = np.zeros(dim)
                e[i] = h
                fd = (psi(obj, z + e) - psi(obj, z - e)) / (2 * h)
                ok &= abs(fd - g[i]) <= 1e-6 * max(1.0, abs(g[i]))
            H = psi_hessian(obj, z)
            d = np.array([rng.uniform(-1, 1) for _ in range(dim)])
            if np.linalg.norm(d) > 1e-6:
                ok &= float(d @ H @ d) < 0.0
    assert report(10, ok, "gradient/finite-difference agreement and Hessian negative definiteness")


def test_criterion_11_asymptotic_collapse_as_stated():
    """Faithful implementation of the stated criterion; it cannot pass.

    At n = 5 the binary quantile count is 3, so the optimizer is the shadow
    point (3/5, 2/5) = the Kelly point exactly: kelly_distance(5) = 0 and the
    scaled log value (1/5) log(0.6^3 0.4^2) equals L* identically, while
    n = 39 gives distance 0.0103 and value gap 3.9e-3.  Strict improvement of
    n=39 over n=5 is therefore impossible; the decisions ledger records the
    analysis.  The true first-order collapse trend is asserted against n = 7
    in test_verify.
    """
    t0 = time.monotonic()
    rows = asymptotic_sweep(
        (Fraction(3, 5), Fraction(2, 5)), (1, 1), Fraction(1, 2), list(range(1, 40, 2))
    )
    elapsed = time.monotonic() - t0
    lstar = kelly_value((Fraction(3, 5), Fraction(2, 5)), (1, 1))
    by_n = {r.n: r for r in rows}
    gap5 = abs(by_n[5].scaled_log_value - lstar)
    gap39 = abs(by_n[39].scaled_log_value - lstar)
    dist5 = by_n[5].kelly_distance
    dist39 = by_n[39].kelly_distance
    ok = gap39 < gap5 and dist39 < dist5 and elapsed < 120.0
    report(
        11,
        ok,
        f"as stated: |gap|(39)={gap39:.2e} < |gap|(5)={gap5:.2e} and "
        f"dist(39)={dist39:.2e} < dist(5)={dist5:.2e} required",
        elapsed,
    )
    assert ok, (
        "criterion 11 is unattainable as stated: the n=5 optimizer equals the "
        "Kelly point exactly (see decisions ledger)"
    )


def test_criterion_12_binary_specialization_agreement():
    ok = True
    for alpha in ("1/2", "4/5"):
        inst = binary(alpha=alpha)
        a = solve(inst)
        b = solve_binary_fast(inst)
        ok &= a.value == b.value and a.argmax == b.argmax
    assert report(12, ok, "solve_binary_fast equals solve exactly on the acceptance instances")


def test_criterion_13_monte_carlo_spot_check():
    t0 = time.monotonic()
    b = binary()
    t = ternary()
    mc_b = mc_quantile(b, (Fraction(2, 3), Fraction(1, 3)), 1_000_000, seed=20260808)
    mc_t = mc_quantile(t, (Fraction(3, 2), Fraction(3, 2), Fraction(0)), 1_000_000, seed=20260808)
    elapsed = time.monotonic() - t0
    ok = (
        abs(mc_b - 4 / 27) <= 1e-12 * (4 / 27)
        and mc_t == 2.25
        and elapsed < 30.0
    )
    assert report(
        13, ok, f"MC atoms at the two optima: {mc_b:.12g} ~ 4/27 and {mc_t} == 2.25", elapsed
    )
