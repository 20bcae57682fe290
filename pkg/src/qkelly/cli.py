"""Command-line front door: solve | surface | verify | sweep.

Problem data comes from flags or a JSON/TOML config file (flags win).
Rational literals like "1/2" and decimal literals like "0.6" are parsed
exactly, so textbook-style instances run in exact mode end to end.

Exit codes: 0 ok, 1 verification failure, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from ._numbers import fmt_exact, is_exact
from .kernels import instance_kernel_data, log_wealth, quantile_batch, simplex_lattice
from .model import InstanceError, ProblemInstance, validate_instance
from .shadow import kelly_point, kelly_value
from .solver import (
    EmptyFamilyError,
    GlobalSolution,
    RestrictedFamily,
    SolveError,
    solve,
)
from .verify import asymptotic_sweep, cross_verify, sweep_rows_csv

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkelly",
        description="Exact finite-horizon upper-quantile Kelly solver on the wealth simplex.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_instance_flags(p):
        p.add_argument("--p", help="comma-separated outcome probabilities, e.g. 0.6,0.4 or 3/5,2/5")
        p.add_argument("--q", help="comma-separated state prices, e.g. 1,1 or 1/3,1/3,1/3")
        p.add_argument("--n", type=int, help="horizon (number of repetitions)")
        p.add_argument("--alpha", help="upper quantile level in (0,1), e.g. 1/2")
        p.add_argument("--config", help="JSON or TOML file with the same keys; flags override")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=["json", "csv"], help="output format")

    ps = sub.add_parser("solve", help="exact global solve with descent trace")
    add_instance_flags(ps)
    ps.add_argument(
        "--family",
        action="append",
        default=None,
        help='restricted-family halfspace "a1,...,am<=b"; repeatable',
    )

    pf = sub.add_parser("surface", help="quantile surface CSV over the simplex lattice")
    add_instance_flags(pf)
    pf.add_argument("--resolution", type=int, default=200)

    pv = sub.add_parser("verify", help="cross-check solve against grid and Monte Carlo oracles")
    add_instance_flags(pv)
    pv.add_argument("--resolution", type=int, default=400)
    pv.add_argument("--samples", type=int, default=1_000_000)
    pv.add_argument("--seed", type=int, default=20260808)

    pw = sub.add_parser("sweep", help="horizon sweep toward the Kelly point, CSV output")
    add_instance_flags(pw)
    pw.add_argument("--horizons", help="comma-separated ascending horizons, e.g. 1,3,5")

    return parser


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    p = Path(path)
    if not p.exists():
        raise InstanceError(f"config file not found: {path}")
    text = p.read_text()
    if p.suffix.lower() == ".toml":
        try:
            import tomllib as toml_parser
        except ImportError:
            import tomli as toml_parser
        return toml_parser.loads(text)
    return json.loads(text)


def _merged(args, key, cfg, default=None):
    val = getattr(args, key, None)
    if val is not None:
        return val
    return cfg.get(key, default)


def _parse_vector(raw) -> tuple:
    if raw is None:
        raise InstanceError("missing probability/price vector")
    if isinstance(raw, (list, tuple)):
        return tuple(str(x) for x in raw)
    return tuple(tok for tok in str(raw).split(",") if tok.strip())


def instance_from(args, cfg) -> ProblemInstance:
    p = _parse_vector(_merged(args, "p", cfg))
    q = _parse_vector(_merged(args, "q", cfg))
    n = _merged(args, "n", cfg)
    alpha = _merged(args, "alpha", cfg)
    if n is None:
        raise InstanceError("missing horizon --n")
    if alpha is None:
        raise InstanceError("missing quantile level --alpha")
    return validate_instance(len(p), p, q, int(n), str(alpha))


def parse_family(specs: Optional[Sequence[str]], m: int) -> Optional[RestrictedFamily]:
    if not specs:
        return None
    halfspaces = []
    for spec in specs:
        if "<=" not in spec:
            raise InstanceError(f'family halfspace must look like "a1,...,am<=b": {spec!r}')
        lhs, rhs = spec.split("<=", 1)
        a = [float(x) for x in lhs.split(",")]
        if len(a) != m:
            raise InstanceError(f"family halfspace has {len(a)} coefficients, expected {m}")
        halfspaces.append((a, float(rhs)))
    return RestrictedFamily.of(*halfspaces)


def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _num_field(x) -> dict:
    return {
        "exact": fmt_exact(x) if is_exact(x) else None,
        "decimal": float(x),
    }


def _vec_field(xs) -> dict:
    return {
        "exact": [fmt_exact(x) for x in xs] if all(is_exact(x) for x in xs) else None,
        "decimal": [float(x) for x in xs],
    }


def solve_report(inst: ProblemInstance, sol: GlobalSolution) -> dict:
    n = inst.n
    shadow_law = tuple(ki for ki in sol.active_count)
    return {
        "problem": {
            "m": inst.m,
            "p": [fmt_exact(x) if is_exact(x) else float(x) for x in inst.p],
            "q": [fmt_exact(x) if is_exact(x) else float(x) for x in inst.q],
            "n": inst.n,
            "alpha": fmt_exact(inst.alpha) if is_exact(inst.alpha) else float(inst.alpha),
            "exact_mode": inst.exact_mode,
        },
        "value": _num_field(sol.value),
        "argmax": _vec_field(sol.argmax),
        "active_count": list(sol.active_count),
        "shadow_law": {
            "exact": [f"{k}/{n}" for k in shadow_law],
            "decimal": [k / n for k in shadow_law],
        },
        "kelly_point": _vec_field(kelly_point(inst.p, inst.q)),
        "kelly_value": kelly_value(inst.p, inst.q),
        "trace": {
            "winner": sol.attained_stratum.stratum_id,
            "pruned_zero": sol.trace.pruned_zero,
            "visited": [
                {
                    "id": r.stratum_id,
                    "rank": list(r.rank),
                    "active": list(r.active) if r.active is not None else None,
                    "status": r.status,
                    "value": r.value,
                }
                for r in sol.trace.visited
            ],
            "edges": [list(e) for e in sol.trace.descent_edges],
        },
    }


def run_solve(args, cfg) -> int:
    inst = instance_from(args, cfg)
    fam_specs = _merged(args, "family", cfg)
    family = parse_family(fam_specs, inst.m)
    fmt = _merged(args, "format", cfg, "json")
    if fmt != "json":
        raise InstanceError("solve reports are JSON; use --format json")
    sol = solve(inst, family=family)
    _emit(json.dumps(solve_report(inst, sol), indent=2), _merged(args, "out", cfg))
    return EXIT_OK


def run_surface(args, cfg) -> int:
    inst = instance_from(args, cfg)
    if inst.m not in (2, 3):
        raise InstanceError(f"surface supports m in {{2, 3}}, got m = {inst.m}")
    resolution = int(_merged(args, "resolution", cfg, 200))
    fmt = _merged(args, "format", cfg, "csv")
    if fmt != "csv":
        raise InstanceError("surface output is CSV; use --format csv")
    K, probs = instance_kernel_data(inst)
    alpha = float(inst.alpha)
    lines = [",".join([f"W{i+1}" for i in range(inst.m)] + ["quantile"])]

    def emit_points(points):
        vals = quantile_batch(log_wealth(points), K, probs, alpha)
        for row, v in zip(points, vals):
            lines.append(",".join([f"{x:.12g}" for x in row] + [f"{v:.12g}"]))

    # full lattice covers the closed simplex; proper faces get their own
    # lattices so boundary optima are sampled at face resolution too
    emit_points(simplex_lattice(inst.q, inst.m, resolution))
    from itertools import combinations

    for size in range(inst.m - 1, 0, -1):
        for S in combinations(range(inst.m), size):
            qS = [inst.q[i] for i in S]
            sub = simplex_lattice(qS, size, resolution) if size > 1 else np.array(
                [[1.0 / float(qS[0])]]
            )
            pts = np.zeros((len(sub), inst.m))
            for col, i in enumerate(S):
                pts[:, i] = sub[:, col]
            emit_points(pts)

    _emit("\n".join(lines) + "\n", _merged(args, "out", cfg))
    return EXIT_OK


def run_verify(args, cfg) -> int:
    inst = instance_from(args, cfg)
    fmt = _merged(args, "format", cfg, "json")
    if fmt != "json":
        raise InstanceError("verify reports are JSON; use --format json")
    report, sol = cross_verify(
        inst,
        resolution=int(_merged(args, "resolution", cfg, 400)),
        samples=int(_merged(args, "samples", cfg, 1_000_000)),
        seed=int(_merged(args, "seed", cfg, 20260808)),
    )
    payload = asdict(report)
    payload["passed"] = report.passed
    payload["argmax"] = [float(x) for x in sol.argmax]
    _emit(json.dumps(payload, indent=2), _merged(args, "out", cfg))
    return EXIT_OK if report.passed else EXIT_VERIFY_FAIL


def run_sweep(args, cfg) -> int:
    inst = instance_from(args, cfg)
    fmt = _merged(args, "format", cfg, "csv")
    if fmt != "csv":
        raise InstanceError("sweep output is CSV; use --format csv")
    raw = _merged(args, "horizons", cfg)
    if raw is None:
        raise InstanceError("missing --horizons")
    if isinstance(raw, (list, tuple)):
        horizons = [int(x) for x in raw]
    else:
        horizons = [int(tok) for tok in str(raw).split(",") if tok.strip()]
    rows = asymptotic_sweep(inst.p, inst.q, inst.alpha, horizons)
    _emit(sweep_rows_csv(rows), _merged(args, "out", cfg))
    lstar = kelly_value(inst.p, inst.q)
    last = rows[-1]
    sys.stderr.write(
        f"final row n={last.n}: |scaled_log_value - L*| = {abs(last.scaled_log_value - lstar):.3e}, "
        f"kelly_distance = {last.kelly_distance:.3e}\n"
    )
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(getattr(args, "config", None))
        if args.command == "solve":
            return run_solve(args, cfg)
        if args.command == "surface":
            return run_surface(args, cfg)
        if args.command == "verify":
            return run_verify(args, cfg)
        if args.command == "sweep":
            return run_sweep(args, cfg)
        raise InstanceError(f"unknown command {args.command!r}")
    except (InstanceError, EmptyFamilyError, ValueError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except SolveError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
