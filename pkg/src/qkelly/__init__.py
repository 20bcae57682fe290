"""Exact finite-horizon upper-quantile Kelly solver on the wealth simplex.

Terminal wealth after n independent repetitions of an m-outcome event is the
count monomial W^N of the one-period wealth profile W.  Every fixed upper
quantile of it is piecewise monomial over a finite stratification of the
budget simplex by support sets and arrangement faces, and each stratum
problem is a one-period Kelly problem for the shadow law k/n.   This package
enumerates the stratification exactly, solves each face by closed form or
damped Newton, and cross-checks against grid and Monte Carlo oracles.
"""

from .model import InstanceError, ProblemInstance, enumerate_counts, multinomial_mass, support_mass, validate_instance
from .geometry import budget_residual, from_ratio, monomial_value, support_of, to_ratio
from .arrangement import FaceLattice, Stratum, child_strata, difference_normals, enumerate_strata, interior_point, stratum_rank
from .quantile import ActiveCount, OrderedCounts, active_count, quantile_at, stratum_ordering
from .shadow import ShadowSolution, kelly_point, kelly_value, shadow_point, shadow_solution, shadow_value
from .stratum_opt import FacePolyhedron, SolveError, SolveOutcome, StratumObjective, maximize_on_face, psi, psi_gradient, psi_hessian
from .solver import (
    DescentTrace,
    EmptyFamilyError,
    GlobalSolution,
    RestrictedFamily,
    descent_trace,
    solve,
    solve_binary_fast,
)
from .verify import GridReport, SweepRow, asymptotic_sweep, cross_verify, grid_oracle, mc_quantile

__version__ = "0.1.0"

__all__ = [
    "ActiveCount",
    "DescentTrace",
    "EmptyFamilyError",
    "FaceLattice",
    "FacePolyhedron",
    "GlobalSolution",
    "GridReport",
    "InstanceError",
    "OrderedCounts",
    "ProblemInstance",
    "RestrictedFamily",
    "ShadowSolution",
    "SolveError",
    "SolveOutcome",
    "Stratum",
    "StratumObjective",
    "SweepRow",
    "active_count",
    "asymptotic_sweep",
    "budget_residual",
    "child_strata",
    "cross_verify",
    "descent_trace",
    "difference_normals",
    "enumerate_counts",
    "enumerate_strata",
    "from_ratio",
    "grid_oracle",
    "interior_point",
    "kelly_point",
    "kelly_value",
    "maximize_on_face",
    "mc_quantile",
    "monomial_value",
    "multinomial_mass",
    "psi",
    "psi_gradient",
    "psi_hessian",
    "quantile_at",
    "shadow_point",
    "shadow_solution",
    "shadow_value",
    "solve",
    "solve_binary_fast",
    "stratum_ordering",
    "stratum_rank",
    "support_mass",
    "support_of",
    "to_ratio",
    "validate_instance",
]
