"""Heralded mapping of two-state overlaps.

Solvers for the three analytic regimes (complex phases, vanishing input
overlap, all-real products), explicit 4x4 unitary synthesis, seeded Monte
Carlo verification, and the cloning/deleting applications built on top.
"""

from .applications import (CloningSpec, DeletingReport,
                           best_probability_at_fixed_beta, cloning_problem,
                           deleting_check, optimal_cloning_probability)
from .errors import (DegenerateInputError, DomainError,
                     InconsistentSolutionError, InfeasibleError,
                     OverlapForgeError)
from .general import (InnerProduct, MappingProblem, MappingSolution,
                      PriorPair, SignFlips, UsdProbability, XYCoefficients,
                      beta_lower_bound, check_independence,
                      check_modulus_ordering, constraint_residual,
                      corrected_targets, p_at_beta_min, pm_probabilities,
                      phase_sensitivity, solve_general, usd_probability,
                      xy_coefficients)
from .hilbert import (canonical_phase, complete_orthonormal, inner,
                      is_unitary, qubit, state)
from .orthogonal import (OrthoPrepProblem, OrthoPrepSolution, optimal,
                         p2_of_p1, stationary_p1, total_prob)
from .realcase import (RealCaseProblem, RealCaseSolution, feasible_interval,
                       optimize, p2_pm)
from .simulate import (SimulationConfig, SimulationReport, binomial_3sigma,
                       posterior_check, run)
from .synthesis import (ActionReport, EmbeddedPair, SynthesisResult,
                        ancilla_projections, embed_pair, synthesize,
                        verify_action)

__all__ = [
    "CloningSpec", "DeletingReport", "best_probability_at_fixed_beta",
    "cloning_problem", "deleting_check", "optimal_cloning_probability",
    "DegenerateInputError", "DomainError", "InconsistentSolutionError",
    "InfeasibleError", "OverlapForgeError",
    "InnerProduct", "MappingProblem", "MappingSolution", "PriorPair",
    "SignFlips", "UsdProbability", "XYCoefficients", "beta_lower_bound",
    "check_independence", "check_modulus_ordering", "constraint_residual",
    "corrected_targets", "p_at_beta_min", "pm_probabilities",
    "phase_sensitivity", "solve_general", "usd_probability",
    "xy_coefficients",
    "canonical_phase", "complete_orthonormal", "inner", "is_unitary",
    "qubit", "state",
    "OrthoPrepProblem", "OrthoPrepSolution", "optimal", "p2_of_p1",
    "stationary_p1", "total_prob",
    "RealCaseProblem", "RealCaseSolution", "feasible_interval", "optimize",
    "p2_pm",
    "SimulationConfig", "SimulationReport", "binomial_3sigma",
    "posterior_check", "run",
    "ActionReport", "EmbeddedPair", "SynthesisResult", "ancilla_projections",
    "embed_pair", "synthesize", "verify_action",
]

__version__ = "0.1.0"
