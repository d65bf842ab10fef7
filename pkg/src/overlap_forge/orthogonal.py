"""Vanishing input overlap: preparing overlapping states from an
orthonormal pair.

With alpha = 0 the two branch probabilities are no longer isolated points;
p2 becomes a function of p1 and the success probability is maximized over
p1 in [0, 1]. The two target phases are locked a half turn apart in this
regime, so only the target moduli and the priors enter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateInputError, DomainError
from .general import (ASSIGN_MINUS_PLUS, ASSIGN_PLUS_MINUS, InnerProduct,
                      MappingProblem, MappingSolution, PriorPair, SignFlips)

REGIME_INTERIOR = "interior-max"
REGIME_BOUNDARY_ETA1 = "boundary-eta1"
REGIME_BOUNDARY_ETA2 = "boundary-eta2"
REGIME_DEGENERATE = "degenerate-equal-moduli"


@dataclass(frozen=True)
class OrthoPrepProblem:
    """Target moduli and priors for the alpha = 0 regime.

    Both moduli must be strictly positive; a vanishing target would make
    the p2(p1) relation collapse.
    """

    beta_mod: float
    gamma_mod: float
    priors: PriorPair

    def __post_init__(self):
        for name in ("beta_mod", "gamma_mod"):
            m = float(getattr(self, name))
            if not (0.0 < m <= 1.0):
                raise DomainError(f"{name} = {m!r} outside (0, 1]")
            object.__setattr__(self, name, m)


@dataclass(frozen=True)
class OrthoPrepSolution:
    p1: float
    p2: float
    p_beta: float
    regime: str
    # true when the optimum sits at p1 = 0: the first input then never
    # reaches its success target and the success posterior collapses
    degenerate_posterior: bool = False


def p2_of_p1(problem: OrthoPrepProblem, p1: float) -> float:
    """Companion branch probability forced by the constraint at alpha = 0."""
    if not 0.0 <= p1 <= 1.0:
        raise DomainError(f"p1 = {p1!r} outside [0, 1]")
    b2 = problem.beta_mod**2
    g2 = problem.gamma_mod**2
    return (1.0 - p1) * g2 / (p1 * b2 + (1.0 - p1) * g2)


def total_prob(problem: OrthoPrepProblem, p1: float) -> float:
    """Success probability eta1 p1 + eta2 p2(p1)."""
    return problem.priors.eta1 * p1 + problem.priors.eta2 * p2_of_p1(problem, p1)


def stationary_p1(problem: OrthoPrepProblem) -> float:
    """Zero of the derivative of total_prob; may land outside [0, 1].

    Callers classify: inside the open interval it is the interior maximum
    when |beta| < |gamma| and a minimum when |beta| > |gamma|.
    """
    if problem.beta_mod == problem.gamma_mod:
        raise DegenerateInputError(
            "equal target moduli make the objective linear in p1; "
            "no stationary point exists"
        )
    r = problem.beta_mod / problem.gamma_mod
    pr = problem.priors
    return (1.0 - r * math.sqrt(pr.eta2 / pr.eta1)) / (1.0 - r * r)


def optimal(problem: OrthoPrepProblem) -> OrthoPrepSolution:
    """Global maximum of total_prob over p1 in [0, 1].

    Piecewise in r = |beta|/|gamma| and the priors: below r* =
    sqrt(min(priors)/max(priors)) the interior stationary point wins with

        P = (1 - 2 r sqrt(eta1 eta2)) / (1 - r^2),

    at and above r* the best sits on a boundary and equals the larger
    prior. The two pieces agree at r* exactly. Ties between the two
    boundaries resolve to p1 = 1, which keeps the success posterior
    nondegenerate.
    """
    pr = problem.priors
    r = problem.beta_mod / problem.gamma_mod
    if r == 1.0:
        if pr.eta1 >= pr.eta2:
            return OrthoPrepSolution(1.0, 0.0, pr.eta1, REGIME_DEGENERATE)
        return OrthoPrepSolution(0.0, 1.0, pr.eta2, REGIME_DEGENERATE,
                                 degenerate_posterior=True)
    lo, hi = min(pr.eta1, pr.eta2), max(pr.eta1, pr.eta2)
    if hi > 0.0 and r < math.sqrt(lo / hi):
        p1 = stationary_p1(problem)
        p2 = p2_of_p1(problem, p1)
        p_beta = (1.0 - 2.0 * r * math.sqrt(pr.eta1 * pr.eta2)) / (1.0 - r * r)
        return OrthoPrepSolution(p1, p2, p_beta, REGIME_INTERIOR)
    if pr.eta1 >= pr.eta2:
        return OrthoPrepSolution(1.0, 0.0, pr.eta1, REGIME_BOUNDARY_ETA1)
    return OrthoPrepSolution(0.0, 1.0, pr.eta2, REGIME_BOUNDARY_ETA2,
                             degenerate_posterior=True)


def as_mapping(problem: OrthoPrepProblem,
               p1: float | None = None) -> tuple[MappingProblem, MappingSolution]:
    """Recast in the general solver's vocabulary for synthesis and sampling.

    The regime locks the two target phases a half turn apart; the beta
    phase is set to 0 and the gamma phase to pi. With p1 omitted, the
    optimal point is used.
    """
    if p1 is None:
        opt = optimal(problem)
        p1, p2 = opt.p1, opt.p2
    else:
        p2 = p2_of_p1(problem, p1)
    pr = problem.priors
    mp = MappingProblem(
        alpha=InnerProduct(0.0, 0.0),
        beta=InnerProduct(problem.beta_mod, 0.0),
        gamma=InnerProduct(problem.gamma_mod, math.pi),
        priors=pr,
    )
    p_beta = pr.eta1 * p1 + pr.eta2 * p2
    if p_beta > 0.0:
        posterior = PriorPair(pr.eta1 * p1 / p_beta, pr.eta2 * p2 / p_beta)
    else:
        posterior = pr
    ms = MappingSolution(
        p1=p1,
        p2=p2,
        p_beta=p_beta,
        p_gamma=1.0 - p_beta,
        posterior=posterior,
        assignment=ASSIGN_PLUS_MINUS if p1 >= p2 else ASSIGN_MINUS_PLUS,
        sign_flips=SignFlips(),
    )
    return mp, ms
