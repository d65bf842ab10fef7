"""Solver for heralded two-state overlap mapping with complex targets.

Given two pure states with inner product alpha and target inner products
beta (success branch) and gamma (failure branch), a joint unitary on the
system plus a flagged ancilla realizes the map with branch probabilities
p1, p2 constrained by

    sqrt(p1 p2) * beta + sqrt((1-p1)(1-p2)) * gamma = alpha.

This module classifies feasibility, solves for the probability pair, picks
the prior-weighted optimal branch assignment, and evaluates the closed-form
quantities built on top of that solution (success-probability bounds,
unambiguous-discrimination comparison, first-order phase sensitivity).

Conventions: inner products are stored in polar form with the phase folded
into (-pi, pi]. x and y denote the two real combinations fixed by the
phases; they may come out negative, in which case the corresponding target
is redefined by a pi phase flip (same ray) and the flip is recorded.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DegenerateInputError, DomainError, InfeasibleError

PHASE_TOL = 1e-9
PRIOR_TOL = 1e-12
FEAS_TOL = 1e-12

ORDER_ALPHA_SMALLEST = "alpha-smallest"
ORDER_ALPHA_MIDDLE = "alpha-middle"
ORDER_NEITHER = "neither"

ASSIGN_PLUS_MINUS = "plus-minus"
ASSIGN_MINUS_PLUS = "minus-plus"


def _fold_phase(phase: float) -> float:
    r = math.remainder(phase, math.tau)
    if r <= -math.pi:
        r += math.tau
    return r


@dataclass(frozen=True)
class InnerProduct:
    """Polar form of a complex inner product, modulus in [0,1]."""

    modulus: float
    phase: float = 0.0

    def __post_init__(self):
        m = float(self.modulus)
        if not math.isfinite(m) or m < 0.0 or m > 1.0 + 1e-12:
            raise DomainError(f"inner product modulus {m!r} outside [0, 1]")
        object.__setattr__(self, "modulus", min(m, 1.0))
        object.__setattr__(self, "phase", _fold_phase(float(self.phase)))

    @property
    def value(self) -> complex:
        return self.modulus * cmath.exp(1j * self.phase)

    def flipped(self) -> "InnerProduct":
        """Same ray, opposite sign: phase advanced by pi."""
        return InnerProduct(self.modulus, self.phase + math.pi)


@dataclass(frozen=True)
class PriorPair:
    """Preparation probabilities of the two inputs; must sum to 1."""

    eta1: float
    eta2: float

    def __post_init__(self):
        e1, e2 = float(self.eta1), float(self.eta2)
        if e1 < 0.0 or e2 < 0.0:
            raise DomainError("priors must be nonnegative")
        if abs(e1 + e2 - 1.0) > PRIOR_TOL:
            raise DomainError(f"priors sum to {e1 + e2!r}, expected 1")
        object.__setattr__(self, "eta1", e1)
        object.__setattr__(self, "eta2", e2)


@dataclass(frozen=True)
class MappingProblem:
    """One mapping instance: input overlap, two targets, priors.

    Feasibility is a computed property of the phases and moduli, not a
    constructor constraint; infeasible problems are legal values that the
    solvers reject with a diagnostic.
    """

    alpha: InnerProduct
    beta: InnerProduct
    gamma: InnerProduct
    priors: PriorPair


@dataclass(frozen=True)
class XYCoefficients:
    """Signed solutions of the two phase-projection relations."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError("x and y must be finite")


@dataclass(frozen=True)
class SignFlips:
    """Which targets took a pi phase absorption to make x, y nonnegative."""

    beta: bool = False
    gamma: bool = False


@dataclass(frozen=True)
class MappingSolution:
    p1: float
    p2: float
    p_beta: float
    p_gamma: float
    posterior: PriorPair
    assignment: str  # ASSIGN_PLUS_MINUS or ASSIGN_MINUS_PLUS
    sign_flips: SignFlips


@dataclass(frozen=True)
class UsdProbability:
    """Raw unambiguous-discrimination success probability plus validity.

    The closed form is reported as computed; `valid` records whether it is
    a probability at all (nonnegative). No silent clamping.
    """

    value: float
    valid: bool


def check_independence(problem: MappingProblem) -> bool:
    """True iff the three products keep both state pairs independent.

    Requires every modulus nonzero and every pairwise phase difference
    away from all integer multiples of pi (angular tolerance 1e-9).
    """
    trio = (problem.alpha, problem.beta, problem.gamma)
    if any(ip.modulus == 0.0 for ip in trio):
        return False
    phases = [ip.phase for ip in trio]
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(math.remainder(phases[i] - phases[j], math.pi)) <= PHASE_TOL:
                return False
    return True


def xy_coefficients(problem: MappingProblem) -> XYCoefficients:
    """Project the constraint onto the two target directions.

    x carries the weight of the success target, y of the failure target:
        x = |a| sin(tg - ta) / (|b| sin(tg - tb))
        y = |a| sin(tb - ta) / (|g| sin(tb - tg))
    Signs are preserved; negative values are handled downstream by ray
    redefinition of the corresponding target.
    """
    if not check_independence(problem):
        raise DegenerateInputError(
            "inputs violate independence: a vanishing product modulus or a "
            "phase difference at a multiple of pi leaves x, y undetermined"
        )
    ta, tb, tg = problem.alpha.phase, problem.beta.phase, problem.gamma.phase
    x = problem.alpha.modulus * math.sin(tg - ta) / (
        problem.beta.modulus * math.sin(tg - tb)
    )
    y = problem.alpha.modulus * math.sin(tb - ta) / (
        problem.gamma.modulus * math.sin(tb - tg)
    )
    return XYCoefficients(x, y)


def feasibility_excess(xy: XYCoefficients) -> float:
    """|x| + |y| - 1; feasible iff this is <= 0 (within 1e-12)."""
    return abs(xy.x) + abs(xy.y) - 1.0


def pm_probabilities(xy: XYCoefficients) -> tuple[float, float]:
    """Both roots of the branch-probability quadratic, larger first.

    The pair (p+, p-) satisfies p+ + p- = 1 + x^2 - y^2 and p+ p- = x^2.
    Raises InfeasibleError carrying the excess when |x| + |y| > 1.
    """
    ax, ay = abs(xy.x), abs(xy.y)
    excess = ax + ay - 1.0
    if excess > FEAS_TOL:
        err = InfeasibleError(
            f"no physical branch probabilities: |x| + |y| = {ax + ay:.12g} "
            f"exceeds 1 by {excess:.3g}"
        )
        err.excess = excess
        raise err
    s = 1.0 + xy.x * xy.x - xy.y * xy.y
    # discriminant in factored form; exact zero at the feasibility boundary
    disc = (1.0 - (ax + ay) ** 2) * (1.0 - (ax - ay) ** 2)
    root = math.sqrt(max(disc, 0.0))
    p_plus = min(1.0, max(0.0, (s + root) / 2.0))
    p_minus = min(1.0, max(0.0, (s - root) / 2.0))
    return p_plus, p_minus


def _solution(p1: float, p2: float, priors: PriorPair, assignment: str,
              flips: SignFlips) -> MappingSolution:
    p_beta = priors.eta1 * p1 + priors.eta2 * p2
    if p_beta > 0.0:
        posterior = PriorPair(priors.eta1 * p1 / p_beta, priors.eta2 * p2 / p_beta)
    else:
        # success never fires; conditioning is vacuous, keep the prior
        posterior = priors
    return MappingSolution(
        p1=p1,
        p2=p2,
        p_beta=p_beta,
        p_gamma=1.0 - p_beta,
        posterior=posterior,
        assignment=assignment,
        sign_flips=flips,
    )


def solve_general(problem: MappingProblem) -> tuple[MappingSolution, MappingSolution]:
    """Solve the mapping and rank the two branch assignments.

    Returns (best, alt). The winning assignment pairs the larger branch
    probability with the larger prior, achieving

        P = (1 + x^2 - y^2)/2 + |eta1 - eta2| sqrt(disc)/2.
    """
    xy = xy_coefficients(problem)
    p_plus, p_minus = pm_probabilities(xy)
    flips = SignFlips(beta=xy.x < 0.0, gamma=xy.y < 0.0)
    pr = problem.priors
    plus_first = _solution(p_plus, p_minus, pr, ASSIGN_PLUS_MINUS, flips)
    minus_first = _solution(p_minus, p_plus, pr, ASSIGN_MINUS_PLUS, flips)
    if pr.eta1 >= pr.eta2:
        return plus_first, minus_first
    return minus_first, plus_first


def corrected_targets(problem: MappingProblem,
                      flips: SignFlips) -> tuple[InnerProduct, InnerProduct]:
    """Targets actually realized after sign absorption (same rays)."""
    beta = problem.beta.flipped() if flips.beta else problem.beta
    gamma = problem.gamma.flipped() if flips.gamma else problem.gamma
    return beta, gamma


def constraint_residual(problem: MappingProblem,
                        solution: MappingSolution) -> complex:
    """Ground-truth check: alpha minus the realized combination.

    Evaluates alpha - [sqrt(p1 p2) beta' + sqrt((1-p1)(1-p2)) gamma'] with
    the sign-corrected targets; any valid solution drives this below 1e-10
    in both components.
    """
    beta, gamma = corrected_targets(problem, solution.sign_flips)
    w_b = math.sqrt(max(solution.p1 * solution.p2, 0.0))
    w_g = math.sqrt(max((1.0 - solution.p1) * (1.0 - solution.p2), 0.0))
    return problem.alpha.value - (w_b * beta.value + w_g * gamma.value)


def check_modulus_ordering(problem: MappingProblem) -> str:
    """Classify the modulus chain that gates feasibility.

    After relabeling so the failure target carries the larger modulus, the
    feasible configurations put the input overlap either strictly below
    both targets or between them. Anything else (in particular both targets
    at or below the input) admits no solution.
    """
    a = problem.alpha.modulus
    lo = min(problem.beta.modulus, problem.gamma.modulus)
    hi = max(problem.beta.modulus, problem.gamma.modulus)
    if a < lo:
        return ORDER_ALPHA_SMALLEST
    if a <= hi and not (a == lo == hi):
        # ties with the smaller target are reachable at suitable phases,
        # so they stay classified as feasible-side
        return ORDER_ALPHA_MIDDLE
    return ORDER_NEITHER


def beta_lower_bound(alpha: InnerProduct, theta_beta: float) -> float:
    """Least success-target modulus reachable in the quadrature family.

    Holds for the one-parameter family that places the failure target a
    quarter turn from the success target on the unit circle. The bound is
        |a| |cos(ta - tb)| / (1 - |a| |sin(ta - tb)|)
    and the quarter-turn phase differences ta - tb = +-pi/2 are excluded
    (the family degenerates there).
    """
    d = alpha.phase - _fold_phase(theta_beta)
    c = math.cos(d)
    if abs(math.remainder(d - math.pi / 2.0, math.pi)) <= PHASE_TOL:
        raise DomainError(
            "phase difference at an odd quarter turn: the quadrature-family "
            "bound is undefined there"
        )
    return alpha.modulus * abs(c) / (1.0 - alpha.modulus * abs(math.sin(d)))


def p_at_beta_min(alpha: InnerProduct, theta: float) -> float:
    """Equal-prior success probability at the least feasible |beta|.

    `theta` is the phase lead of the input overlap over the success target.
    The branch sign switches where |sin theta| crosses |alpha|; at the
    boundary both branches coincide. The result collapses analytically to
    1 - |alpha| |sin theta|, and this function evaluates the explicit
    two-branch closed form so the identity stays testable.
    """
    b = beta_lower_bound(alpha, alpha.phase - theta)
    b2 = b * b
    disc = alpha.modulus**2 * (1.0 + b2) - b2
    if disc < -1e-12:
        raise DomainError(f"negative discriminant {disc:.3g} at the bound")
    root = math.sqrt(max(disc, 0.0))
    sign = -1.0 if abs(math.sin(theta)) < alpha.modulus else 1.0
    return 1.0 - (b2 + sign * root) / (1.0 + b2)


def usd_probability(alpha: InnerProduct, priors: PriorPair) -> UsdProbability:
    """Unambiguous-discrimination success probability for comparison.

    Returns 1 - 2 sqrt(eta1 eta2) |alpha| as computed, with a flag that
    records whether the value is a valid probability.
    """
    value = 1.0 - 2.0 * math.sqrt(priors.eta1 * priors.eta2) * alpha.modulus
    return UsdProbability(value=value, valid=value >= 0.0)


def phase_sensitivity(problem: MappingProblem) -> float:
    """First-order response of the optimal success probability to the
    success-target phase leaving the input phase.

    With tb = ta + d, returns dP/dd at d = 0:
        (|a|^2/|b|^2) * cot(tg - ta) * (1 + s |eta1 - eta2|),
    s = +1 when |a| > |b| and -1 when |a| < |b|. Evaluated with a sine and
    cosine pair, so a quarter-turn tg - ta gives exactly the vanishing
    coefficient instead of an infinite tangent.
    """
    a, b = problem.alpha.modulus, problem.beta.modulus
    if b == 0.0:
        raise DomainError("success target modulus must be nonzero")
    if abs(a - b) <= 1e-12:
        raise DomainError("sensitivity branch undefined at |alpha| = |beta|")
    d = problem.gamma.phase - problem.alpha.phase
    s_d, c_d = math.sin(d), math.cos(d)
    if abs(math.remainder(d, math.pi)) <= PHASE_TOL:
        raise DomainError(
            "input and failure-target phases collide modulo pi; the "
            "expansion direction is degenerate"
        )
    gap = abs(problem.priors.eta1 - problem.priors.eta2)
    branch = 1.0 + gap if a > b else 1.0 - gap
    return (a * a) / (b * b) * (c_d / s_d) * branch
