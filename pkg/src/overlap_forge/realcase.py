"""All-real inner products: the phase-conditioned regime.

When every product is real (phases at 0 or pi) the constraint no longer
pins the probability pair to two points; p2 becomes a two-branch function
of p1 on a feasible interval and the optimum is found by scalar search.
Negative values ride on the same pi-flip absorption as the general solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InconsistentSolutionError, InfeasibleError
from .general import (ASSIGN_MINUS_PLUS, ASSIGN_PLUS_MINUS, InnerProduct,
                      MappingProblem, MappingSolution, PriorPair, SignFlips)

GRID_POINTS = 10_000
REFINE_TOL = 1e-10
RADICAND_TOL = 1e-12
# the feasible interval is open at 0; sweeps start here instead
EDGE_EPS = 1e-12

BRANCH_PLUS = "+"
BRANCH_MINUS = "-"

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RealCaseProblem:
    """Real overlap triple with priors, canonically oriented.

    Construction relabels the targets so the success branch carries the
    smaller magnitude and sets `swapped` when it did; all solver outputs
    refer to the canonical orientation (branch roles exchange under the
    swap, probabilities p_i trade places with 1 - p_i).
    """

    alpha: float
    beta: float
    gamma: float
    priors: PriorPair
    swapped: bool = False

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = float(getattr(self, name))
            if not -1.0 <= v <= 1.0:
                raise DomainError(f"{name} = {v!r} outside [-1, 1]")
            object.__setattr__(self, name, v)
        if abs(self.beta) > abs(self.gamma):
            b, g = self.beta, self.gamma
            object.__setattr__(self, "beta", g)
            object.__setattr__(self, "gamma", b)
            object.__setattr__(self, "swapped", True)


@dataclass(frozen=True)
class RealCaseSolution:
    p1_star: float
    p2_star: float
    p_beta: float
    branch: str


def _moduli(problem: RealCaseProblem) -> tuple[float, float, float]:
    return abs(problem.alpha), abs(problem.beta), abs(problem.gamma)


def feasible_interval(problem: RealCaseProblem) -> tuple[float, float]:
    """Interval of p1 values admitting a p2 solution, open at the low end.

    Exists only when at least one target magnitude exceeds the input's;
    otherwise the map would shrink both branches below the input overlap,
    which no unitary allows.
    """
    a, b, g = _moduli(problem)
    if g <= a:
        raise InfeasibleError(
            "both target magnitudes are at most the input overlap "
            f"magnitude {a:.6g}; no branch assignment is realizable"
        )
    num = g * g - a * a
    den = g * g - b * b
    hi = 1.0 if den == 0.0 else min(num / den, 1.0)
    return 0.0, hi


def p2_pm(problem: RealCaseProblem, p1: float) -> tuple[float, float]:
    """Both p2 branches at the given p1, plus branch first.

    The branches coincide at the upper end of the feasible interval, where
    the square-root term closes. A p1 outside the interval surfaces as a
    negative radicand.
    """
    a, b, g = _moduli(problem)
    if not 0.0 <= p1 <= 1.0:
        raise DomainError(f"p1 = {p1!r} outside [0, 1]")
    rad = (g * g - a * a) - (g * g - b * b) * p1
    if rad < -RADICAND_TOL:
        raise DomainError(
            f"p1 = {p1!r} lies outside the feasible interval "
            f"(radicand {rad:.3g})"
        )
    rad = max(rad, 0.0)
    c = g * g - (g * g - b * b) * p1
    if c == 0.0:
        raise DomainError("degenerate denominator: zero beta with p1 = 1")
    term_a = a * b * math.sqrt(p1)
    term_b = g * math.sqrt((1.0 - p1) * rad)
    p2_plus = ((term_a + term_b) / c) ** 2
    p2_minus = ((term_a - term_b) / c) ** 2
    return min(p2_plus, 1.0), min(p2_minus, 1.0)


def residual_with_signs(problem: RealCaseProblem, p1: float,
                        p2: float) -> tuple[float, tuple[int, int]]:
    """Smallest constraint residual over the four target sign choices.

    Returns (|residual|, (s_beta, s_gamma)) where the signs mark which
    ray representatives of the targets satisfy
    sqrt(p1 p2) s_b |beta| + sqrt((1-p1)(1-p2)) s_g |gamma| = alpha.
    """
    _, b, g = _moduli(problem)
    w_b = math.sqrt(max(p1 * p2, 0.0))
    w_g = math.sqrt(max((1.0 - p1) * (1.0 - p2), 0.0))
    best = (math.inf, (1, 1))
    for sb in (1, -1):
        for sg in (1, -1):
            r = abs(problem.alpha - (w_b * sb * b + w_g * sg * g))
            if r < best[0]:
                best = (r, (sb, sg))
    return best


def _golden_max(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    # golden-section search for a maximum on [lo, hi]
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    mid = 0.5 * (a + b)
    return mid, f(mid)


def optimize(problem: RealCaseProblem) -> RealCaseSolution:
    """Maximize eta1 p1 + eta2 p2_plus(p1) over the feasible interval.

    Deterministic scheme: a 10^4-point grid locates the basin, then
    golden-section refines the bracket to width 1e-10. The returned value
    never falls below the best grid evaluation.
    """
    _, hi = feasible_interval(problem)
    lo = EDGE_EPS
    pr = problem.priors

    def objective(p1: float) -> float:
        return pr.eta1 * p1 + pr.eta2 * p2_pm(problem, p1)[0]

    step = (hi - lo) / (GRID_POINTS - 1)
    best_i, best_p1, best_val = 0, lo, -math.inf
    for i in range(GRID_POINTS):
        p1 = lo + i * step
        v = objective(p1)
        if v > best_val:
            best_i, best_p1, best_val = i, p1, v
    b_lo = max(lo, lo + (best_i - 1) * step)
    b_hi = min(hi, lo + (best_i + 1) * step)
    p1_ref, val_ref = _golden_max(objective, b_lo, b_hi, REFINE_TOL)
    if val_ref >= best_val:
        p1_star, p_beta = p1_ref, val_ref
    else:
        p1_star, p_beta = best_p1, best_val
    p2_star = p2_pm(problem, p1_star)[0]
    return RealCaseSolution(p1_star=p1_star, p2_star=p2_star,
                            p_beta=p_beta, branch=BRANCH_PLUS)


def _sign_phase(v: float) -> float:
    return 0.0 if v >= 0.0 else math.pi


def as_mapping(problem: RealCaseProblem,
               p1: float | None = None) -> tuple[MappingProblem, MappingSolution]:
    """Recast a real-regime point in the general solver's vocabulary.

    Negative products become pi phases; the realized target signs found by
    the residual search are recorded as flips relative to the stored ones.
    With p1 omitted, the optimizer's point is used (plus branch).
    """
    if p1 is None:
        opt = optimize(problem)
        p1, p2 = opt.p1_star, opt.p2_star
    else:
        p2 = p2_pm(problem, p1)[0]
    resid, (sb, sg) = residual_with_signs(problem, p1, p2)
    if resid > 1e-8:
        raise InconsistentSolutionError(
            f"no target sign choice satisfies the constraint (residual {resid:.3g})"
        )
    mp = MappingProblem(
        alpha=InnerProduct(abs(problem.alpha), _sign_phase(problem.alpha)),
        beta=InnerProduct(abs(problem.beta), _sign_phase(problem.beta)),
        gamma=InnerProduct(abs(problem.gamma), _sign_phase(problem.gamma)),
        priors=problem.priors,
    )
    flips = SignFlips(
        beta=problem.beta != 0.0 and (sb < 0) != (problem.beta < 0),
        gamma=problem.gamma != 0.0 and (sg < 0) != (problem.gamma < 0),
    )
    pr = problem.priors
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
        sign_flips=flips,
    )
    return mp, ms
