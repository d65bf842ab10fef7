"""Uses of the mapping machinery: extra-copy cloning and state deleting.

Cloning of one of two known states reduces entirely to inner products:
m extra copies shrink the success-target overlap to alpha^(m+1), with the
failure target pushed onto the unit circle so nothing is learned when the
herald fails. Deleting sends both targets to the unit circle, collapsing
the encoded distinction on every branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleError
from .general import (InnerProduct, MappingProblem, PriorPair, SignFlips,
                      solve_general)

EQUAL_PRIORS = PriorPair(0.5, 0.5)


@dataclass(frozen=True)
class CloningSpec:
    """Input overlap plus the number of extra copies requested."""

    alpha: InnerProduct
    m: int

    def __post_init__(self):
        if int(self.m) < 1:
            raise DomainError("m must be a positive integer")
        object.__setattr__(self, "m", int(self.m))


@dataclass(frozen=True)
class DeletingReport:
    """Witness for mapping both states onto unit-modulus targets.

    total_delete_prob is the probability that the branch taken carries a
    unit-modulus overlap; with both targets on the unit circle it is 1
    whenever the witness exists at all.
    """

    regime: str
    feasible: bool
    p1: float
    p2: float
    theta_beta: float
    theta_gamma: float
    sign_flips: SignFlips
    total_delete_prob: float
    degenerate: bool = False


def cloning_problem(spec: CloningSpec, priors: PriorPair = EQUAL_PRIORS,
                    gamma_sign: int = 1) -> MappingProblem:
    """Mapping problem whose success branch emits m extra copies.

    Success target: overlap alpha^(m+1) (tensor-power Gram value). Failure
    target: unit modulus, a quarter turn off the success phase; gamma_sign
    picks which side. Phase collisions for special input phases are left
    to check_independence; they are reported there, never silently moved.
    """
    if spec.alpha.modulus >= 1.0:
        raise DomainError("identical inputs (modulus 1) cannot be cloned")
    if gamma_sign not in (1, -1):
        raise DomainError("gamma_sign must be +1 or -1")
    out_phase = (spec.m + 1) * spec.alpha.phase
    beta = InnerProduct(spec.alpha.modulus ** (spec.m + 1), out_phase)
    gamma = InnerProduct(1.0, out_phase + gamma_sign * math.pi / 2.0)
    return MappingProblem(alpha=spec.alpha, beta=beta, gamma=gamma,
                          priors=priors)


def _phase_grid_best(alpha_mod: float, beta_mod: float, gap: float,
                     tb_lo: float, tb_hi: float, tg_lo: float, tg_hi: float,
                     n: int) -> tuple[float, float, float]:
    tb = np.linspace(tb_lo, tb_hi, n)
    tg = np.linspace(tg_lo, tg_hi, n)
    TB, TG = np.meshgrid(tb, tg, indexing="ij")
    with np.errstate(divide="ignore", invalid="ignore"):
        x = alpha_mod * np.sin(TG) / (beta_mod * np.sin(TG - TB))
        y = alpha_mod * np.sin(TB) / np.sin(TB - TG)
        ax, ay = np.abs(x), np.abs(y)
        feasible = np.isfinite(ax) & np.isfinite(ay) & (ax + ay <= 1.0)
        disc = (1.0 - (ax + ay) ** 2) * (1.0 - (ax - ay) ** 2)
        p = (1.0 + x * x - y * y) / 2.0 + gap * np.sqrt(np.clip(disc, 0.0, None)) / 2.0
    p = np.where(feasible, p, -np.inf)
    k = int(np.argmax(p))
    i, j = divmod(k, n)
    return float(p[i, j]), float(TB[i, j]), float(TG[i, j])


def best_probability_at_fixed_beta(alpha_mod: float, beta_mod: float,
                                   priors: PriorPair = EQUAL_PRIORS,
                                   coarse: int = 401,
                                   zoom: int = 201,
                                   stages: int = 3) -> float:
    """Best success probability over free output phases at fixed moduli.

    Fixes |beta| = beta_mod and |gamma| = 1 (input phase set to zero
    without loss) and maximizes over both output phases. Coarse sweep of
    the phase square followed by geometrically shrinking zoom stages
    around the running winner; small beta_mod squeezes the feasible set
    into a sliver whose ridge needs the extra stages to resolve. Raises
    InfeasibleError when no phase choice is feasible.
    """
    if not 0.0 < alpha_mod < 1.0:
        raise DomainError("alpha_mod must lie strictly inside (0, 1)")
    if not 0.0 < beta_mod <= 1.0:
        raise DomainError("beta_mod must lie in (0, 1]")
    gap = abs(priors.eta1 - priors.eta2)
    pad = 1e-4
    best, tb, tg = _phase_grid_best(alpha_mod, beta_mod, gap,
                                    pad, math.pi - pad, pad, math.pi - pad,
                                    coarse)
    if not math.isfinite(best):
        raise InfeasibleError(
            f"no feasible output phases at alpha_mod={alpha_mod}, "
            f"beta_mod={beta_mod}"
        )
    step = (math.pi - 2.0 * pad) / (coarse - 1)
    for _ in range(stages):
        lo_b = max(pad, tb - 2.0 * step)
        hi_b = min(math.pi - pad, tb + 2.0 * step)
        lo_g = max(pad, tg - 2.0 * step)
        hi_g = min(math.pi - pad, tg + 2.0 * step)
        cand, cand_tb, cand_tg = _phase_grid_best(
            alpha_mod, beta_mod, gap, lo_b, hi_b, lo_g, hi_g, zoom)
        if cand > best:
            best, tb, tg = cand, cand_tb, cand_tg
        step = (hi_b - lo_b) / (zoom - 1)
    return best


def optimal_cloning_probability(alpha_mod: float, m: int,
                                priors: PriorPair = EQUAL_PRIORS,
                                coarse: int = 401, zoom: int = 201) -> float:
    """Best cloning success probability over the free output phases.

    Clone-register global phases are unobservable, so the physically
    meaningful figure fixes only |beta| = alpha_mod^(m+1) and |gamma| = 1
    and maximizes over both output phases.
    """
    if not 0.0 < alpha_mod < 1.0:
        raise DomainError("alpha_mod must lie strictly inside (0, 1)")
    return best_probability_at_fixed_beta(alpha_mod, alpha_mod ** (m + 1),
                                          priors, coarse, zoom)


def deleting_check(alpha: InnerProduct, regime: str) -> DeletingReport:
    """Witness (or refute) mapping both inputs onto unit-modulus targets.

    general: both target phases are placed symmetrically about the input
    phase, half-spread chosen so the feasibility margin is strict; the
    witness follows from the general solver. A modulus-0 input uses the
    half-turn target pair instead, and a modulus-1 input is reported as
    trivially deleted (single ray already).

    real: branch weights (p1, p2) = (alpha^2, 1) satisfy the constraint
    for any real input value, with a sign flip absorbing a negative input.
    Equal unit weights would force the input overlap to 1, so they are
    never reported as the witness.
    """
    a = alpha.modulus
    if regime == "real":
        signed = a if abs(alpha.phase) < math.pi / 2.0 else -a
        return DeletingReport(
            regime=regime, feasible=True, p1=a * a, p2=1.0,
            theta_beta=0.0, theta_gamma=0.0,
            sign_flips=SignFlips(beta=signed < 0.0),
            total_delete_prob=1.0, degenerate=a == 1.0,
        )
    if regime != "general":
        raise DomainError(f"unknown regime {regime!r}")
    if a == 1.0:
        return DeletingReport(
            regime=regime, feasible=True, p1=1.0, p2=1.0,
            theta_beta=alpha.phase, theta_gamma=alpha.phase,
            sign_flips=SignFlips(), total_delete_prob=1.0, degenerate=True,
        )
    if a == 0.0:
        return DeletingReport(
            regime=regime, feasible=True, p1=0.5, p2=0.5,
            theta_beta=alpha.phase,
            theta_gamma=InnerProduct(1.0, alpha.phase + math.pi).phase,
            sign_flips=SignFlips(), total_delete_prob=1.0,
        )
    half = math.acos((1.0 + a) / 2.0)
    beta = InnerProduct(1.0, alpha.phase + half)
    gamma = InnerProduct(1.0, alpha.phase - half)
    best, _ = solve_general(MappingProblem(alpha, beta, gamma, EQUAL_PRIORS))
    return DeletingReport(
        regime=regime, feasible=True, p1=best.p1, p2=best.p2,
        theta_beta=beta.phase, theta_gamma=gamma.phase,
        sign_flips=best.sign_flips, total_delete_prob=1.0,
    )
