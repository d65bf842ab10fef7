"""Seeded Monte Carlo check of a synthesized mapping.

Only two things are random per shot: which input state was prepared
(drawn by the priors) and which ancilla outcome fired (drawn by the exact
branch weight taken from the unitary's action). Conditional states carry
no sampling noise; they are recomputed exactly from the matrix.

Randomness contract: Philox, a counter-based generator with a published
specification. One counter block (four 64-bit words, consumed as four
uniform doubles) is spent per shot: word 0 picks the input, word 1 picks
the outcome, words 2-3 are discarded. Splitting the shot range across
workers and advancing each worker's counter to its start shot therefore
reproduces the single-stream draw exactly, for any partition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .general import MappingProblem, MappingSolution, PriorPair, corrected_targets
from .hilbert import inner
from .synthesis import SynthesisResult, ancilla_projections, _joint_inputs

OVERLAP_TOL = 1e-10


@dataclass(frozen=True)
class SimulationConfig:
    problem: MappingProblem
    solution: MappingSolution
    synthesis: SynthesisResult
    shots: int
    seed: int

    def __post_init__(self):
        if int(self.shots) < 1:
            raise DomainError("shots must be a positive integer")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError("seed must fit an unsigned 64-bit integer")
        object.__setattr__(self, "shots", int(self.shots))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class SimulationReport:
    """Aggregated shot statistics plus the exact-algebra residuals.

    counts[i][o] is the number of shots that prepared input i (0-based)
    and observed ancilla outcome o. empirical_posterior is None when no
    success outcome occurred. Overlap residuals are exact (shot-free)
    deviations of the conditional branch overlaps from the sign-corrected
    targets; a residual is None when the branch carries no weight.
    """

    counts: tuple[tuple[int, int], tuple[int, int]]
    empirical_p_beta: float
    empirical_posterior: PriorPair | None
    success_overlap_residual: float | None
    failure_overlap_residual: float | None
    shots: int
    seed: int


def _branch_weights(config: SimulationConfig) -> tuple[tuple[float, float], ...]:
    """Exact (outcome-0 weight, outcome-1 weight) per input, from U itself."""
    v1, v2 = _joint_inputs(config.problem)
    weights = []
    for v in (v1, v2):
        c0, c1 = ancilla_projections(config.synthesis.U, v)
        weights.append((float(np.vdot(c0, c0).real), float(np.vdot(c1, c1).real)))
    return tuple(weights)


def _overlap_residuals(config: SimulationConfig) -> tuple[float | None, float | None]:
    beta_c, gamma_c = corrected_targets(config.problem,
                                        config.solution.sign_flips)
    v1, v2 = _joint_inputs(config.problem)
    parts = [ancilla_projections(config.synthesis.U, v) for v in (v1, v2)]
    out = []
    for k, target in ((0, beta_c), (1, gamma_c)):
        a, b = parts[0][k], parts[1][k]
        na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
        if na <= OVERLAP_TOL or nb <= OVERLAP_TOL:
            out.append(None)
            continue
        out.append(abs(inner(a / na, b / nb) - target.value))
    return out[0], out[1]


def _chunk_counts(config: SimulationConfig, start: int, n: int,
                  weights) -> np.ndarray:
    bg = np.random.Philox(key=config.seed)
    bg.advance(start)
    draws = np.random.Generator(bg).random((n, 4))
    picked_second = draws[:, 0] >= config.problem.priors.eta1
    p0 = np.where(picked_second, weights[1][0], weights[0][0])
    failed = draws[:, 1] >= p0
    counts = np.zeros((2, 2), dtype=np.int64)
    for i in (0, 1):
        sel = picked_second == bool(i)
        counts[i, 0] = int(np.count_nonzero(sel & ~failed))
        counts[i, 1] = int(np.count_nonzero(sel & failed))
    return counts


def run(config: SimulationConfig, chunks: int = 1) -> SimulationReport:
    """Sample the protocol and aggregate counts.

    `chunks` splits the shot range into that many consecutive worker
    slices; the aggregate is bit-identical for every chunk count by the
    counter-block contract above.
    """
    if chunks < 1 or chunks > config.shots:
        raise DomainError("chunks must be in [1, shots]")
    weights = _branch_weights(config)
    counts = np.zeros((2, 2), dtype=np.int64)
    base, extra = divmod(config.shots, chunks)
    start = 0
    for c in range(chunks):
        n = base + (1 if c < extra else 0)
        counts += _chunk_counts(config, start, n, weights)
        start += n
    n_success = int(counts[0, 0] + counts[1, 0])
    posterior = None
    if n_success > 0:
        posterior = PriorPair(counts[0, 0] / n_success, counts[1, 0] / n_success)
    s_resid, f_resid = _overlap_residuals(config)
    return SimulationReport(
        counts=((int(counts[0, 0]), int(counts[0, 1])),
                (int(counts[1, 0]), int(counts[1, 1]))),
        empirical_p_beta=n_success / config.shots,
        empirical_posterior=posterior,
        success_overlap_residual=s_resid,
        failure_overlap_residual=f_resid,
        shots=config.shots,
        seed=config.seed,
    )


def posterior_check(report: SimulationReport,
                    solution: MappingSolution) -> float:
    """Deviation of the empirical success posterior from the solved one."""
    if report.empirical_posterior is None:
        raise DomainError(
            "no success outcomes observed; the empirical posterior is undefined"
        )
    return abs(report.empirical_posterior.eta1 - solution.posterior.eta1)


def binomial_3sigma(p: float, shots: int) -> float:
    """Half-width of the 3-sigma envelope for a proportion estimate."""
    return 3.0 * math.sqrt(max(p * (1.0 - p), 0.0) / shots)
