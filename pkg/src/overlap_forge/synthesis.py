"""Explicit joint unitary realizing a solved mapping on qubit + ancilla.

A solved problem fixes branch probabilities and targets; this module builds
concrete 2-dimensional representatives of the states, forms the two joint
input and output vectors, and extends the input-to-output assignment to a
full 4x4 unitary by completing both frames. Everything is deterministic:
fixed ancilla start state, fixed embedding convention, fixed completion
seed order.

Joint index convention: kron(system, ancilla), so component 2*i_s + i_a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InconsistentSolutionError
from .general import (InnerProduct, MappingProblem, MappingSolution,
                      corrected_targets)
from .hilbert import complete_orthonormal, inner, is_unitary, state

GRAM_TOL = 1e-10
ACTION_TOL = 1e-10
SPAN_TOL = 1e-10


@dataclass(frozen=True)
class EmbeddedPair:
    """Canonical 2-dimensional representatives of a given overlap.

    First state real and positive along e0; the second carries the whole
    overlap phase.
    """

    s1: np.ndarray
    s2: np.ndarray
    target_overlap: InnerProduct


@dataclass(frozen=True)
class SynthesisResult:
    U: np.ndarray
    branch_images: tuple[np.ndarray, np.ndarray]
    ancilla_basis: tuple[int, int] = (0, 1)


@dataclass(frozen=True)
class ActionReport:
    """Outcome of re-deriving the mapping from the matrix itself."""

    unitary_ok: bool
    branch_prob_ok: bool
    success_overlap_ok: bool
    failure_overlap_ok: bool
    max_prob_residual: float
    success_overlap_residual: float | None
    failure_overlap_residual: float | None

    @property
    def ok(self) -> bool:
        return (self.unitary_ok and self.branch_prob_ok
                and self.success_overlap_ok and self.failure_overlap_ok)


def embed_pair(overlap: InnerProduct) -> EmbeddedPair:
    """Two qubit states whose inner product is exactly `overlap`."""
    z = overlap.value
    s1 = state([1.0, 0.0])
    s2 = state([z, math.sqrt(max(0.0, 1.0 - abs(z) ** 2))])
    return EmbeddedPair(s1=s1, s2=s2, target_overlap=overlap)


def _joint_inputs(problem: MappingProblem) -> tuple[np.ndarray, np.ndarray]:
    pair = embed_pair(problem.alpha)
    anc = np.array([1.0, 0.0], dtype=np.complex128)  # fixed ancilla start
    return np.kron(pair.s1, anc), np.kron(pair.s2, anc)


def _branch_images(problem: MappingProblem,
                   solution: MappingSolution) -> tuple[np.ndarray, np.ndarray]:
    beta_c, gamma_c = corrected_targets(problem, solution.sign_flips)
    bpair = embed_pair(beta_c)
    gpair = embed_pair(gamma_c)
    anc0 = np.array([1.0, 0.0], dtype=np.complex128)
    anc1 = np.array([0.0, 1.0], dtype=np.complex128)
    ws = []
    for s_beta, s_gamma, p in ((bpair.s1, gpair.s1, solution.p1),
                               (bpair.s2, gpair.s2, solution.p2)):
        w = (math.sqrt(p) * np.kron(s_beta, anc0)
             + math.sqrt(1.0 - p) * np.kron(s_gamma, anc1))
        ws.append(w)
    return ws[0], ws[1]


def _orthonormal_frame(u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    """Full basis whose first two members span {u1, u2}, u1 kept verbatim."""
    r = u2 - inner(u1, u2) * u1
    n = float(np.linalg.norm(r))
    if n < SPAN_TOL:
        raise DegenerateInputError(
            "joint vectors are parallel; the two inputs do not span a plane"
        )
    return complete_orthonormal([u1, r / n], dim=u1.shape[0])


def synthesize(problem: MappingProblem,
               solution: MappingSolution) -> SynthesisResult:
    """Build the 4x4 joint unitary sending each input to its branch image.

    Both Gram matrices must agree (the constraint equation in disguise);
    a mismatch means the solution does not actually solve the problem and
    raises InconsistentSolutionError.
    """
    v1, v2 = _joint_inputs(problem)
    w1, w2 = _branch_images(problem, solution)
    g_in = inner(v1, v2)
    g_out = inner(w1, w2)
    if abs(g_in - problem.alpha.value) > GRAM_TOL:
        raise InconsistentSolutionError(
            f"input Gram {g_in:.12g} deviates from the overlap"
        )
    if abs(g_out - g_in) > GRAM_TOL:
        raise InconsistentSolutionError(
            f"output Gram {g_out:.12g} deviates from input Gram {g_in:.12g}; "
            "the branch probabilities do not satisfy the constraint"
        )
    v_frame = _orthonormal_frame(v1, v2)
    w_frame = _orthonormal_frame(w1, w2)
    u = w_frame.T @ v_frame.conj()
    u.flags.writeable = False
    w1c, w2c = w1.copy(), w2.copy()
    w1c.flags.writeable = False
    w2c.flags.writeable = False
    return SynthesisResult(U=u, branch_images=(w1c, w2c))


def ancilla_projections(u: np.ndarray,
                        joint_input: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized system components on ancilla outcomes 0 and 1."""
    out = u @ joint_input
    return out[0::2], out[1::2]


def verify_action(result: SynthesisResult, problem: MappingProblem,
                  solution: MappingSolution) -> ActionReport:
    """Re-derive probabilities and conditional overlaps from the matrix.

    Projects U applied to each joint input onto the ancilla basis, compares
    the branch weights with the solved probabilities, and compares the
    normalized conditional overlaps with the sign-corrected targets. A
    branch that carries no weight for either input leaves its overlap check
    vacuous (reported as None, counted as passing).
    """
    beta_c, gamma_c = corrected_targets(problem, solution.sign_flips)
    v1, v2 = _joint_inputs(problem)
    expected = (solution.p1, solution.p2)
    conds0, conds1 = [], []
    max_resid = 0.0
    for v, p in zip((v1, v2), expected):
        c0, c1 = ancilla_projections(result.U, v)
        w0 = float(np.vdot(c0, c0).real)
        w1 = float(np.vdot(c1, c1).real)
        max_resid = max(max_resid, abs(w0 - p), abs(w1 - (1.0 - p)))
        conds0.append(c0 / math.sqrt(w0) if w0 > ACTION_TOL else None)
        conds1.append(c1 / math.sqrt(w1) if w1 > ACTION_TOL else None)
    s_resid = f_resid = None
    if conds0[0] is not None and conds0[1] is not None:
        s_resid = abs(inner(conds0[0], conds0[1]) - beta_c.value)
    if conds1[0] is not None and conds1[1] is not None:
        f_resid = abs(inner(conds1[0], conds1[1]) - gamma_c.value)
    return ActionReport(
        unitary_ok=is_unitary(result.U, ACTION_TOL),
        branch_prob_ok=max_resid <= ACTION_TOL,
        success_overlap_ok=s_resid is None or s_resid <= ACTION_TOL,
        failure_overlap_ok=f_resid is None or f_resid <= ACTION_TOL,
        max_prob_residual=max_resid,
        success_overlap_residual=s_resid,
        failure_overlap_residual=f_resid,
    )
