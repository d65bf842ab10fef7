"""Finite-dimensional Hilbert space primitives.

Complex column vectors as numpy arrays, physicist's inner product (conjugate
on the left argument), and a modified Gram-Schmidt completion that extends a
set of orthonormal vectors to a full basis deterministically.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import DegenerateInputError, DomainError

NORM_TOL = 1e-12
ORTHO_TOL = 1e-10
# below this residual norm a canonical seed is considered linearly dependent
RANK_TOL = 1e-10


def state(components) -> np.ndarray:
    """Validate and freeze a normalized state vector.

    Accepts any sequence of complex numbers with unit 2-norm (within
    1e-12). Returns a read-only complex128 array so downstream code can
    hold references without defensive copies.
    """
    v = np.asarray(components, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise DomainError("state vector must be a nonempty 1-d sequence")
    n = float(np.linalg.norm(v))
    if abs(n - 1.0) > NORM_TOL:
        raise DomainError(f"state vector norm {n!r} is not 1 within {NORM_TOL}")
    v = v.copy()
    v.flags.writeable = False
    return v


def qubit(theta: float, phi: float) -> np.ndarray:
    """Bloch-angle qubit cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>."""
    return state([math.cos(theta / 2.0), cmath.exp(1j * phi) * math.sin(theta / 2.0)])


def inner(u: np.ndarray, v: np.ndarray) -> complex:
    """<u|v> with the conjugate on u."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise DomainError(f"shape mismatch {u.shape} vs {v.shape}")
    return complex(np.vdot(u, v))


def canonical_phase(z: complex) -> float:
    """Argument of z folded into (-pi, pi]."""
    a = math.atan2(z.imag, z.real)
    if a <= -math.pi:
        a = math.pi
    return a


def complete_orthonormal(vectors, dim: int | None = None) -> np.ndarray:
    """Extend orthonormal `vectors` to a full basis of C^dim.

    The input vectors are kept verbatim as the leading basis members.
    Remaining directions come from modified Gram-Schmidt over the canonical
    basis e_0, e_1, ... in order, skipping any seed whose residual after
    projection falls below 1e-10. Deterministic: same input, same basis.

    Returns a (dim, dim) array whose ROWS are the basis vectors.
    """
    vs = [np.asarray(v, dtype=np.complex128) for v in vectors]
    if dim is None:
        if not vs:
            raise DomainError("need either vectors or an explicit dimension")
        dim = vs[0].shape[0]
    for v in vs:
        if v.shape != (dim,):
            raise DomainError(f"vector shape {v.shape} does not match dim {dim}")
        if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
            raise DegenerateInputError("completion input is not normalized")
    for i in range(len(vs)):
        for j in range(i):
            if abs(inner(vs[j], vs[i])) > ORTHO_TOL:
                raise DegenerateInputError(
                    "completion inputs are not pairwise orthogonal"
                )
    if len(vs) > dim:
        raise DegenerateInputError("more vectors than dimensions")

    basis = list(vs)
    for k in range(dim):
        if len(basis) == dim:
            break
        r = np.zeros(dim, dtype=np.complex128)
        r[k] = 1.0
        # modified Gram-Schmidt: subtract projections one at a time
        for b in basis:
            r = r - inner(b, r) * b
        n = float(np.linalg.norm(r))
        if n < RANK_TOL:
            continue
        basis.append(r / n)
    if len(basis) != dim:
        raise DegenerateInputError("canonical seeds failed to complete the basis")
    out = np.array(basis)
    out.flags.writeable = False
    return out


def is_unitary(m: np.ndarray, tol: float = ORTHO_TOL) -> bool:
    """True when m is square and m m† = 1 within tol (max-abs deviation)."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    d = m @ m.conj().T - np.eye(m.shape[0])
    return float(np.max(np.abs(d))) <= tol
