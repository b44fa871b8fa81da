"""Small dense matrix and superoperator calculus for one qubit (plus ancilla).

Conventions
-----------
Vectorization is column stacking: ``vec(rho) = (rho00, rho10, rho01, rho11)``
for a qubit, so that ``vec(A @ X @ B) == kron(B.T, A) @ vec(X)``.
Every superoperator in the package is a ``(d*d, d*d)`` complex array acting on
such column-stacked vectors.

The computational basis is ordered ``(|0>, |1>) = (ground, excited)``, hence
``sigma_z = |1><1| - |0><0| = diag(-1, 1)``, ``sigma_plus = |1><0|`` and
``sigma_minus = |0><1|``.  Two-qubit states are ordered system (x) ancilla.
"""

import numpy as np
from scipy.linalg import expm

__all__ = [
    "SIGMA_X", "SIGMA_Y", "SIGMA_Z", "SIGMA_PLUS", "SIGMA_MINUS", "IDENTITY",
    "InvalidStateError",
    "vectorize", "devectorize", "left_right", "commutator_superop", "dissipator",
    "matrix_exp", "apply_superop", "choi_matrix", "bell_state",
    "trace_norm", "partial_transpose", "hermitian_eigenvalues",
    "is_psd", "psd_floor", "validate_state", "pure_state",
]

SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_X = SIGMA_PLUS + SIGMA_MINUS
SIGMA_Y = -1j * (SIGMA_PLUS - SIGMA_MINUS)
SIGMA_Z = np.diag([-1.0, 1.0]).astype(complex)
IDENTITY = np.eye(2, dtype=complex)

_DIMS = (2, 4, 16)
HERMITIAN_TOL = 1e-10


class InvalidStateError(ValueError):
    """Raised when a matrix violates the density-matrix invariants."""


def _square(m, allowed=_DIMS):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in allowed:
        raise ValueError(f"expected a square matrix of dimension in {allowed}, got shape {m.shape}")
    return m


def vectorize(m):
    """Column-stack a 2x2 or 4x4 matrix into a vector."""
    m = _square(m, (2, 4))
    return m.reshape(-1, order="F").copy()


def devectorize(v):
    """Inverse of :func:`vectorize`."""
    v = np.asarray(v, dtype=complex)
    n = v.shape[0] if v.ndim == 1 else -1
    d = int(round(np.sqrt(n))) if n > 0 else 0
    if v.ndim != 1 or d * d != n or d not in (2, 4):
        raise ValueError(f"cannot devectorize a vector of shape {v.shape}")
    return v.reshape(d, d, order="F").copy()


def left_right(a, b):
    """Superoperator of ``X -> a @ X @ b``."""
    return np.kron(np.asarray(b).T, np.asarray(a))


def commutator_superop(h):
    """Superoperator of ``X -> [h, X]``."""
    eye = np.eye(h.shape[0])
    return left_right(h, eye) - left_right(eye, h)


def dissipator(jump, jump_out=None):
    """Superoperator of ``X -> l X k^dag - 1/2 {k^dag l, X}``.

    With ``jump_out`` omitted this is the usual ``D[l]``; otherwise ``k = jump_out``
    and ``l = jump`` give the off-diagonal GKSL term.
    """
    l_op = np.asarray(jump, dtype=complex)
    k_op = l_op if jump_out is None else np.asarray(jump_out, dtype=complex)
    kd = k_op.conj().T
    kdl = kd @ l_op
    eye = np.eye(l_op.shape[0])
    return left_right(l_op, kd) - 0.5 * (left_right(kdl, eye) + left_right(eye, kdl))


def matrix_exp(m, tol=None):
    """Matrix exponential by scaling and squaring with a Pade kernel.

    ``tol`` is accepted for interface symmetry; the Pade(13) kernel used here
    reaches double precision on well-conditioned inputs.
    """
    m = _square(m)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix_exp: non-finite input")
    return expm(m)


def apply_superop(s, rho):
    """Apply a superoperator to a 2x2 density matrix."""
    return devectorize(np.asarray(s) @ vectorize(rho))


def bell_state():
    """``|Phi><Phi|`` with ``|Phi> = (|00> + |11>)/sqrt(2)``."""
    phi = np.zeros(4, dtype=complex)
    phi[0] = phi[3] = 1 / np.sqrt(2)
    return np.outer(phi, phi.conj())


def choi_matrix(s):
    """Choi state ``(s (x) id)|Phi><Phi|`` of a qubit superoperator.

    Normalised so that a trace-preserving map has a unit-trace Choi matrix.
    The map is completely positive iff the result is positive semidefinite.
    """
    s = np.asarray(s, dtype=complex)
    if s.shape != (4, 4):
        raise ValueError(f"choi_matrix expects a 4x4 superoperator, got {s.shape}")
    out = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e_ij = np.zeros((2, 2), dtype=complex)
            e_ij[i, j] = 1.0
            out += 0.5 * np.kron(apply_superop(s, e_ij), e_ij)
    return out


def trace_norm(m):
    """Sum of singular values."""
    m = np.asarray(m, dtype=complex)
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def partial_transpose(m, subsystem="ancilla"):
    """Partial transpose of a two-qubit operator.

    ``subsystem`` is ``"ancilla"`` (second factor, also accepted as ``1``) or
    ``"system"`` (first factor, ``0``).
    """
    m = _square(m, (4,))
    t = m.reshape(2, 2, 2, 2)  # (s, a, s', a')
    if subsystem in ("ancilla", 1):
        t = t.transpose(0, 3, 2, 1)
    elif subsystem in ("system", 0):
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"unknown subsystem {subsystem!r}")
    return t.reshape(4, 4)


def hermitian_eigenvalues(m, tol=HERMITIAN_TOL):
    """Ascending eigenvalues of a Hermitian matrix."""
    m = _square(m)
    if np.max(np.abs(m - m.conj().T)) > tol * (1.0 + np.max(np.abs(m))):
        raise ValueError("hermitian_eigenvalues: input is not Hermitian")
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def psd_floor(m):
    """Tolerance below which an eigenvalue still counts as non-negative."""
    return -1e-10 * (1.0 + np.linalg.norm(m, 2))


def is_psd(m, floor=None):
    m = np.asarray(m, dtype=complex)
    floor = psd_floor(m) if floor is None else floor
    return bool(hermitian_eigenvalues(m)[0] >= floor)


def validate_state(rho, dim=None):
    """Check the density-matrix invariants and return ``rho`` as an array.

    Hermitian to 1e-12, unit trace to 1e-12, eigenvalues >= -1e-10.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] not in (2, 4):
        raise InvalidStateError(f"bad state shape {rho.shape}")
    if dim is not None and rho.shape[0] != dim:
        raise InvalidStateError(f"expected dimension {dim}, got {rho.shape[0]}")
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError("state has non-finite entries")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > 1e-12:
        raise InvalidStateError(f"state is not Hermitian (deviation {herm:.2e})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > 1e-12:
        raise InvalidStateError(f"state trace is {tr.real:.15g}")
    lo = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if lo < -1e-10:
        raise InvalidStateError(f"state has negative eigenvalue {lo:.3e}")
    return rho


def pure_state(amplitudes):
    psi = np.asarray(amplitudes, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())
