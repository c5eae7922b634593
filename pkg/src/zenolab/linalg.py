"""Dense complex-matrix kernel: Hermitian eigendecomposition, spectral
functions, trace norm, and orthonormalization.

Everything here is pure, deterministic, and sized for dense double-precision
work at small dimension (d <= 32). Structural checks use 1e-10, composed
computations 1e-9.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

HERMITIAN_TOL = 1e-10
ORTHO_TOL = 1e-10


def as_complex_matrix(m, name: str = "matrix") -> np.ndarray:
    """Validate and return a square, finite, complex d x d array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ValidationError(f"{name} must have positive dimension")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValidationError(f"{name} contains non-finite entries")
    return a


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entrywise deviation of m from its own adjoint."""
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def require_hermitian(m, tol: float = HERMITIAN_TOL, name: str = "matrix") -> np.ndarray:
    """Check hermiticity within tol, then return the symmetrized (m + m*)/2."""
    a = as_complex_matrix(m, name)
    defect = hermiticity_defect(a)
    if defect > tol:
        raise ValidationError(f"{name} is not Hermitian: defect {defect:.3e} > {tol:.1e}")
    return (a + a.conj().T) / 2


def phase_fix(vectors: np.ndarray) -> np.ndarray:
    """Rescale each column so its largest-modulus entry is real positive.

    Ties go to the lowest index, which makes the output deterministic.
    """
    out = np.array(vectors, dtype=complex)
    for j in range(out.shape[1]):
        col = out[:, j]
        i = int(np.argmax(np.abs(col)))
        a = col[i]
        if np.abs(a) > 0:
            out[:, j] = col * (np.conj(a) / np.abs(a))
    return out


@dataclass(frozen=True)
class HermitianEigen:
    """Eigendecomposition of a Hermitian matrix.

    values are ascending reals; vectors holds the matching orthonormal
    eigenvectors as columns, phase-fixed for reproducibility.
    """

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def hermitian_eigendecompose(m, tol: float = HERMITIAN_TOL) -> HermitianEigen:
    """Eigendecompose a Hermitian matrix with a deterministic phase convention.

    Raises ValidationError for non-square or non-Hermitian input and lets a
    LAPACK convergence failure propagate as numpy.linalg.LinAlgError.
    """
    h = require_hermitian(m, tol)
    values, vectors = np.linalg.eigh(h)
    vectors = phase_fix(vectors)
    values = values.copy()
    values.flags.writeable = False
    vectors.flags.writeable = False
    return HermitianEigen(values=values, vectors=vectors)


def unitary_exponential(h, t: float) -> np.ndarray:
    """e^{-i t H} for Hermitian H, via the spectral decomposition."""
    eig = hermitian_eigendecompose(h)
    phases = np.exp(-1j * float(t) * eig.values)
    return (eig.vectors * phases) @ eig.vectors.conj().T


def trace_norm(t) -> float:
    """Sum of absolute eigenvalues of a Hermitian operator.

    General (non-Hermitian) operators are rejected on purpose; every distance
    computed in this package is between Hermitian operators.
    """
    h = require_hermitian(t, name="trace-norm argument")
    return float(np.sum(np.abs(np.linalg.eigvalsh(h))))


def operator_norm_hermitian(h) -> float:
    """Spectral norm of a Hermitian operator."""
    m = require_hermitian(h, name="operator-norm argument")
    if m.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvalsh(m))))


def commutator_norm(a, h) -> float:
    """Spectral norm of [A, H] for Hermitian A, H.

    i[A, H] is Hermitian, so its eigenvalues give the exact norm.
    """
    c = a @ h - h @ a
    return operator_norm_hermitian(1j * c)


def _orthonormalize_in_order(columns: list[np.ndarray], tol: float) -> list[np.ndarray]:
    """Modified Gram-Schmidt with one reorthogonalization sweep."""
    out: list[np.ndarray] = []
    for raw in columns:
        v = np.asarray(raw, dtype=complex).reshape(-1)
        original_norm = np.linalg.norm(v)
        for _ in range(2):
            for u in out:
                v = v - np.vdot(u, v) * u
        norm = np.linalg.norm(v)
        if norm <= tol * max(1.0, original_norm):
            raise ValidationError(
                f"vector {len(out)} is linearly dependent on its predecessors "
                f"(residual norm {norm:.3e})"
            )
        out.append(v / norm)
    return out


def gram_schmidt_complete(partial, dim: int) -> np.ndarray:
    """Orthonormalize `partial` in order and complete it to a full basis.

    Completion candidates are the standard basis vectors taken in index
    order, so the result is deterministic. Returns a d x d matrix whose
    columns form the orthonormal system.
    """
    if dim <= 0:
        raise ValidationError("dimension must be positive")
    vectors = [np.asarray(v, dtype=complex).reshape(-1) for v in partial]
    for v in vectors:
        if v.shape[0] != dim:
            raise ValidationError(f"vector length {v.shape[0]} does not match dim {dim}")
    if len(vectors) > dim:
        raise ValidationError(f"{len(vectors)} vectors cannot be independent in dim {dim}")

    basis = _orthonormalize_in_order(vectors, ORTHO_TOL)
    for i in range(dim):
        if len(basis) == dim:
            break
        e = np.zeros(dim, dtype=complex)
        e[i] = 1.0
        v = e
        for _ in range(2):
            for u in basis:
                v = v - np.vdot(u, v) * u
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            basis.append(v / norm)
    if len(basis) != dim:
        raise ValidationError("failed to complete the basis from the standard vectors")
    return np.column_stack(basis)


def orthonormality_defect(cons: np.ndarray) -> float:
    """Largest entrywise deviation of cons* cons from the identity."""
    d = cons.shape[1]
    return float(np.max(np.abs(cons.conj().T @ cons - np.eye(d))))


def require_cons(cons, tol: float = 1e-9, name: str = "basis") -> np.ndarray:
    """Validate a complete orthonormal system given as matrix columns."""
    b = as_complex_matrix(cons, name)
    defect = orthonormality_defect(b)
    if defect > tol:
        raise ValidationError(f"{name} is not orthonormal: defect {defect:.3e} > {tol:.1e}")
    return b


def seeded_hermitian(dim: int, seed: int) -> np.ndarray:
    """Reproducible random Hermitian matrix (G + G*)/2, G complex standard normal."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2


def seeded_cons(dim: int, seed: int) -> np.ndarray:
    """Reproducible random orthonormal basis from the QR of a complex Gaussian."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    # Fix the QR phase ambiguity so the result is fully determined by the seed.
    q = q * np.sign(np.real(np.diag(r)) + (np.real(np.diag(r)) == 0))
    return phase_fix(q)
