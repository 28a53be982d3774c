"""Dense complex linear algebra primitives.

All matrices are numpy ``complex128`` arrays in row-major order.  Composite
systems use the first-factor-major index convention ``i = a * d_B + b``
throughout the package, and every operation here is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Relative eigenvalue cutoff separating support from kernel.
DEFAULT_SUPPORT_CUTOFF = 1e-10

HERMITICITY_RTOL = 1e-12


class LinalgError(ValueError):
    """Raised when a matrix violates a structural precondition."""


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return (m + dagger(m)) / 2


def hermiticity_residual(m: np.ndarray) -> float:
    """Max entrywise deviation from Hermitian symmetry, absolute."""
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def _require_square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise LinalgError(f"expected a square matrix, got shape {m.shape}")
    return m


def _require_hermitian(m: np.ndarray) -> np.ndarray:
    m = _require_square(m)
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    resid = hermiticity_residual(m)
    if resid > HERMITICITY_RTOL * max(scale, 1.0):
        raise LinalgError(
            f"matrix is not Hermitian: residual {resid:.3e} exceeds "
            f"{HERMITICITY_RTOL:.0e} * {max(scale, 1.0):.3e}"
        )
    return hermitian_part(m)


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; ``eigenvectors`` holds the
    corresponding orthonormal eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def hermitian_eig(m: np.ndarray) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    m = _require_hermitian(m)
    vals, vecs = np.linalg.eigh(m)
    return Spectrum(eigenvalues=vals, eigenvectors=vecs)


def support_pinv(
    m: np.ndarray, tol: float = DEFAULT_SUPPORT_CUTOFF
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pseudoinverse of a PSD matrix on its support.

    An eigenvalue counts as support iff it exceeds ``tol`` times the largest
    eigenvalue.  Returns ``(pinv, projector, kernel_projector)`` where the two
    projectors sum to the identity.  Raises ``LinalgError`` if an eigenvalue
    is negative beyond ``-tol * lambda_max``.
    """
    spec = hermitian_eig(m)
    vals, vecs = spec.eigenvalues, spec.eigenvectors
    lmax = float(vals[-1]) if vals.size else 0.0
    floor = tol * max(lmax, 0.0)
    if vals.size and float(vals[0]) < -max(floor, tol):
        raise LinalgError(f"not PSD: smallest eigenvalue {vals[0]:.3e}")
    mask = vals > floor
    inv_vals = np.where(mask, 1.0, 0.0)
    with np.errstate(divide="ignore"):
        inv_vals = np.where(mask, 1.0 / np.where(mask, vals, 1.0), 0.0)
    pinv = (vecs * inv_vals) @ dagger(vecs)
    projector = (vecs * mask.astype(float)) @ dagger(vecs)
    kernel_projector = np.eye(m.shape[0], dtype=complex) - projector
    return pinv, projector, kernel_projector


def partial_trace(m: np.ndarray, dims: tuple[int, int], which: str) -> np.ndarray:
    """Trace out one tensor factor of a matrix on a bipartite space.

    ``dims = (d_A, d_B)`` with composite index ``i = a * d_B + b``.
    ``which`` names the factor that is traced out: ``"second"`` returns the
    d_A x d_A operator sum_b M[(a,b),(a',b)], ``"first"`` the d_B x d_B
    operator sum_a M[(a,b),(a,b')].
    """
    d_a, d_b = dims
    m = _require_square(m)
    if m.shape[0] != d_a * d_b:
        raise LinalgError(f"dimension mismatch: {m.shape[0]} != {d_a} * {d_b}")
    t = m.reshape(d_a, d_b, d_a, d_b)
    if which == "second":
        return np.einsum("abcb->ac", t)
    if which == "first":
        return np.einsum("abad->bd", t)
    raise LinalgError(f"which must be 'first' or 'second', got {which!r}")


def max_entangled_vector(d: int) -> np.ndarray:
    """Unnormalized maximally entangled vector sum_i |i>|i>, squared norm d."""
    if d < 1:
        raise LinalgError("dimension must be at least 1")
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0
    return v


def infinity_norm_psd(m: np.ndarray) -> float:
    """Largest eigenvalue of a PSD (Hermitian) matrix."""
    return float(hermitian_eig(m).eigenvalues[-1])


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
