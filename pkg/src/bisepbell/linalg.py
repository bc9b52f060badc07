"""Dense complex linear algebra for operators on at most four qubits.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The
eigensolver is a cyclic complex Jacobi method; at dimension <= 16 a handful
of sweeps is enough and the result is deterministic for identical input.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian

HERMITIAN_TOL = 1e-12
TIE_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def kron(*factors) -> np.ndarray:
    """Kronecker product of one or more square matrices, left factor most significant."""
    if not factors:
        raise ValueError("kron needs at least one factor")
    return reduce(np.kron, (as_matrix(f) for f in factors))


def hermiticity_error(m) -> float:
    a = np.asarray(m)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_error(m) <= tol


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray  # ascending, real
    eigenvectors: np.ndarray  # orthonormal columns
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    @property
    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    def top_eigenspace(self, tie_tol: float = TIE_TOL) -> np.ndarray:
        """Columns spanning the eigenspace of the largest eigenvalue (ties within ``tie_tol``)."""
        mask = self.eigenvalues >= self.eigenvalues[-1] - tie_tol
        return self.eigenvectors[:, mask]


def hermitian_eig(m, *, tol: float = HERMITIAN_TOL, max_sweeps: int = 100) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Raises NotHermitian if ``m`` fails the symmetry check at ``tol`` and
    NoConvergence if the off-diagonal mass has not vanished after
    ``max_sweeps`` sweeps.
    """
    a = as_matrix(m)
    if hermiticity_error(a) > tol:
        raise NotHermitian(f"asymmetry {hermiticity_error(a):.3e} exceeds {tol:.1e}")
    a = 0.5 * (a + a.conj().T)
    d = a.shape[0]
    v = np.eye(d, dtype=complex)
    offmask = ~np.eye(d, dtype=bool)
    stop = 1e-15 * max(float(np.linalg.norm(a)), 1e-300)

    sweeps = 0
    while True:
        off = float(np.linalg.norm(a[offmask]))
        if off <= stop:
            break
        if sweeps >= max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps (off={off:.3e})")
        sweeps += 1
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # unitary J acting on columns (p, q); a <- J^H a J zeroes a[p, q]
                j = np.array([[c, s * phase], [-s * np.conj(phase), c]])
                cols = a[:, [p, q]] @ j
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = j.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[p, q] = a[q, p] = 0.0
                vcols = v[:, [p, q]] @ j
                v[:, p], v[:, q] = vcols[:, 0], vcols[:, 1]

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], v[:, order], sweeps)


def trace_product(a, b) -> complex:
    """``Tr[a b]`` without forming the product."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 2:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return complex(np.sum(a * b.T))
