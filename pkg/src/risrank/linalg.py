"""Small dense complex linear algebra.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The SVD is a
one-sided (Hestenes) Jacobi iteration, which is exact enough and fully
deterministic for the 3x3 channel matrices used throughout the package.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SvdResult",
    "SvdConvergenceError",
    "as_matrix",
    "matmul",
    "svd",
    "frobenius_norm",
]

MAX_SWEEPS = 100
OFF_DIAGONAL_TOL = 1e-12


class SvdConvergenceError(ArithmeticError):
    """Raised when the Jacobi sweeps hit the iteration cap.

    The largest remaining normalized column coupling is kept in
    ``residual``.
    """

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD ``h = left_vectors @ diag(singular_values) @ right_vectors^H``."""

    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left_vectors * self.singular_values) @ self.right_vectors.conj().T


def as_matrix(a, name="matrix") -> np.ndarray:
    """Validate and convert ``a`` to a finite 2-D complex128 array."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def frobenius_norm(h) -> float:
    h = np.asarray(h, dtype=np.complex128)
    return float(np.sqrt(np.sum(h.real**2 + h.imag**2)))


def _complete_basis(w, mask):
    """Replace the columns of ``w`` flagged in ``mask`` by an orthonormal
    completion of the remaining columns (Gram-Schmidt over unit vectors)."""
    m, k = w.shape
    kept = [w[:, i] for i in range(k) if not mask[i]]
    out = w.copy()
    candidates = iter(np.eye(m, dtype=np.complex128))
    for i in np.flatnonzero(mask):
        for e in candidates:
            v = e.copy()
            for _ in range(2):
                for q in kept:
                    v -= q * np.vdot(q, v)
            nv = np.linalg.norm(v)
            if nv > 1e-8:
                v /= nv
                kept.append(v)
                out[:, i] = v
                break
    return out


def _jacobi_tall(a):
    """One-sided Jacobi on a tall (rows >= cols) matrix."""
    m, n = a.shape
    w = a.copy()
    v = np.eye(n, dtype=np.complex128)
    fro = frobenius_norm(a)
    # columns whose energy is below round-off of the whole matrix are zero
    floor = (np.finfo(float).eps * fro) ** 2

    residual = 0.0
    for _ in range(MAX_SWEEPS):
        residual = 0.0
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                wi, wj = w[:, i], w[:, j]
                alpha = float(np.vdot(wi, wi).real)
                beta = float(np.vdot(wj, wj).real)
                if alpha <= floor or beta <= floor:
                    continue
                g = np.vdot(wi, wj)
                ag = abs(g)
                coupling = ag / np.sqrt(alpha * beta)
                residual = max(residual, coupling)
                if coupling <= OFF_DIAGONAL_TOL:
                    continue
                rotated = True
                phase = g / ag
                zeta = (beta - alpha) / (2.0 * ag)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                wj_aligned = wj * np.conj(phase)
                w[:, i], w[:, j] = c * wi - s * wj_aligned, s * wi + c * wj_aligned
                vi, vj = v[:, i], v[:, j] * np.conj(phase)
                v[:, i], v[:, j] = c * vi - s * vj, s * vi + c * vj
        if not rotated:
            break
    else:
        raise SvdConvergenceError(
            f"Jacobi SVD did not converge in {MAX_SWEEPS} sweeps", residual
        )

    sigma = np.sqrt(np.sum(w.real**2 + w.imag**2, axis=0))
    order = np.argsort(-sigma, kind="stable")
    sigma, w, v = sigma[order], w[:, order], v[:, order]

    tiny = sigma <= np.sqrt(floor)
    u = np.zeros_like(w)
    u[:, ~tiny] = w[:, ~tiny] / sigma[~tiny]
    if np.any(tiny):
        sigma = np.where(tiny, 0.0, sigma)
        u = _complete_basis(u, tiny)
    return u, sigma, v


def svd(h) -> SvdResult:
    """Thin singular value decomposition of a complex matrix.

    Parameters
    ----------
    h : array_like
        Finite complex matrix of shape ``(m, n)``.

    Returns
    -------
    SvdResult
        ``left_vectors`` is ``m x k``, ``right_vectors`` is ``n x k`` with
        ``k = min(m, n)``; singular values are sorted in descending order,
        ties keep their original column order. The zero matrix yields
        identity bases.

    Raises
    ------
    SvdConvergenceError
        If the sweep cap is reached.
    """
    h = as_matrix(h, "h")
    m, n = h.shape
    if m >= n:
        u, s, v = _jacobi_tall(h)
        return SvdResult(u, s, v)
    # wide: factor h^H = U S V^H, so h = V S U^H
    u, s, v = _jacobi_tall(h.conj().T)
    return SvdResult(v, s, u)
