"""Small dense complex linear algebra, deterministic at desk scale."""

import math

import numpy as np

JACOBI_OFF_TOL = 1e-12
NULLSPACE_TOL = 1e-12


def hermitian_eigenvalues(h: np.ndarray, off_tol: float = JACOBI_OFF_TOL, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps run in a fixed (p, q) order until every off-diagonal entry has
    magnitude at most ``off_tol`` or ``max_sweeps`` is reached; the result
    is deterministic.  Matrices here are tiny, so no pivoting strategy is
    needed.
    """
    h = np.array(h, dtype=complex)
    n = h.shape[0]
    if h.shape != (n, n):
        raise ValueError("matrix must be square")
    if n == 1:
        return np.array([h[0, 0].real])
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off = max(off, abs(h[p, q]))
        if off <= off_tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = h[p, q]
                if abs(apq) <= off_tol * 0.1:
                    continue
                # absorb the phase of h[p,q], then a real Givens rotation
                phase = apq / abs(apq)
                tau = (h[q, q].real - h[p, p].real) / (2.0 * abs(apq))
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = 1.0 / (tau - math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                col_p = h[:, p].copy()
                col_q = h[:, q].copy()
                h[:, p] = c * col_p - s * np.conj(phase) * col_q
                h[:, q] = s * col_p + c * np.conj(phase) * col_q
                row_p = h[p, :].copy()
                row_q = h[q, :].copy()
                h[p, :] = c * row_p - s * phase * row_q
                h[q, :] = s * row_p + c * phase * row_q
                h[p, q] = 0.0
                h[q, p] = 0.0
    return np.real(np.diag(h))


def spectral_norm(m: np.ndarray) -> float:
    """Largest singular value, via Jacobi eigenvalues of m* m."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0.0
    h = m.conj().T @ m
    eigs = hermitian_eigenvalues(h)
    top = float(np.max(eigs))
    return math.sqrt(top) if top > 0.0 else 0.0


def nullspace(a: np.ndarray, rtol: float = NULLSPACE_TOL) -> np.ndarray:
    """Rows span the right null space of ``a``; empty (0, n) if trivial."""
    a = np.asarray(a, dtype=complex)
    if a.shape[0] == 0:
        return np.eye(a.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(a)
    tol = rtol * (s[0] if s.size else 1.0)
    rank = int(np.sum(s > tol))
    return vh[rank:]


def span_dimension(mats, rtol: float = NULLSPACE_TOL) -> int:
    """Dimension of the linear span of a family of equal-shape matrices."""
    rows = np.array([np.asarray(m, dtype=complex).ravel() for m in mats])
    if rows.size == 0:
        return 0
    s = np.linalg.svd(rows, compute_uv=False)
    tol = rtol * (s[0] if s.size else 1.0)
    return int(np.sum(s > tol))


def commutant_basis(generators, dim: int, rtol: float = NULLSPACE_TOL) -> list[np.ndarray]:
    """Basis of { X : X G = G X for every generator G } in dim x dim matrices.

    Solved exactly as the null space of the stacked commutator operators,
    using the row-major vectorization vec(A X B) = (A kron B^T) vec(X).
    """
    eye = np.eye(dim, dtype=complex)
    blocks = []
    for g in generators:
        g = np.asarray(g, dtype=complex)
        blocks.append(np.kron(g, eye) - np.kron(eye, g.T))
    if not blocks:
        return [m.reshape(dim, dim) for m in np.eye(dim * dim, dtype=complex)]
    stacked = np.vstack(blocks)
    basis = nullspace(stacked, rtol)
    return [v.reshape(dim, dim) for v in basis]


def is_diagonal(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.asarray(m, dtype=complex)
    off = m - np.diag(np.diag(m))
    return bool(np.max(np.abs(off), initial=0.0) <= tol)
