"""Cyclic Jacobi solvers for the tiny symmetric problems the fitters pose.

All matrices here are 3x3 or 4x4 (or tall n x 4 for the SVD), so a plain
rotation sweep is both fast enough and fully deterministic.
"""

import math

import numpy as np

_EPS = np.finfo(float).eps


def _rotation(zeta):
    t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
    c = 1.0 / math.sqrt(1.0 + t * t)
    return c, c * t


def jacobi_eigh(S, max_sweeps=100):
    """Eigen-decomposition of a small symmetric matrix.

    Returns ``(w, V)`` with eigenvalues ``w`` in ascending order and the
    matching orthonormal eigenvectors in the columns of ``V``.
    """
    A = np.array(S, dtype=float, copy=True)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    A = 0.5 * (A + A.T)
    V = np.eye(n)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                app, aqq = A[p, p], A[q, q]
                if abs(apq) <= _EPS * math.sqrt(abs(app * aqq)):
                    continue
                c, s = _rotation((aqq - app) / (2.0 * apq))
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                A[p, q] = A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
                rotated = True
        if not rotated:
            break
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def jacobi_svd(A, max_sweeps=100):
    """One-sided (Hestenes) Jacobi SVD of a tall matrix.

    Returns ``(s, V)``: singular values in descending order and the right
    singular vectors as columns of ``V``.
    """
    U = np.array(A, dtype=float, copy=True)
    n = U.shape[1]
    V = np.eye(n)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                up, uq = U[:, p], U[:, q]
                alpha = float(up @ up)
                beta = float(uq @ uq)
                gamma = float(up @ uq)
                if gamma == 0.0 or abs(gamma) <= _EPS * math.sqrt(alpha * beta):
                    continue
                c, s = _rotation((beta - alpha) / (2.0 * gamma))
                newp = c * up - s * uq
                newq = s * up + c * uq
                U[:, p] = newp
                U[:, q] = newq
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
                rotated = True
        if not rotated:
            break
    s = np.sqrt(np.einsum("ij,ij->j", U, U))
    order = np.argsort(-s, kind="stable")
    return s[order], V[:, order]
