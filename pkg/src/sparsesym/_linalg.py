from __future__ import annotations

import numpy as np
from scipy import linalg

from .exceptions import DomainError, NumericalError


def solve_least_squares(F: np.ndarray, y: np.ndarray, ridge: float = 0.0) -> tuple[np.ndarray, int]:
    """Minimize ||F c - y||^2 + ridge ||c||^2 by pivoted QR.

    Columns are scaled to unit norm before factorization; the ridge term
    acts on the unscaled coefficients.  Returns the coefficients and the
    numerical rank of the (augmented) system.
    """
    F = np.asarray(F, dtype=float)
    y = np.asarray(y, dtype=float)
    if ridge < 0:
        raise DomainError("ridge must be nonnegative")
    if not np.all(np.isfinite(y)):
        raise DomainError("targets contain non-finite values")
    if not np.all(np.isfinite(F)):
        raise NumericalError("design matrix contains non-finite values")
    scale = np.linalg.norm(F, axis=0)
    scale[scale == 0] = 1.0
    A = F / scale
    rhs = y
    if ridge > 0:
        A = np.vstack([A, np.diag(np.sqrt(ridge) / scale)])
        rhs = np.concatenate([y, np.zeros(F.shape[1])])
    Q, R, piv = linalg.qr(A, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = max(A.shape) * np.finfo(float).eps * (diag[0] if diag.size else 0.0)
    rank = int(np.count_nonzero(diag > tol))
    z = np.zeros(F.shape[1])
    z[:rank] = linalg.solve_triangular(R[:rank, :rank], (Q.T @ rhs)[:rank])
    coef = np.empty(F.shape[1])
    coef[piv] = z
    return coef / scale, rank
