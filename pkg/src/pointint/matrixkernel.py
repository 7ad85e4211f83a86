"""Dense Hermitian and general linear-algebra kernels.

Thin contracts over LAPACK (via numpy/scipy): symmetrize before every
Hermitian factorization, report tolerances explicitly.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .errors import NotPSDError, NumericError, SingularMatrixError

INERTIA_RTOL = 1e-9
RANK_RTOL = 1e-10


@dataclass(frozen=True)
class HermitianSpectrum:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # orthonormal columns
    asymmetry: float  # ||A - A*|| before symmetrization


@dataclass(frozen=True)
class Inertia:
    negative: int
    zero: int
    positive: int
    zero_tol: float

    def __iter__(self):
        return iter((self.negative, self.zero, self.positive))


def _finite(A, name):
    A = np.asarray(A)
    if not np.all(np.isfinite(A)):
        raise NumericError(f"{name}: non-finite entries")
    return A


def hermitian_part(A):
    A = np.asarray(A)
    return 0.5 * (A + A.conj().T)


def norm2(A):
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def herm_eig(A):
    """Full eigendecomposition of the Hermitian part of A."""
    A = _finite(A, "herm_eig").astype(complex)
    asym = norm2(A - A.conj().T)
    w, V = np.linalg.eigh(hermitian_part(A))
    return HermitianSpectrum(w, V, asym)


def inertia(A, zero_tol=None):
    """Counts of eigenvalues below, within and above ``+-zero_tol``.

    ``zero_tol`` defaults to ``INERTIA_RTOL * ||A||_2``.
    """
    A = _finite(A, "inertia")
    w = np.linalg.eigvalsh(hermitian_part(A))
    if zero_tol is None:
        zero_tol = INERTIA_RTOL * (np.max(np.abs(w)) if w.size else 0.0)
    neg = int(np.sum(w < -zero_tol))
    pos = int(np.sum(w > zero_tol))
    return Inertia(neg, w.size - neg - pos, pos, float(zero_tol))


def psd_sqrt(A, rank_tol=RANK_RTOL):
    """Hermitian square root of a PSD matrix, and its numerical rank.

    Eigenvalues in ``[-10*rank_tol*||A||, 0)`` are clipped to zero; anything
    more negative raises :class:`NotPSDError`.
    """
    eig = herm_eig(A)
    w, V = eig.eigenvalues, eig.eigenvectors
    scale = np.max(np.abs(w)) if w.size else 0.0
    if w.size and w[0] < -10 * rank_tol * scale:
        raise NotPSDError(f"psd_sqrt: eigenvalue {w[0]:.3e} is negative beyond tolerance")
    w = np.clip(w, 0.0, None)
    rank = int(np.sum(w > rank_tol * scale))
    S = (V * np.sqrt(w)) @ V.conj().T
    return S, rank


def solve_det(A, B):
    """Solve A X = B by LU; return ``(X, det A, cond_2 A)``.

    Raises :class:`SingularMatrixError` with the index of the first zero
    pivot if A is exactly singular.
    """
    A = _finite(A, "solve_det").astype(complex)
    B = _finite(B, "solve_det")
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NumericError(f"solve_det: A must be square, got {A.shape}")
    with warnings.catch_warnings():
        # exact singularity is reported below as SingularMatrixError
        warnings.simplefilter("ignore", la.LinAlgWarning)
        lu, piv = la.lu_factor(A, check_finite=False)
    diag = np.diag(lu)
    zero = np.flatnonzero(diag == 0)
    if zero.size:
        raise SingularMatrixError("solve_det: matrix is singular", pivot=int(zero[0]))
    X = la.lu_solve((lu, piv), B, check_finite=False)
    sign = (-1) ** int(np.sum(piv != np.arange(piv.size)))
    det = complex(sign * np.prod(diag))
    s = np.linalg.svd(A, compute_uv=False)
    cond = float(s[0] / s[-1]) if s[-1] > 0 else np.inf
    return X, det, cond


def nullspace(A, tol=1e-8):
    """Orthonormal basis (columns) of ``{v : ||A v|| <= tol * ||A||}``."""
    A = _finite(A, "nullspace").astype(complex)
    if A.size == 0:
        return np.zeros((A.shape[1], 0), dtype=complex)
    _, s, Vh = np.linalg.svd(A)
    scale = s[0] if s.size else 0.0
    # rows of Vh beyond len(s) (wide A) are in the kernel
    full = np.concatenate([s, np.zeros(Vh.shape[0] - s.size)])
    keep = full <= tol * scale if scale > 0 else np.ones_like(full, dtype=bool)
    return Vh[keep].conj().T


def sigma_min(A):
    A = _finite(A, "sigma_min")
    if A.size == 0:
        return 0.0
    return float(np.linalg.svd(A, compute_uv=False)[-1])
