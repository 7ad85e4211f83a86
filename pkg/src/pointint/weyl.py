r"""Weyl function, its zero-energy limit and the gamma-field.

For centers :math:`x_1,\dots,x_m` the m x m block of the Weyl function is

* 3D: :math:`\tfrac{i\sqrt z}{4\pi}\delta_{jk} + \widetilde G_{\sqrt z}(x_j-x_k)`
* 2D: :math:`\tfrac{1}{2\pi}\bigl(\psi(1)-\ln\tfrac{\sqrt z}{2i}\bigr)\delta_{jk}
  + \widetilde G_{\sqrt z}(x_j-x_k)`

and the full matrix is ``kron(I_n, block)``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EvaluationError
from .specfun import bessel_k0, branch_sqrt, digamma_one, green_from_root

FOUR_PI = 4.0 * np.pi
TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class WeylEvaluation:
    z: complex
    block: np.ndarray
    full: np.ndarray


@dataclass(frozen=True)
class WeylZeroRelation:
    """Limit M(0) = lim_{x -> 0-} M(x).

    In 3D this is the matrix ``M0``. In 2D it is a linear relation: an
    operator part ``op_matrix`` acting on the hyperplane ``sum(xi) = 0``
    (orthonormal basis in the columns of ``op_basis``) and the multivalued
    part spanned by ``mul_basis = (1, ..., 1)/sqrt(m)``. All fields are
    m x m blocks; ``full_*`` properties give the kron(I_n, .) lifts.
    """

    kind: str
    n: int
    M0: np.ndarray = None
    op_basis: np.ndarray = None
    op_matrix: np.ndarray = None
    mul_basis: np.ndarray = None

    @property
    def full_M0(self):
        return np.kron(np.eye(self.n), self.M0)

    @property
    def full_op_basis(self):
        return np.kron(np.eye(self.n), self.op_basis)

    @property
    def full_op_matrix(self):
        return np.kron(np.eye(self.n), self.op_matrix)

    @property
    def full_mul_basis(self):
        return np.kron(np.eye(self.n), self.mul_basis.reshape(-1, 1))


def _diagonal_term(d, w):
    if d == 3:
        return 1j * w / FOUR_PI
    return (digamma_one() - np.log(w / 2j)) / TWO_PI


def weyl_block_from_root(config, w):
    """m x m Weyl block at momentum ``w`` (``Im w >= 0``, ``w != 0``).

    Real positive ``w`` yields the boundary value M(w**2 + i0).
    """
    r = config.distances
    block = green_from_root(config.d, w, r.ravel()).reshape(r.shape)
    block[np.diag_indices(config.m)] = _diagonal_term(config.d, complex(w))
    return block


def weyl_matrix(config, z):
    """Evaluate M(z) for z off the closed positive half-axis.

    Raises
    ------
    DomainError
        For ``z`` in ``[0, inf)``; boundary values there are provided by
        :func:`pointint.scattering.im_weyl_boundary`.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real >= 0.0:
        raise DomainError(
            f"weyl_matrix: z = {z.real} lies on [0, inf); use scattering.im_weyl_boundary "
            "for boundary values M(x + i0)")
    block = weyl_block_from_root(config, branch_sqrt(z))
    return WeylEvaluation(z, block, config.expand(block))


def weyl_negative(config, s):
    """Real Weyl blocks M(-s**2) for an array of momenta ``s``.

    Returns an array of shape ``(len(s), m, m)``. ``s = 0`` is allowed in
    3D, where it gives M(0).
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    m = config.m
    r = config.distances
    off = ~np.eye(m, dtype=bool)
    out = np.zeros((s.size, m, m))
    if config.d == 3:
        if np.any(s < 0):
            raise DomainError("weyl_negative: s must be >= 0")
        if m > 1:
            rr = r[off]
            out[:, off] = np.exp(-s[:, None] * rr[None, :]) / (FOUR_PI * rr[None, :])
        idx = np.arange(m)
        out[:, idx, idx] = (-s / FOUR_PI)[:, None]
    else:
        if np.any(s <= 0):
            raise DomainError("weyl_negative: s must be > 0 in 2D")
        if m > 1:
            rr = r[off]
            out[:, off] = bessel_k0(s[:, None] * rr[None, :]) / TWO_PI
        idx = np.arange(m)
        out[:, idx, idx] = ((digamma_one() - np.log(s / 2.0)) / TWO_PI)[:, None]
    return out


def hyperplane_basis(m):
    """Orthonormal basis of ``{xi in C^m : sum(xi) = 0}`` (columns).

    Gram-Schmidt of the differences e_j - e_{j+1}; for m = 2 this is
    (1, -1)/sqrt(2).
    """
    if m < 2:
        return np.zeros((m, 0))
    diffs = np.zeros((m, m - 1))
    for j in range(m - 1):
        diffs[j, j] = 1.0
        diffs[j + 1, j] = -1.0
    q, rr = np.linalg.qr(diffs)
    return q * np.sign(np.diag(rr))[None, :]


def log_form_matrix(config):
    """m x m matrix with entries -ln(r_jk)/(2 pi) off the diagonal, 0 on it."""
    r = config.distances
    eye = np.eye(config.m)
    return -np.log(r + eye) / TWO_PI


def weyl_zero(config):
    """Zero-energy limit of the Weyl function (matrix in 3D, relation in 2D)."""
    m = config.m
    r = config.distances
    if config.d == 3:
        eye = np.eye(m)
        M0 = (1.0 - eye) / (FOUR_PI * r + eye)
        return WeylZeroRelation("matrix", config.n, M0=M0)
    P = hyperplane_basis(m)
    A = log_form_matrix(config)
    op = P.T @ A @ P
    op = 0.5 * (op + op.T)
    return WeylZeroRelation(
        "relation", config.n, op_basis=P, op_matrix=op,
        mul_basis=np.full(m, 1.0 / np.sqrt(m)))


def site_kernels(config, z, x):
    """Values G~_{sqrt z}(|x - x_j|) for every center j.

    Raises :class:`EvaluationError` if ``x`` coincides with a center.
    """
    rj = config.distances_to(x)
    hit = np.flatnonzero(rj == 0.0)
    if hit.size:
        raise EvaluationError(f"point coincides with center {int(hit[0])}")
    return green_from_root(config.d, branch_sqrt(z), rj)


def gamma_field_eval(config, z, xi, x):
    r"""Pointwise value of the defect element :math:`\gamma(z)\xi` at ``x``.

    Parameters
    ----------
    config : PointConfiguration
    z : complex
        Spectral parameter off :math:`[0,\infty)`.
    xi : array_like, shape (m, n) or (m,) when n == 1
        Coefficient vectors attached to the centers.
    x : array_like, shape (d,)

    Returns
    -------
    ndarray, shape (n,)
    """
    z = complex(z)
    if z.imag == 0.0 and z.real >= 0.0:
        raise DomainError(f"gamma_field_eval: z = {z.real} lies on [0, inf)")
    xi = np.asarray(xi, dtype=complex).reshape(config.m, config.n)
    g = site_kernels(config, z, x)
    return g @ xi
