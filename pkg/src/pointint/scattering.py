r"""On-shell scattering matrix of the pair {H_Theta, H_0} at energies x > 0.

.. math::

    S_\Theta(x) = I + 2i\sqrt{\operatorname{Im}M(x+i0)}\,
    (C - DM(x+i0))^{-1}D\,\sqrt{\operatorname{Im}M(x+i0)}

restricted to :math:`\operatorname{ran}\operatorname{Im}M(x+i0)`, where the
relation resolvent :math:`(\Theta - M)^{-1}` is realized as
:math:`(C - DM)^{-1}D`.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError, SingularMatrixError, SpectrumHitError
from .extensions import is_self_adjoint
from .matrixkernel import RANK_RTOL, herm_eig, norm2, sigma_min, solve_det
from .specfun import bessel_j0
from .weyl import FOUR_PI, weyl_block_from_root

# sigma_min(C - D M) below this fraction of ||C|| + ||D|| ||M|| counts as singular
RESONANCE_RTOL = 1e-12


@dataclass(frozen=True)
class BoundaryWeyl:
    """Boundary value M(x + i0) and the closed form of its imaginary part."""

    x: float
    M_plus: np.ndarray
    imag_part: np.ndarray
    rank: int


@dataclass(frozen=True)
class ScatteringResult:
    """S-matrix on ran Im M(x+i0), in the eigenbasis given by ``basis`` columns."""

    x: float
    S_matrix: np.ndarray
    basis: np.ndarray
    rank: int
    unitarity_defect: float

    @property
    def full(self):
        """The same operator on the whole boundary space (identity off the range)."""
        P = self.basis
        size = P.shape[0]
        return np.eye(size) + P @ (self.S_matrix - np.eye(self.rank)) @ P.conj().T

    def as_dict(self):
        return {
            "energy": self.x,
            "rank": self.rank,
            "unitarity_defect": self.unitarity_defect,
            "S": [[[v.real, v.imag] for v in row] for row in self.S_matrix],
        }


def imag_part_closed_form(config, x):
    """3D: sqrt(x)/(4 pi) delta + sin(sqrt(x) r)/(4 pi r); 2D: J0(sqrt(x) r)/4."""
    k = np.sqrt(x)
    r = config.distances
    if config.d == 3:
        eye = np.eye(config.m)
        with np.errstate(invalid="ignore", divide="ignore"):
            block = np.where(eye > 0, k / FOUR_PI, np.sin(k * r) / (FOUR_PI * (r + eye)))
    else:
        block = 0.25 * bessel_j0(k * r)
    return config.expand(block)


def im_weyl_boundary(config, x):
    """Boundary value M(x + i0) for x > 0, with its imaginary part.

    ``imag_part`` comes from the closed sinc / J0 formulas; it agrees with
    ``M_plus.imag`` to rounding, which the tests check.
    """
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"im_weyl_boundary: energy must be positive, got {x}")
    M_plus = config.expand(weyl_block_from_root(config, np.sqrt(x)))
    imag = imag_part_closed_form(config, x)
    w = herm_eig(imag).eigenvalues
    rank = int(np.sum(w > RANK_RTOL * np.max(np.abs(w))))
    return BoundaryWeyl(x, M_plus, imag, rank)


def scattering_matrix(pair, config, x, rank_tol=RANK_RTOL):
    """Scattering matrix at energy ``x > 0``.

    Raises
    ------
    SpectrumHitError
        If ``C - D M(x + i0)`` is singular (resonance energy).
    """
    pair.check_size(config)
    if not is_self_adjoint(pair).self_adjoint:
        raise ConfigurationError("scattering_matrix requires a self-adjoint boundary pair")
    bw = im_weyl_boundary(config, x)
    eig = herm_eig(bw.imag_part)
    w, V = eig.eigenvalues, eig.eigenvectors
    keep = w > rank_tol * np.max(np.abs(w))
    Vr = V[:, keep]
    root = np.sqrt(w[keep])
    A = pair.C - pair.D @ bw.M_plus
    scale = norm2(pair.C) + norm2(pair.D) * norm2(bw.M_plus)
    if sigma_min(A) <= RESONANCE_RTOL * scale:
        raise SpectrumHitError(f"C - D M(x + i0) is singular at x = {x}", z=x)
    try:
        W = solve_det(A, pair.D)[0]
    except SingularMatrixError:
        raise SpectrumHitError(f"C - D M(x + i0) is singular at x = {x}", z=x) from None
    core = Vr.conj().T @ W @ Vr
    S = np.eye(root.size) + 2j * root[:, None] * core * root[None, :]
    defect = norm2(S @ S.conj().T - np.eye(root.size))
    return ScatteringResult(float(x), S, Vr, int(root.size), defect)
