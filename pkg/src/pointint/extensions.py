"""Self-adjointness, nonnegativity and the Krein extension for (C, D) pairs."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConditioningError, ConfigurationError, UnsupportedFormulaError
from .matrixkernel import hermitian_part, inertia, norm2
from .model import BoundaryPair, e_matrices, friedrichs_pair
from .weyl import FOUR_PI, weyl_zero

SELF_ADJOINT_RTOL = 1e-10

# returned by is_nonnegative_2d_reduced for a single 2D center
UNIQUE_NONNEGATIVE = "unique_nonnegative"


@dataclass
class ExtensionReport:
    self_adjoint: bool
    defect_CDstar: float
    regularity_gap: float
    nonnegative: bool = None
    notes: list = field(default_factory=list)

    def as_dict(self):
        return {
            "self_adjoint": self.self_adjoint,
            "defect_CDstar": self.defect_CDstar,
            "regularity_gap": self.regularity_gap,
            "nonnegative": self.nonnegative,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class KreinCoefficients:
    """Matrix K with xi_1 = K xi_0 on dom(H_K) (3D)."""

    K: np.ndarray


def is_self_adjoint(pair, tol=SELF_ADJOINT_RTOL):
    """Check ``C D* = D C*`` and ``0 in rho(C C* + D D*)``.

    Both conditions are tested against ``tol * (||C|| + ||D||)**2``; the
    raw defect and the smallest eigenvalue of ``C C* + D D*`` are reported.
    """
    C, D = pair.C, pair.D
    if C.shape != D.shape:
        raise ConfigurationError(f"C and D shapes differ: {C.shape} vs {D.shape}")
    scale = (norm2(C) + norm2(D)) ** 2
    defect = norm2(C @ D.conj().T - D @ C.conj().T)
    gram = C @ C.conj().T + D @ D.conj().T
    gap = float(np.linalg.eigvalsh(hermitian_part(gram))[0]) if gram.size else 0.0
    ok = bool(defect <= tol * scale and gap >= tol * scale and scale > 0)
    notes = []
    if pair.tag == "friedrichs" or (norm2(D) == 0.0 and gap > 0):
        notes.append("friedrichs")
    if pair.tag == "krein":
        notes.append("krein")
    if pair.tag == "diagonal":
        notes.append("diagonal")
    return ExtensionReport(ok, float(defect), gap, notes=notes)


def nonnegativity_form(pair, M0):
    """Hermitian matrix ``C D* - D M0 D*`` whose inertia counts negative eigenvalues."""
    C, D = pair.C, pair.D
    return hermitian_part(C @ D.conj().T - D @ M0 @ D.conj().T)


def is_nonnegative_3d(pair, config):
    """True iff ``C D* - D M(0) D*`` is positive semidefinite (3D only)."""
    if config.d != 3:
        raise UnsupportedFormulaError(
            "M(0) is a relation in 2D; use is_nonnegative_2d_reduced with a reduced pair")
    pair.check_size(config)
    T = nonnegativity_form(pair, weyl_zero(config).full_M0)
    return inertia(T).negative == 0


def is_nonnegative_2d_reduced(C_red, D_red, config):
    """Nonnegativity test for a 2D extension given by a reduced pair.

    ``C_red``, ``D_red`` act on the hyperplane ``sum(xi) = 0`` written in
    the ``op_basis`` of :func:`pointint.weyl.weyl_zero` (size n*(m-1)).

    Returns
    -------
    bool or str
        ``UNIQUE_NONNEGATIVE`` when m == 1: then H0 is the only
        nonnegative self-adjoint extension and no reduced pair exists.
    """
    if config.d != 2:
        raise UnsupportedFormulaError("reduced nonnegativity test is for d = 2")
    if config.m == 1:
        return UNIQUE_NONNEGATIVE
    C_red = np.atleast_2d(np.asarray(C_red, dtype=complex))
    D_red = np.atleast_2d(np.asarray(D_red, dtype=complex))
    size = config.n * (config.m - 1)
    if C_red.shape != (size, size) or D_red.shape != (size, size):
        raise ConfigurationError(
            f"reduced pair must be {size}x{size}, got {C_red.shape} and {D_red.shape}")
    op = weyl_zero(config).full_op_matrix
    T = hermitian_part(C_red @ D_red.conj().T - D_red @ op @ D_red.conj().T)
    return inertia(T).negative == 0


def krein_coefficients_3d(config):
    """``K = (E1 (x) I_n)^-1 (4 pi M(0) + E0 (x) I_n)``.

    Raises :class:`ConditioningError` when E1 is not numerically positive
    definite.
    """
    if config.d != 3:
        raise UnsupportedFormulaError("Krein coefficients are defined for d = 3")
    e0, e1 = e_matrices(config)
    w = np.linalg.eigvalsh(e1)
    if w[0] <= 1e-12 * w[-1]:
        raise ConditioningError(f"E1 is not positive definite (smallest eigenvalue {w[0]:.3e})")
    rhs = FOUR_PI * weyl_zero(config).M0 + e0
    K = np.linalg.solve(e1, rhs)
    return KreinCoefficients(config.expand(K))


def krein_pair(config):
    """Boundary pair of the Krein extension ``Theta = M(0)``.

    3D: ``(M(0), I)``. 2D, m = 1: Friedrichs pair (H_K = H_F = H0).
    2D, m > 1: rows ``e_mul* Gamma_0 = 0`` and
    ``P* Gamma_1 = op_matrix P* Gamma_0`` with P the hyperplane basis.
    """
    z0 = weyl_zero(config)
    size = config.size
    if config.d == 3:
        return BoundaryPair(z0.full_M0, np.eye(size), tag="krein")
    if config.m == 1:
        pair = friedrichs_pair(config)
        return BoundaryPair(pair.C, pair.D, tag="krein")
    P = z0.full_op_basis  # (nm, n(m-1))
    e = z0.full_mul_basis  # (nm, n)
    op = z0.full_op_matrix
    C = np.vstack([e.T, op @ P.T])
    D = np.vstack([np.zeros_like(e.T), P.T])
    return BoundaryPair(C, D, tag="krein")
