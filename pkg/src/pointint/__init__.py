"""Boundary-triplet numerics for Schrodinger operators with point interactions in 2D and 3D."""

from .errors import (
    ConditioningError,
    ConfigurationError,
    DomainError,
    EvaluationError,
    NotPSDError,
    NumericError,
    PointInteractionError,
    ScanBoundaryWarning,
    SingularMatrixError,
    SpectrumHitError,
    UnsupportedFormulaError,
)
from .extensions import (
    UNIQUE_NONNEGATIVE,
    ExtensionReport,
    is_nonnegative_2d_reduced,
    is_nonnegative_3d,
    is_self_adjoint,
    krein_coefficients_3d,
    krein_pair,
)
from .model import (
    BoundaryPair,
    PointConfiguration,
    diagonal_family,
    diagonal_pair,
    e_matrices,
    friedrichs_pair,
    operator_pair,
    validate,
)
from .resolvent import KreinResolvent, resolvent_kernel
from .scattering import im_weyl_boundary, scattering_matrix
from .spectral import (
    BoundStateResult,
    bound_states,
    eigenfunction_eval,
    essential_spectrum,
    gerschgorin_check,
    kappa_minus,
)
from .weyl import gamma_field_eval, weyl_matrix, weyl_zero

__version__ = "0.1.0"
