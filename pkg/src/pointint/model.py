"""Interaction centers and boundary-condition parametrizations.

All (nm)x(nm) matrices use the block order ``kron(I_n, block)``: the site
index is the fast index inside each of the ``n`` identical m x m blocks,
so row ``s*m + j`` belongs to internal component ``s`` at center ``j``.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigurationError

# separations below this fraction of the diameter count as duplicates
DUPLICATE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class PointConfiguration:
    """m distinct centers in R^d carrying n internal components.

    Parameters
    ----------
    d : {2, 3}
        Space dimension.
    points : array_like, shape (m, d)
    n : int
        Internal multiplicity; the interaction acts as ``I_n`` on each center.
    """

    d: int
    points: np.ndarray
    n: int = 1

    def __post_init__(self):
        if self.d not in (2, 3):
            raise ConfigurationError(f"dimension must be 2 or 3, got {self.d!r}")
        if int(self.n) != self.n or self.n < 1:
            raise ConfigurationError(f"multiplicity n must be a positive integer, got {self.n!r}")
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1 and pts.size == self.d:
            pts = pts.reshape(1, self.d)
        if pts.ndim != 2 or pts.shape[1] != self.d or pts.shape[0] < 1:
            raise ConfigurationError(
                f"points must have shape (m, {self.d}) with m >= 1, got {pts.shape}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "n", int(self.n))

    @property
    def m(self):
        return self.points.shape[0]

    @property
    def size(self):
        """Dimension n*m of the boundary space."""
        return self.n * self.m

    @cached_property
    def distances(self):
        return validate(self)

    @property
    def min_separation(self):
        r = self.distances
        if self.m == 1:
            return np.inf
        return float(np.min(r[~np.eye(self.m, dtype=bool)]))

    def expand(self, block):
        """Lift an m x m block to the full space as ``kron(I_n, block)``."""
        return np.kron(np.eye(self.n), block)

    def distances_to(self, x):
        """Distances r_j = |x - x_j| from a point x to every center."""
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size != self.d:
            raise ConfigurationError(f"point must have {self.d} coordinates, got {x.size}")
        return np.linalg.norm(self.points - x[None, :], axis=1)


def validate(config):
    """Return the m x m matrix of separations |x_j - x_k|.

    Raises
    ------
    ConfigurationError
        For NaN/inf coordinates, or two centers closer than
        ``DUPLICATE_RTOL`` times the configuration diameter; ``indices``
        holds the offending pair.
    """
    pts = config.points
    bad = np.flatnonzero(~np.all(np.isfinite(pts), axis=1))
    if bad.size:
        i = int(bad[0])
        raise ConfigurationError(f"non-finite coordinates at points[{i}]", indices=(i, i))
    diff = pts[:, None, :] - pts[None, :, :]
    r = np.sqrt(np.sum(diff * diff, axis=-1))
    m = r.shape[0]
    if m > 1:
        diameter = r.max()
        for j in range(m):
            for k in range(j + 1, m):
                if r[j, k] <= DUPLICATE_RTOL * diameter:
                    raise ConfigurationError(
                        f"duplicate centers: points[{j}] and points[{k}] coincide",
                        indices=(j, k))
    np.fill_diagonal(r, 0.0)
    r = 0.5 * (r + r.T)
    r.setflags(write=False)
    return r


def e_matrices(config):
    r"""Coefficient matrices E0, E1 of the decomposition of dom(H*).

    ``E1 = (exp(-r_jk))``. In 3D ``E0 = (-exp(-r_jk)/(r_jk - delta_jk))``,
    diagonal 1; in 2D ``E0 = (-exp(-r_jk) ln(r_jk + delta_jk))``, diagonal 0.
    """
    r = config.distances
    eye = np.eye(config.m)
    e1 = np.exp(-r)
    if config.d == 3:
        e0 = -e1 / (r - eye)
    else:
        e0 = -e1 * np.log(r + eye)
    return e0, e1


@dataclass(frozen=True, eq=False)
class BoundaryPair:
    """Pair (C, D) fixing the extension with domain ``ker(D Gamma_1 - C Gamma_0)``.

    ``tag`` is one of ``"general"``, ``"operator"``, ``"diagonal"``,
    ``"friedrichs"`` or ``"krein"``; ``alpha`` is kept for the diagonal
    family.
    """

    C: np.ndarray
    D: np.ndarray
    tag: str = "general"
    alpha: tuple = field(default=None)

    def __post_init__(self):
        C = np.array(self.C, dtype=complex)
        D = np.array(self.D, dtype=complex)
        if C.ndim != 2 or C.shape[0] != C.shape[1] or C.shape != D.shape:
            raise ConfigurationError(
                f"C and D must be square of equal size, got {C.shape} and {D.shape}")
        if not (np.all(np.isfinite(C)) and np.all(np.isfinite(D))):
            raise ConfigurationError("C and D must have finite entries")
        C.setflags(write=False)
        D.setflags(write=False)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", D)

    @property
    def size(self):
        return self.C.shape[0]

    def check_size(self, config):
        if self.size != config.size:
            raise ConfigurationError(
                f"boundary pair acts on C^{self.size}, configuration needs C^{config.size}")


def diagonal_family(alpha, n=1):
    """Pair ``(kron(I_n, diag(alpha)), I)`` of the m-parameter family B_alpha."""
    alpha = np.asarray(alpha, dtype=float).reshape(-1)
    if alpha.size == 0:
        raise ConfigurationError("alpha must be nonempty")
    m = alpha.size
    C = np.kron(np.eye(n), np.diag(alpha))
    return BoundaryPair(C, np.eye(n * m), tag="diagonal", alpha=tuple(alpha.tolist()))


def diagonal_pair(config, alpha):
    """``diagonal_family`` checked against a configuration."""
    alpha = np.asarray(alpha, dtype=float).reshape(-1)
    if alpha.size != config.m:
        raise ConfigurationError(f"expected {config.m} coupling constants, got {alpha.size}")
    return diagonal_family(alpha, config.n)


def operator_pair(B):
    """Pair (B, I) for a Hermitian operator parameter B."""
    B = np.asarray(B, dtype=complex)
    return BoundaryPair(B, np.eye(B.shape[0]), tag="operator")


def friedrichs_pair(config):
    """Pair (I, 0): the free Laplacian H0 = ker Gamma_0."""
    size = config.size
    return BoundaryPair(np.eye(size), np.zeros((size, size)), tag="friedrichs")
