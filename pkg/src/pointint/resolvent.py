r"""Pointwise Krein resolvent kernel.

.. math::

    R_z(H_{C,D})(x, x') = G_{\sqrt z}(|x-x'|) I_n
    + \sum_{j,k} g_j(x)\, W_{jk}\, g_k(x'),\qquad W = (C - DM(z))^{-1}D,

with site kernels :math:`g_j(x) = G_{\sqrt z}(|x - x_j|)`. The adjoint
:math:`\gamma(\bar z)^*` acts through :math:`g_k(x')` at the same ``z``
because :math:`\overline{G_{\sqrt{\bar z}}} = G_{\sqrt z}`.
"""

import numpy as np

from .errors import ConfigurationError, DomainError, EvaluationError, SingularMatrixError, SpectrumHitError
from .matrixkernel import norm2, sigma_min, solve_det
from .specfun import free_green
from .weyl import site_kernels, weyl_matrix

# sigma_min(C - D M) below this fraction of ||C|| + ||D|| ||M|| counts as singular
SPECTRUM_HIT_RTOL = 1e-12


class KreinResolvent:
    """Resolvent kernel at fixed ``z`` with one shared factorization.

    Use for batches of point pairs; :func:`resolvent_kernel` is the
    single-shot form.
    """

    def __init__(self, pair, config, z):
        pair.check_size(config)
        z = complex(z)
        if z.imag == 0.0 and z.real >= 0.0:
            raise DomainError(f"resolvent kernel needs z off [0, inf), got {z}")
        self.pair, self.config, self.z = pair, config, z
        M = weyl_matrix(config, z).full
        A = pair.C - pair.D @ M
        hit = SpectrumHitError(f"C - D M(z) is singular at z = {z}: z is an eigenvalue", z=z)
        if sigma_min(A) <= SPECTRUM_HIT_RTOL * (norm2(pair.C) + norm2(pair.D) * norm2(M)):
            raise hit
        try:
            self.W = solve_det(A, pair.D)[0]
        except SingularMatrixError:
            raise hit from None

    def _site_row(self, x):
        g = site_kernels(self.config, self.z, x)
        return np.kron(np.eye(self.config.n), g[None, :])  # (n, nm)

    def correction(self, x, xp):
        return self._site_row(x) @ self.W @ self._site_row(xp).T

    def free(self, x, xp):
        x = np.asarray(x, dtype=float).reshape(-1)
        xp = np.asarray(xp, dtype=float).reshape(-1)
        if x.size != self.config.d or xp.size != self.config.d:
            raise ConfigurationError(f"points must have {self.config.d} coordinates")
        r = float(np.linalg.norm(x - xp))
        if r == 0.0:
            raise EvaluationError("free kernel is singular on the diagonal x = x'")
        return free_green(self.config.d, self.z, r) * np.eye(self.config.n)

    def __call__(self, x, xp):
        return self.free(x, xp) + self.correction(x, xp)


def resolvent_kernel(pair, config, z, x, xp):
    """Kernel value (n x n) of ``(H_{C,D} - z)^{-1}`` at ``(x, x')``.

    Raises
    ------
    SpectrumHitError
        ``C - D M(z)`` singular, i.e. ``z`` is an eigenvalue.
    EvaluationError
        ``x == x'`` or a point coincides with a center.
    """
    return KreinResolvent(pair, config, z)(x, xp)
