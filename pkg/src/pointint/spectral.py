r"""Negative point spectrum of self-adjoint extensions.

A negative number ``z = -s**2`` is an eigenvalue exactly when
``C - D M(z)`` is singular. For a self-adjoint pair the relation
:math:`\Theta = \{(h, h') : Ch = Dh'\}` splits into an operator part
``B`` on ``ran D*`` and a multivalued part ``ker D``; singularity of
``C - D M(z)`` is then equivalent to singularity of the Hermitian matrix
``B - Q* M(z) Q`` (Q an orthonormal basis of ``ran D*``). Since ``M`` is
increasing on the negative half-axis, every sorted eigenvalue of that
matrix is an increasing function of ``s`` and crosses zero at most once,
so bracketing each branch on a grid and refining it finds all roots.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import ConfigurationError, EvaluationError, ScanBoundaryWarning, UnsupportedFormulaError
from .extensions import is_self_adjoint, nonnegativity_form
from .matrixkernel import INERTIA_RTOL, RANK_RTOL, inertia, norm2, nullspace
from .specfun import digamma_one
from .weyl import FOUR_PI, TWO_PI, gamma_field_eval, log_form_matrix, weyl_negative, weyl_zero

DEFAULT_GRID = 2000
DEFAULT_XTOL = 1e-13
# roots closer than this (relative, in s) are one eigenvalue of higher multiplicity
MERGE_RTOL = 1e-10
RESIDUAL_TOL = 1e-8


@dataclass
class BoundStateResult:
    """Negative eigenvalue ``energy`` of multiplicity ``multiplicity``.

    ``coefficients`` holds an orthonormal basis (columns, length nm, block
    order) of ``ker(C - D M(energy))``; the eigenfunctions are
    ``gamma(energy) c``.
    """

    energy: float
    multiplicity: int
    coefficients: np.ndarray
    refinement_residual: float
    best_effort: bool = False

    @property
    def momentum(self):
        return float(np.sqrt(-self.energy))

    def as_dict(self):
        return {
            "energy": self.energy,
            "multiplicity": self.multiplicity,
            "coefficients": [[[c.real, c.imag] for c in col] for col in self.coefficients.T],
            "refinement_residual": self.refinement_residual,
            "best_effort": self.best_effort,
        }


@dataclass(frozen=True)
class GerschgorinReport:
    K_set: tuple
    m_prime: int
    lower_bound_holds: bool
    exact: bool

    def as_dict(self):
        return {"K_set": list(self.K_set), "m_prime": self.m_prime,
                "lower_bound_holds": self.lower_bound_holds, "exact": self.exact}


@dataclass(frozen=True)
class OperatorPart:
    """Operator part ``B`` of a self-adjoint relation on ``ran D*``.

    ``Q`` is None when ``D`` is the identity (then ``B = C``).
    """

    B: np.ndarray
    Q: np.ndarray = None

    @property
    def size(self):
        return self.B.shape[0]

    def compress(self, M):
        """``Q* M Q`` for a stack of full-space matrices."""
        if self.Q is None:
            return M
        return self.Q.conj().T @ M @ self.Q

    def lift(self, a):
        return a if self.Q is None else self.Q @ a


def operator_part(pair, rank_tol=RANK_RTOL):
    C, D = pair.C, pair.D
    size = C.shape[0]
    if np.array_equal(D, np.eye(size)):
        return OperatorPart(0.5 * (C + C.conj().T))
    U, s, Vh = np.linalg.svd(D)
    scale = max(norm2(C), s[0] if s.size else 0.0)
    k = int(np.sum(s > rank_tol * scale))
    Q = Vh[:k].conj().T
    # D Q = U_k diag(s_k), so (D Q)^+ C Q = diag(1/s_k) U_k* C Q
    B = (U[:, :k].conj().T @ C @ Q) / s[:k, None]
    return OperatorPart(0.5 * (B + B.conj().T), Q)


def _full_weyl_negative(config, s):
    blocks = weyl_negative(config, s)
    if config.n == 1:
        return blocks
    eye = np.eye(config.n)
    return np.stack([np.kron(eye, b) for b in blocks])


def default_s_max(config, bnorm):
    """Upper end of the momentum scan.

    3D: ``4 pi (||B|| + 1) + 10/min_sep``, which bounds every branch root.
    2D adds the scale ``2 exp(psi(1) + 2 pi ||B|| + 1)`` at which the
    logarithmic diagonal dominates ``B``.
    """
    min_sep = config.min_separation
    tail = 10.0 / min_sep if np.isfinite(min_sep) else 0.0
    s_max = FOUR_PI * (bnorm + 1.0) + tail
    if config.d == 2:
        # s = exp(354) already overflows z = -s**2
        expo = min(digamma_one() + TWO_PI * bnorm + 1.0, 350.0)
        s_max = max(s_max, 2.0 * np.exp(expo) + tail)
    return float(s_max)


def _s_floor(config, bnorm, s_max):
    if config.d == 3:
        return 0.0
    lnorm = norm2(log_form_matrix(config))
    expo = digamma_one() - TWO_PI * (bnorm + lnorm) - 2.0
    return float(min(max(2.0 * np.exp(max(expo, -690.0)), 1e-300), 1e-6 * s_max))


def _scan_grid(s_lo, s_max, grid):
    uniform = np.linspace(s_lo, s_max, grid)
    first = uniform[1] if uniform.size > 1 else s_max
    low = max(s_lo, 1e-12 * s_max) if s_lo == 0.0 else s_lo
    geometric = np.geomspace(low, first, 64) if first > low else np.array([])
    return np.unique(np.concatenate([[s_lo], geometric, uniform]))


def _check_pair(pair, config):
    pair.check_size(config)
    if not is_self_adjoint(pair).self_adjoint:
        raise ConfigurationError("bound_states requires a self-adjoint boundary pair")


def bound_states(pair, config, s_max=None, grid=DEFAULT_GRID, xtol=DEFAULT_XTOL, method="auto"):
    """All negative eigenvalues ``z`` in ``(-s_max**2, 0)``.

    Parameters
    ----------
    pair : BoundaryPair
        Self-adjoint pair.
    config : PointConfiguration
    s_max : float, optional
        Scan bound on ``s = sqrt(|z|)``; see :func:`default_s_max`.
    grid : int
        Number of uniform grid points in ``s``.
    xtol : float
        Relative width to which each root is refined in ``s``.
    method : {"auto", "sigma_min"}
        ``"auto"`` tracks eigenvalue branches of the operator part and is
        complete. ``"sigma_min"`` scans the smallest singular value of
        ``C - D M(-s**2)`` and refines local minima; results are flagged
        ``best_effort``.

    Returns
    -------
    list of BoundStateResult
        Sorted by energy (most negative first).

    Warns
    -----
    ScanBoundaryWarning
        If a branch is still negative at ``s_max``.
    """
    _check_pair(pair, config)
    red = operator_part(pair)
    if red.size == 0:
        return []
    bnorm = norm2(red.B)
    if s_max is None:
        s_max = default_s_max(config, bnorm)
    s_lo = _s_floor(config, bnorm, s_max)
    svals = _scan_grid(s_lo, s_max, max(int(grid), 2))
    if method == "sigma_min":
        return _scan_sigma_min(pair, config, svals, xtol)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")

    def branch_stack(s):
        return red.B[None, :, :] - red.compress(_full_weyl_negative(config, s))

    lam = np.linalg.eigvalsh(branch_stack(svals))
    scale0 = np.max(np.abs(lam[0])) if lam.shape[1] else 0.0
    zero_tol = INERTIA_RTOL * scale0
    roots = []
    for k in range(red.size):
        if not lam[0, k] < -zero_tol:
            continue
        above = np.flatnonzero(lam[:, k] >= 0.0)
        if above.size == 0:
            warnings.warn(
                f"eigenvalue branch {k} is still negative at s_max = {s_max:.6g}; "
                "increase s_max", ScanBoundaryWarning, stacklevel=2)
            continue
        i = int(above[0])
        a, b = svals[i - 1], svals[i]
        if lam[i, k] == 0.0:
            roots.append(b)
            continue

        def f(s, k=k):
            return np.linalg.eigvalsh(branch_stack(np.array([s]))[0])[k]

        roots.append(brentq(f, a, b, xtol=xtol * b, rtol=1e-15, maxiter=500))

    results = [_assemble(pair, config, red, cluster) for cluster in _clusters(roots)]
    _sanity(config, red, results)
    return sorted(results, key=lambda r: r.energy)


def _clusters(roots):
    roots = sorted(roots)
    clusters = []
    for s in roots:
        if clusters and abs(s - clusters[-1][-1]) <= MERGE_RTOL * s:
            clusters[-1].append(s)
        else:
            clusters.append([s])
    return clusters


def _assemble(pair, config, red, cluster):
    mult = len(cluster)
    s = float(np.mean(cluster))
    H = red.B - red.compress(_full_weyl_negative(config, s)[0])
    w, V = np.linalg.eigh(0.5 * (H + H.conj().T))
    pick = np.argsort(np.abs(w))[:mult]
    coeffs = red.lift(V[:, pick])
    coeffs, _ = np.linalg.qr(coeffs)
    return BoundStateResult(-s * s, mult, coeffs, _residual(pair, config, s, coeffs))


def _residual(pair, config, s, coeffs):
    """``max ||(C - D M) c||`` relative to ``||C|| + ||D|| ||M||``.

    ``||C - D M||`` itself is no scale here: it vanishes at a root when
    the system is scalar.
    """
    M = _full_weyl_negative(config, s)[0]
    A = pair.C - pair.D @ M
    scale = norm2(pair.C) + norm2(pair.D) * norm2(M)
    if scale == 0.0:
        return 0.0
    return float(max(np.linalg.norm(A @ c) for c in coeffs.T) / scale)


def _sanity(config, red, results):
    total = sum(r.multiplicity for r in results)
    if total > config.size:
        warnings.warn(f"found {total} bound states, more than n*m = {config.size}", RuntimeWarning,
                      stacklevel=3)
    if config.d == 2 and config.m == 1 and total != red.size:
        warnings.warn(f"single 2D center should give {red.size} bound states, found {total}",
                      RuntimeWarning, stacklevel=3)


def _scan_sigma_min(pair, config, svals, xtol):
    C, D = pair.C, pair.D

    def system(s):
        return C - D @ _full_weyl_negative(config, np.atleast_1d(s))

    def scale(s):
        return norm2(C) + norm2(D) * norm2(_full_weyl_negative(config, s)[0])

    smin = np.linalg.svd(system(svals), compute_uv=False)[:, -1]
    results = []
    for i in range(len(svals)):
        left = smin[i - 1] if i > 0 else np.inf
        right = smin[i + 1] if i + 1 < len(svals) else np.inf
        if not (smin[i] <= left and smin[i] < right):
            continue
        lo, hi = svals[max(i - 1, 0)], svals[min(i + 1, len(svals) - 1)]
        if hi <= lo:
            continue
        opt = minimize_scalar(
            lambda s: np.linalg.svd(system(s)[0], compute_uv=False)[-1],
            bounds=(lo, hi), method="bounded",
            options={"xatol": xtol * hi, "maxiter": 500})
        s = float(opt.x)
        A = system(s)[0]
        if opt.fun > RESIDUAL_TOL * scale(s) or s <= 0.0:
            continue
        basis = nullspace(A, tol=RESIDUAL_TOL * scale(s) / max(norm2(A), 1e-300))
        mult = max(basis.shape[1], 1)
        if basis.shape[1] == 0:
            basis = np.linalg.svd(A)[2][-1:].conj().T
        results.append(BoundStateResult(-s * s, mult, basis, _residual(pair, config, s, basis),
                                        best_effort=True))
    return sorted(results, key=lambda r: r.energy)


def kappa_minus(pair, config):
    """Number of negative eigenvalues, ``kappa_-(C D* - D M(0) D*)`` (3D)."""
    if config.d != 3:
        raise UnsupportedFormulaError(
            "kappa_minus needs the matrix M(0), which is a relation in 2D; "
            "count roots with bound_states instead")
    _check_pair(pair, config)
    return inertia(nonnegativity_form(pair, weyl_zero(config).full_M0)).negative


def eigenfunction_eval(result, config, x, index=0):
    """Unnormalized eigenfunction ``sum_j c_j G_{sqrt z}(|x - x_j|)`` at ``x``.

    ``index`` selects the basis vector when the multiplicity exceeds one.
    """
    c = np.asarray(result.coefficients)
    c = c[:, index] if c.ndim == 2 else c
    xi = c.reshape(config.n, config.m).T
    try:
        return gamma_field_eval(config, result.energy, xi, x)
    except EvaluationError:
        raise EvaluationError("eigenfunctions are singular at the interaction centers") from None


def gerschgorin_check(alpha, config, K_set):
    """Gerschgorin sufficient conditions for the diagonal family in 3D.

    (i)  ``alpha_k < -sum_{j != k} 1/(4 pi r_jk)`` for every k in K_set
    gives ``kappa_- >= |K_set|``; (ii) if moreover
    ``alpha_k >= sum_{j != k} 1/(4 pi r_jk)`` for every other k, then
    ``kappa_- = |K_set|``. Indices are 0-based.
    """
    if config.d != 3:
        raise UnsupportedFormulaError("the Gerschgorin conditions are stated for d = 3")
    alpha = np.asarray(alpha, dtype=float).reshape(-1)
    if alpha.size != config.m:
        raise ConfigurationError(f"expected {config.m} coupling constants, got {alpha.size}")
    K = tuple(sorted(set(int(k) for k in K_set)))
    if any(k < 0 or k >= config.m for k in K):
        raise ConfigurationError(f"K_set indices must lie in [0, {config.m})")
    radius = weyl_zero(config).M0.sum(axis=1)
    cond_i = all(alpha[k] < -radius[k] for k in K)
    others = [k for k in range(config.m) if k not in K]
    cond_ii = all(alpha[k] >= radius[k] for k in others)
    return GerschgorinReport(K, len(K), bool(cond_i), bool(cond_i and cond_ii))


def essential_spectrum(config=None):
    """The essential spectrum ``[0, inf)``, common to all extensions."""
    return (0.0, float("inf"))
