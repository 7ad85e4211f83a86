r"""Complex special functions for the Weyl-function and kernel formulas.

Everything here is written for the closed upper half-plane of the
momentum variable :math:`w = \sqrt{z}`, which is where the square-root
branch below sends every spectral parameter :math:`z`.

Hankel function :math:`H_0^{(1)}(w)`, ``Im w >= 0``:

* ``|w| <= SERIES_RADIUS``: ascending series for :math:`J_0` and :math:`Y_0`.
* ``SERIES_RADIUS < |w| <= ASYMPTOTIC_RADIUS``: the Laplace-type integral

  .. math::

      H_0^{(1)}(w) = \sqrt{\frac{2}{\pi w}} e^{i(w-\pi/4)}
      \frac{1}{\sqrt\pi}\int_0^\infty e^{-u}u^{-1/2}
      \Bigl(1 + \frac{iu}{2w}\Bigr)^{-1/2}du

  evaluated with Gauss-Hermite nodes after ``u = v**2``. Its termwise
  expansion is the Hankel asymptotic series, so this zone is the
  convergent completion of the asymptotic one.
* ``|w| > ASYMPTOTIC_RADIUS``: truncated Hankel asymptotic series.

Purely imaginary arguments ``w = i t`` go through :math:`K_0(t)` using
:math:`H_0^{(1)}(it) = -\tfrac{2i}{\pi}K_0(t)`, which avoids the
cancellation of the :math:`J_0 + iY_0` series on the imaginary axis.
"""

import math

import numpy as np

from .errors import ConfigurationError, DomainError

EULER_GAMMA = 0.57721566490153286061

# Crossover radii; overlap agreement at both is checked in the test suite.
SERIES_RADIUS = 2.0
ASYMPTOTIC_RADIUS = 16.0

_SERIES_TERMS = 30
# Terms of the asymptotic series decrease up to k ~ 2|w|, so 2*R terms is
# the optimal truncation at the crossover and better beyond it.
_ASYMPTOTIC_TERMS = int(2 * ASYMPTOTIC_RADIUS)

_gh_x, _gh_w = np.polynomial.hermite.hermgauss(120)
_LAPLACE_U = _gh_x[_gh_x > 0] ** 2
_LAPLACE_W = 2.0 * _gh_w[_gh_x > 0] / math.sqrt(math.pi)
del _gh_x, _gh_w


def _asymptotic_coefficients(nterms):
    # a_k(0) = (-1)^k ((2k-1)!!)^2 / (k! 8^k), by recurrence
    a = np.empty(nterms)
    a[0] = 1.0
    for k in range(1, nterms):
        a[k] = -a[k - 1] * (2 * k - 1) ** 2 / (8.0 * k)
    return a


_ASYMPTOTIC_A = _asymptotic_coefficients(_ASYMPTOTIC_TERMS)


def digamma_one():
    """Return psi(1) = Gamma'(1)/Gamma(1) = -gamma."""
    return -EULER_GAMMA


def branch_sqrt(z):
    r"""Square root with ``Im(sqrt z) >= 0``.

    This is :math:`\exp(\tfrac12\log z)` with the argument of ``z`` taken
    in :math:`[0, 2\pi)`: continuous off :math:`[0,\infty)`, equal to
    ``i*sqrt(|z|)`` on the negative axis and to the positive root on the
    positive axis (the boundary value from the upper half-plane).

    Accepts scalars or arrays.
    """
    if np.ndim(z) == 0:
        w = np.sqrt(complex(z))
        if w.imag < 0.0:
            w = -w
        return complex(w)
    w = np.sqrt(np.asarray(z, dtype=complex))
    return np.where(w.imag < 0.0, -w, w)


# --------------------------------------------------------------------------
# zone evaluators (array in, array out; no validation)


def _h0_series(w):
    q = w * w / 4.0
    term = np.ones_like(w)
    j0 = term.copy()
    harmonic_sum = np.zeros_like(w)
    h = 0.0
    for k in range(1, _SERIES_TERMS):
        term = term * (-q) / (k * k)
        h += 1.0 / k
        j0 = j0 + term
        harmonic_sum = harmonic_sum + h * term
    y0 = (2.0 / np.pi) * ((np.log(w / 2.0) + EULER_GAMMA) * j0 - harmonic_sum)
    return j0 + 1j * y0


def _j0_series(t):
    q = t * t / 4.0
    term = np.ones_like(t)
    total = term.copy()
    for k in range(1, _SERIES_TERMS):
        term = term * (-q) / (k * k)
        total = total + term
    return total


def _h0_laplace(w):
    g = (1.0 + 1j * _LAPLACE_U[None, :] / (2.0 * w[:, None])) ** -0.5
    integral = g @ _LAPLACE_W
    return np.sqrt(2.0 / (np.pi * w)) * np.exp(1j * (w - np.pi / 4.0)) * integral


def _h0_asymptotic(w):
    total = np.zeros_like(w)
    power = np.ones_like(w)
    ratio = 1j / w
    for a in _ASYMPTOTIC_A:
        total = total + a * power
        power = power * ratio
    return np.sqrt(2.0 / (np.pi * w)) * np.exp(1j * (w - np.pi / 4.0)) * total


def _k0_series(t):
    q = t * t / 4.0
    term = np.ones_like(t)
    i0 = term.copy()
    harmonic_sum = np.zeros_like(t)
    h = 0.0
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * k)
        h += 1.0 / k
        i0 = i0 + term
        harmonic_sum = harmonic_sum + h * term
    return -(np.log(t / 2.0) + EULER_GAMMA) * i0 + harmonic_sum


def _k0_laplace(t):
    g = (1.0 + _LAPLACE_U[None, :] / (2.0 * t[:, None])) ** -0.5
    integral = g @ _LAPLACE_W
    return np.sqrt(np.pi / (2.0 * t)) * np.exp(-t) * integral


def _k0_asymptotic(t):
    total = np.zeros_like(t)
    power = np.ones_like(t)
    for a in _ASYMPTOTIC_A:
        total = total + a * power
        power = power / t
    return np.sqrt(np.pi / (2.0 * t)) * np.exp(-t) * total


def _k0_array(t):
    out = np.empty_like(t)
    small = t <= SERIES_RADIUS
    large = t > ASYMPTOTIC_RADIUS
    mid = ~(small | large)
    if small.any():
        out[small] = _k0_series(t[small])
    if mid.any():
        out[mid] = _k0_laplace(t[mid])
    if large.any():
        out[large] = _k0_asymptotic(t[large])
    return out


def _h0_array(w):
    out = np.empty_like(w)
    imag_axis = (w.real == 0.0) & (w.imag > 0.0)
    if imag_axis.any():
        out[imag_axis] = -2j / np.pi * _k0_array(w.imag[imag_axis])
    r = np.abs(w)
    rest = ~imag_axis
    small = rest & (r <= SERIES_RADIUS)
    large = rest & (r > ASYMPTOTIC_RADIUS)
    mid = rest & ~(small | large)
    if small.any():
        out[small] = _h0_series(w[small])
    if mid.any():
        out[mid] = _h0_laplace(w[mid])
    if large.any():
        out[large] = _h0_asymptotic(w[large])
    return out


# --------------------------------------------------------------------------
# public functions


def hankel0_first(w):
    r"""Hankel function of the first kind and order zero, :math:`H_0^{(1)}(w)`.

    Parameters
    ----------
    w : complex or array_like
        Argument(s) in the closed upper half-plane, ``w != 0``.

    Returns
    -------
    complex or ndarray
        Relative accuracy about 1e-13 for ``1e-8 <= |w| <= 1e4``.

    Raises
    ------
    DomainError
        If any ``w == 0`` (logarithmic singularity) or ``Im w < 0``.
    """
    scalar = np.ndim(w) == 0
    arr = np.atleast_1d(np.asarray(w, dtype=complex))
    if not np.all(np.isfinite(arr)):
        raise DomainError("hankel0_first: non-finite argument")
    if np.any(arr == 0):
        raise DomainError("hankel0_first: logarithmic singularity at w = 0")
    if np.any(arr.imag < 0):
        raise DomainError("hankel0_first: requires Im w >= 0")
    out = _h0_array(arr.ravel()).reshape(arr.shape)
    return complex(out[0]) if scalar else out


def bessel_k0(t):
    """Modified Bessel function K0 for real ``t > 0``."""
    scalar = np.ndim(t) == 0
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(~(arr > 0)):
        raise DomainError("bessel_k0: requires t > 0")
    out = _k0_array(arr.ravel()).reshape(arr.shape)
    return float(out[0]) if scalar else out


def bessel_j0(t):
    """Bessel function J0 for real ``t >= 0`` (absolute accuracy ~1e-14)."""
    scalar = np.ndim(t) == 0
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(~(arr >= 0)):
        raise DomainError("bessel_j0: requires t >= 0")
    flat = arr.ravel()
    out = np.empty_like(flat)
    small = flat <= SERIES_RADIUS
    if small.any():
        out[small] = _j0_series(flat[small])
    if (~small).any():
        out[~small] = _h0_array(flat[~small].astype(complex)).real
    out = out.reshape(arr.shape)
    return float(out[0]) if scalar else out


def green_from_root(d, w, r):
    r"""Regularized free Green kernel given the momentum ``w = sqrt(z)``.

    3D: :math:`e^{iwr}/(4\pi r)`; 2D: :math:`\tfrac{i}{4}H_0^{(1)}(wr)`;
    zero at ``r == 0``. ``w`` must be a scalar with ``Im w >= 0``; ``r``
    may be an array. Real positive ``w`` gives the boundary value on the
    positive half-axis.
    """
    if d not in (2, 3):
        raise ConfigurationError(f"dimension must be 2 or 3, got {d!r}")
    w = complex(w)
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.zeros(r.shape, dtype=complex)
    pos = r > 0
    if pos.any():
        rp = r[pos]
        if d == 3:
            out[pos] = np.exp(1j * w * rp) / (4.0 * np.pi * rp)
        else:
            out[pos] = 0.25j * hankel0_first(w * rp)
    return complex(out[0]) if scalar else out


def free_green(d, z, r):
    r"""Free-space kernel :math:`\widetilde G_{\sqrt z}` at separation ``r``.

    Parameters
    ----------
    d : {2, 3}
    z : complex
        Spectral parameter off :math:`[0, \infty)`.
    r : float or array_like
        Separations ``>= 0``; ``r == 0`` maps to 0 (diagonal convention
        used in Weyl-matrix assembly).
    """
    if d not in (2, 3):
        raise ConfigurationError(f"dimension must be 2 or 3, got {d!r}")
    z = complex(z)
    if z.imag == 0.0 and z.real >= 0.0:
        raise DomainError(f"free_green: z = {z} lies on [0, inf)")
    if np.any(np.asarray(r) < 0):
        raise DomainError("free_green: separations must be nonnegative")
    return green_from_root(d, branch_sqrt(z), r)
