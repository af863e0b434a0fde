"""Complex Gamma, log-Gamma and reciprocal Gamma.

Lanczos approximation (g = 7, 9 coefficients) on Re z >= 1/2 and the
reflection formula elsewhere.  Every function accepts a scalar or an
ndarray; the scalar entry points raise on poles, the array paths do not.
"""

import numpy as np

__all__ = [
    "POLE_TOL",
    "PoleAtNonPositiveInteger",
    "log_gamma",
    "gamma",
    "rgamma",
    "log_gamma_array",
    "sinpi",
    "cospi",
]

POLE_TOL = 1e-9

_G = 7.0
_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)
_LOG_PI = np.log(np.pi)


class PoleAtNonPositiveInteger(ArithmeticError):
    """Raised when Gamma is evaluated within POLE_TOL of -n, n = 0, 1, 2, ..."""

    def __init__(self, z, n):
        self.z = complex(z)
        self.n = int(n)
        super().__init__(f"Gamma pole at z = {self.z!r} (nearest -{self.n})")


def sinpi(z):
    """sin(pi z) with the real part reduced to [-1/2, 1/2] first.

    The reduction keeps full relative accuracy near the integers, which is
    where the Gamma poles (and the zeros of 1/Gamma) sit.
    """
    z = np.asarray(z, dtype=complex)
    n = np.round(z.real)
    w = z - n
    sign = np.where(np.mod(n, 2.0) == 0.0, 1.0, -1.0)
    return sign * np.sin(np.pi * w)


def cospi(z):
    """cos(pi z) = sin(pi (z + 1/2)), exactly zero at the half-integers."""
    return sinpi(np.asarray(z, dtype=complex) + 0.5)


def _lanczos_log(z):
    # valid for Re z >= 1/2
    w = z - 1.0
    x = np.full_like(w, _COEF[0])
    for i in range(1, len(_COEF)):
        x = x + _COEF[i] / (w + i)
    t = w + _G + 0.5
    return _HALF_LOG_2PI + (w + 0.5) * np.log(t) - t + np.log(x)


def log_gamma_array(z):
    """Principal-branch log Gamma on an array; non-finite at the poles."""
    z = np.asarray(z, dtype=complex)
    right = z.real >= 0.5
    zr = np.where(right, z, 1.0 - z)
    lg = _lanczos_log(zr)
    with np.errstate(divide="ignore", invalid="ignore"):
        # branch correction keeps the result continuous across Im z = 0
        # on the cut plane, matching the principal branch
        corr = np.copysign(2.0 * np.pi, z.imag) * np.floor(0.5 * z.real + 0.25)
        refl = _LOG_PI - np.log(sinpi(z)) - lg + 1j * corr
        # on the cut itself take the limit from Im z > 0
        on_cut = -np.pi * np.maximum(np.ceil(-z.real), 0.0)
        refl = np.where(z.imag == 0.0, refl.real + 1j * on_cut, refl)
    out = np.where(right, lg, refl)
    return out if out.ndim else out[()]


def _check_pole(z):
    if z.real < 0.5:
        n = round(-z.real)
        if n >= 0 and abs(z + n) < POLE_TOL:
            raise PoleAtNonPositiveInteger(z, n)


def log_gamma(z):
    """Principal branch of log Gamma(z) for a scalar complex ``z``.

    Raises
    ------
    PoleAtNonPositiveInteger
        if ``|z + n| < POLE_TOL`` for some integer ``n >= 0``.
    """
    z = complex(z)
    _check_pole(z)
    return complex(log_gamma_array(z))


def gamma(z):
    """Gamma(z) for scalar complex ``z``; same pole signalling as log_gamma."""
    z = complex(z)
    _check_pole(z)
    if z.real >= 0.5:
        return complex(np.exp(_lanczos_log(np.complex128(z))))
    # direct reflection avoids exp(log) round trips for negative real z
    return complex(np.pi / (sinpi(z) * np.exp(_lanczos_log(np.complex128(1.0 - z)))))


def rgamma(z):
    """1/Gamma(z), entire; exactly zero at the non-positive integers."""
    z = np.asarray(z, dtype=complex)
    right = z.real >= 0.5
    zr = np.where(right, z, 1.0 - z)
    g = np.exp(_lanczos_log(zr))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(right, 1.0 / g, sinpi(z) * g / np.pi)
    return out if out.ndim else complex(out)
