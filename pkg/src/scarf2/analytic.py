"""Exact scattering amplitudes of the complex Scarf II potential.

    V(x) = P sech^2 x + Q sech x tanh x,   P = B^2 - A^2 - A,  Q = B(2A + 1)

Transmission is the Khare-Sukhatme Gamma-function ratio, reflection is
``r = t * f``.  Side convention, fixed everywhere in this package:
Left <-> (A, B), Right <-> (A, -B).  Left incidence means the wave comes in
from x = -inf.
"""

import cmath
import enum
from dataclasses import dataclass

import numpy as np

from .special_functions import (
    PoleAtNonPositiveInteger,
    cospi,
    log_gamma,
    log_gamma_array,
    rgamma,
    sinpi,
)

__all__ = [
    "Side",
    "ScarfParams",
    "ScatteringResult",
    "ReflectionZero",
    "PoleOfT",
    "potential",
    "transmission_amplitude",
    "inverse_transmission",
    "f_factor",
    "det_s_factor",
    "scattering_coefficients",
    "reflection_zero_general",
]

# labels for the four numerator factors of t(k)
NUMERATOR_FACTORS = ("G(-A-ik)", "G(1+A-ik)", "G(1/2+iB-ik)", "G(1/2-iB-ik)")


class Side(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class PoleOfT(ArithmeticError):
    """t(k) is infinite: one of the numerator Gamma factors hit a pole."""

    def __init__(self, k, which_gamma):
        self.k = complex(k)
        self.which_gamma = which_gamma
        super().__init__(f"t(k) has a pole at k = {self.k!r} from {which_gamma}")


@dataclass(frozen=True)
class ScarfParams:
    A: complex
    B: complex

    def __post_init__(self):
        A, B = complex(self.A), complex(self.B)
        if not (cmath.isfinite(A) and cmath.isfinite(B)):
            raise ValueError(f"non-finite Scarf parameters A={A}, B={B}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def P(self):
        return self.B**2 - self.A**2 - self.A

    @property
    def Q(self):
        return self.B * (2 * self.A + 1)

    def flipped(self):
        """Parameters seen by a wave incident from the right, (A, -B)."""
        return ScarfParams(self.A, -self.B)

    def conjugate(self):
        """Parameters of the time-reversed potential conj(V(x))."""
        return ScarfParams(self.A.conjugate(), self.B.conjugate())

    def is_hermitian(self, tol=0.0):
        return abs(self.P.imag) <= tol and abs(self.Q.imag) <= tol


@dataclass(frozen=True)
class ScatteringResult:
    """Amplitudes and probabilities at one wavenumber.

    At a pole of t every numeric field is None and ``pole`` names the Gamma
    factor that diverged; no field ever holds a float infinity.
    """

    k: float
    t: complex | None
    r_left: complex | None
    r_right: complex | None
    T: float | None
    R_left: float | None
    R_right: float | None
    det_S_abs: float | None
    pole: str | None = None

    @property
    def infinite(self):
        return self.pole is not None


@dataclass(frozen=True)
class ReflectionZero:
    """Real wavenumber at which the reflection from ``side`` vanishes."""

    k: float
    side: Side
    argument: float  # tanh(pi k) = argument on the zero side


def potential(params, x):
    """V(x) for scalar or array ``x``."""
    x = np.asarray(x, dtype=float)
    sech = 1.0 / np.cosh(x)
    v = np.asarray(params.P * sech**2 + params.Q * sech * np.tanh(x))
    return v if v.ndim else complex(v)


def _numerator_args(A, B, k):
    ik = 1j * k
    return (-A - ik, 1.0 + A - ik, 0.5 + 1j * B - ik, 0.5 - 1j * B - ik)


def _denominator_args(k):
    ik = 1j * k
    return (-ik, 1.0 - ik, 0.5 - ik, 0.5 - ik)


def transmission_amplitude(params, k):
    """t_{A,B}(k) evaluated as one exponential of a sum of log-Gammas.

    ``k`` may be complex (analytic continuation, used for pole finding and
    for the time-reversed reading t(-k)).  ``k = 0`` returns the generic
    low-energy limit 0.

    Raises
    ------
    PoleOfT
        when a numerator argument sits on a Gamma pole.
    """
    k = complex(k)
    if k == 0:
        return 0j
    log_t = 0j
    for label, z in zip(NUMERATOR_FACTORS, _numerator_args(params.A, params.B, k)):
        try:
            log_t += log_gamma(z)
        except PoleAtNonPositiveInteger:
            raise PoleOfT(k, label) from None
    for z in _denominator_args(k):
        try:
            log_t -= log_gamma(z)
        except PoleAtNonPositiveInteger:
            # denominator pole: t has a zero here
            return 0j
    return cmath.exp(log_t)


def inverse_transmission(params, k):
    """g(k) = 1/t(k) on scalar or array ``k``.

    Entire in the numerator factors (they enter through 1/Gamma), so zeros
    of g are exactly the poles of t.  Denominator poles of t (k = -i n,
    k = -i(n + 1/2)) make g non-finite.
    """
    k = np.asarray(k, dtype=complex)
    g = np.ones_like(k)
    with np.errstate(over="ignore", invalid="ignore"):
        for z in _numerator_args(params.A, params.B, k):
            g = g * rgamma(z)
        log_den = sum(log_gamma_array(z) for z in _denominator_args(k))
        g = g * np.exp(log_den)
    return g if g.ndim else complex(g)


def f_factor(params, k, side=Side.LEFT):
    """Reflection-to-transmission ratio f, so that r_side = t * f_side."""
    A = params.A
    B = params.B if Side(side) is Side.LEFT else -params.B
    pk = np.pi * k
    cos_a, sin_a = complex(cospi(A)), complex(sinpi(A))
    return (cos_a * cmath.sinh(np.pi * B) / cmath.cosh(pk)
            + 1j * sin_a * cmath.cosh(np.pi * B) / cmath.sinh(pk))


def det_s_factor(params, k):
    """1 - f_left f_right in product form.

    sinh(pi(k+iA)) sinh(pi(k-iA)) cosh(pi(k+B)) cosh(pi(k-B))
    / (sinh^2(pi k) cosh^2(pi k)).  The zeros of the numerator cancel poles
    of t^2, so |t|^2 times this stays accurate right next to a pole, where
    t^2 - r_l r_r would lose every digit to cancellation.
    """
    A, B = params.A, params.B
    pk = np.pi * k
    num = (cmath.sinh(pk + 1j * np.pi * A) * cmath.sinh(pk - 1j * np.pi * A)
           * cmath.cosh(pk + np.pi * B) * cmath.cosh(pk - np.pi * B))
    return num / (cmath.sinh(pk) ** 2 * cmath.cosh(pk) ** 2)


def scattering_coefficients(params, k):
    """t, r_left, r_right, the probabilities and |det S| at real ``k != 0``.

    Negative ``k`` is the analytic continuation (time-reversed reading).
    """
    k = float(k)
    if k == 0.0:
        raise ValueError("scattering_coefficients needs k != 0; t(0) = 0 is a limit")
    try:
        t = transmission_amplitude(params, k)
    except PoleOfT as exc:
        return ScatteringResult(k, None, None, None, None, None, None, None,
                                pole=exc.which_gamma)
    f_l = f_factor(params, k, Side.LEFT)
    f_r = f_factor(params, k, Side.RIGHT)
    r_l, r_r = t * f_l, t * f_r
    T = abs(t) ** 2
    return ScatteringResult(
        k=k, t=t, r_left=r_l, r_right=r_r,
        T=T, R_left=abs(r_l) ** 2, R_right=abs(r_r) ** 2,
        det_S_abs=T * abs(det_s_factor(params, k)),
    )


def reflection_zero_general(params, imag_tol=1e-12):
    """Positive real k at which one side's reflection vanishes, if any.

    f_{A,B}(k) = 0  <=>  tanh(pi k) = s,  s = -i tan(pi A) coth(pi B),
    and the right side uses -s.  A zero on the real axis needs s real and
    |s| < 1; this covers A or B purely imaginary as well as the shifted
    families where B carries an extra i/2.  Returns None otherwise.
    """
    A, B = params.A, params.B
    try:
        s = -1j * complex(sinpi(A)) / (complex(cospi(A)) * cmath.tanh(np.pi * B))
    except ZeroDivisionError:
        return None
    if not cmath.isfinite(s) or abs(s.imag) > imag_tol * max(1.0, abs(s)):
        return None
    s = s.real
    if s == 0.0 or abs(s) >= 1.0:
        return None
    side = Side.LEFT if s > 0 else Side.RIGHT
    return ReflectionZero(k=float(np.arctanh(abs(s)) / np.pi), side=side, argument=abs(s))
