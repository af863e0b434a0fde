"""Direct numerical scattering for -psi'' + V(x) psi = k^2 psi, complex V.

This is the independent check on every Gamma-function formula: it only
uses V(x) (through P and Q) and never touches the analytic amplitudes.

Fixed-step RK4 is linear in the state for a linear ODE, so each step is a
2x2 matrix built from V at x, x + h/2, x + h.  All step matrices are formed
at once and multiplied by pairwise reduction, which gives the same RK4
solution as a step loop at numpy speed.

Boundary values at x = +-L are the Jost solutions of the exponentially
decaying tail, e^{+-ikx} * sum_n a_n e^{-n|x|}.  A bare plane wave is not
good enough at moderate L because the sech*tanh term only decays as e^{-|x|}.
"""

import cmath
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .analytic import potential

__all__ = [
    "OracleConfig",
    "OracleResult",
    "OracleError",
    "AsymptoticsInvalid",
    "StepError",
    "numerical_scatter",
    "detS_profile",
    "verify_bound_state",
    "jost_boundary",
]

_TAIL_TOL = 1e-17
_TAIL_MAX_TERMS = 80


class OracleError(RuntimeError):
    pass


class AsymptoticsInvalid(OracleError):
    pass


class StepError(OracleError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    L: float = 16.0
    n_steps: int = 40000
    method: str = "rk4"  # "rk4" | "rk45"
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_est_error: float = 1e-4

    def __post_init__(self):
        if self.L < 12:
            raise ValueError(f"L must be >= 12, got {self.L}")
        if self.method not in ("rk4", "rk45"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "rk4" and self.n_steps < 2000:
            raise ValueError(f"fixed-step RK4 needs n_steps >= 2000, got {self.n_steps}")

    @property
    def h(self):
        return 2.0 * self.L / self.n_steps


@dataclass(frozen=True)
class OracleResult:
    k: float
    t: complex        # from left incidence
    r_left: complex
    r_right: complex
    t_right: complex  # from right incidence; equals t by reciprocity
    est_error: float

    @property
    def T(self):
        return abs(self.t) ** 2

    @property
    def R_left(self):
        return abs(self.r_left) ** 2

    @property
    def R_right(self):
        return abs(self.r_right) ** 2

    @property
    def det_S_abs(self):
        return abs(self.t * self.t_right - self.r_left * self.r_right)


# ---------------------------------------------------------------- tails

def _tail_coefficients(P, Q, n):
    """v_j with V(x) = sum_j v_j e^{-j x} for x > 0 (j = 1..n)."""
    v = np.zeros(n + 1, dtype=complex)
    for j in range(1, n + 1):
        if j % 2:
            m = (j - 1) // 2
            v[j] = 2.0 * Q * (-1) ** m * (2 * m + 1)
        else:
            m = (j - 2) // 2
            v[j] = 4.0 * P * (-1) ** m * (m + 1)
    return v


def _jost_right(P, Q, kappa, x):
    """(psi, psi') at x > 0 of the solution ~ e^{i kappa x} as x -> +inf."""
    u = np.exp(-x)
    v = _tail_coefficients(P, Q, _TAIL_MAX_TERMS)
    a = [1.0 + 0j]
    psi = 1.0 + 0j
    dpsi = 1j * kappa
    for n in range(1, _TAIL_MAX_TERMS + 1):
        an = sum(v[j] * a[n - j] for j in range(1, n + 1)) / (n * (n - 2j * kappa))
        a.append(an)
        term = an * u**n
        psi += term
        dpsi += term * (1j * kappa - n)
        if abs(term) < _TAIL_TOL * abs(psi) and abs(v[n]) * u**n < _TAIL_TOL:
            break
    else:
        raise AsymptoticsInvalid(f"tail series did not converge at |x| = {x}")
    phase = cmath.exp(1j * kappa * x)
    return psi * phase, dpsi * phase


def jost_boundary(params, k, x, sign):
    """Jost solution ~ e^{sign*ikx} evaluated at ``x`` in the matching tail.

    ``x > 0`` uses the right tail, ``x < 0`` the left one (reflect x and Q).
    """
    P, Q = params.P, params.Q
    if x > 0:
        return _jost_right(P, Q, sign * k, x)
    psi, dpsi = _jost_right(P, -Q, -sign * k, -x)
    return psi, -dpsi


# ---------------------------------------------------------------- RK4

def _step_matrices(w0, wh, w1, h):
    """Component arrays of the RK4 step matrix for y' = [[0,1],[w,0]] y."""
    one = np.ones_like(w0)
    zero = np.zeros_like(w0)

    def mul(m, a):  # [[0,1],[w,0]] @ a
        return (a[2], a[3], m * a[0], m * a[1])

    def eye_plus(s, a):
        return (1 + s * a[0], s * a[1], s * a[2], 1 + s * a[3])

    k1 = (zero, one, w0, zero)
    k2 = mul(wh, eye_plus(h / 2, k1))
    k3 = mul(wh, eye_plus(h / 2, k2))
    k4 = mul(w1, eye_plus(h, k3))
    return tuple(
        (1.0 if i in (0, 3) else 0.0) + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i])
        for i in range(4)
    )


def _ordered_product(m):
    """S_{N-1} ... S_1 S_0 for component arrays of length N."""
    a, b, c, d = m
    while len(a) > 1:
        if len(a) % 2:
            a, b, c, d = (np.append(x, e) for x, e in zip((a, b, c, d), (1, 0, 0, 1)))
        # later step on the left
        a0, b0, c0, d0 = a[0::2], b[0::2], c[0::2], d[0::2]
        a1, b1, c1, d1 = a[1::2], b[1::2], c[1::2], d[1::2]
        a, b, c, d = (a1 * a0 + b1 * c0, a1 * b0 + b1 * d0,
                      c1 * a0 + d1 * c0, c1 * b0 + d1 * d0)
    return np.array([[a[0], b[0]], [c[0], d[0]]])


def _propagator_rk4(params, k2, x_start, x_end, n):
    h = (x_end - x_start) / n
    x = x_start + h * np.arange(n)
    w0 = potential(params, x) - k2
    wh = potential(params, x + h / 2) - k2
    w1 = potential(params, x + h) - k2
    return _ordered_product(_step_matrices(w0, wh, w1, h))


def _propagate_rk45(params, k2, x_start, x_end, y0, cfg, tol_scale):
    def rhs(x, y):
        return [y[1], (potential(params, x) - k2) * y[0]]

    sol = solve_ivp(rhs, (x_start, x_end), np.asarray(y0, dtype=complex), method="RK45",
                    rtol=cfg.rel_tol * tol_scale, atol=cfg.abs_tol * tol_scale)
    if not sol.success:
        raise StepError(sol.message)
    return sol.y[:, -1]


def _propagate(params, k2, x_start, x_end, y0, cfg, refine):
    """Integrate y0 from x_start to x_end; ``refine`` selects the finer run."""
    if cfg.method == "rk4":
        n = abs(round(cfg.n_steps * abs(x_end - x_start) / (2 * cfg.L)))
        n = max(n, 1) * (2 if refine else 1)
        return _propagator_rk4(params, k2, x_start, x_end, n) @ np.asarray(y0, dtype=complex)
    return _propagate_rk45(params, k2, x_start, x_end, y0, cfg, 1 / 32 if refine else 1.0)


# ------------------------------------------------------------ scattering

def _decompose(y, plus, minus):
    """Solve y = a*plus + b*minus for (a, b)."""
    m = np.array([[plus[0], minus[0]], [plus[1], minus[1]]])
    return np.linalg.solve(m, y)


def _scatter_once(params, k, cfg, refine):
    L = cfg.L
    k2 = k * k
    # left incidence: e^{ikx} out at +inf, integrate back to -L
    y_l = _propagate(params, k2, L, -L, jost_boundary(params, k, L, +1), cfg, refine)
    a, b = _decompose(y_l, jost_boundary(params, k, -L, +1), jost_boundary(params, k, -L, -1))
    t_l, r_l = 1 / a, b / a
    # right incidence: e^{-ikx} out at -inf, integrate forward to +L
    y_r = _propagate(params, k2, -L, L, jost_boundary(params, k, -L, -1), cfg, refine)
    a, b = _decompose(y_r, jost_boundary(params, k, L, -1), jost_boundary(params, k, L, +1))
    t_r, r_r = 1 / a, b / a
    return np.array([t_l, r_l, r_r, t_r])


def numerical_scatter(params, k, cfg=None):
    """t, r_left, r_right from direct integration at real ``k > 0``.

    Runs the integration at two resolutions; the finer one is returned and
    their difference is ``est_error``.

    Raises
    ------
    AsymptoticsInvalid
        for k < 0.05 or when the tail series fails at x = +-L.
    StepError
        when the step-halving estimate exceeds ``cfg.max_est_error``.
    """
    cfg = cfg or OracleConfig()
    k = float(k)
    if k < 0.05:
        raise AsymptoticsInvalid(f"oracle needs k >= 0.05, got {k}")
    coarse = _scatter_once(params, k, cfg, refine=False)
    fine = _scatter_once(params, k, cfg, refine=True)
    if not np.all(np.isfinite(fine)):
        raise StepError(f"non-finite amplitudes at k = {k}")
    scale = np.maximum(1.0, np.abs(fine))
    est = float(np.max(np.abs(fine - coarse) / scale))
    if est > cfg.max_est_error:
        raise StepError(f"step-halving error {est:.3g} exceeds {cfg.max_est_error} at k = {k}")
    t_l, r_l, r_r, t_r = (complex(v) for v in fine)
    return OracleResult(k=k, t=t_l, r_left=r_l, r_right=r_r, t_right=t_r, est_error=est)


def detS_profile(params, k_grid, cfg=None, time_reversed=False):
    """[(k, |t^2 - r_l r_r|)] from the oracle along ``k_grid``.

    ``time_reversed`` integrates conj(V) instead, which gives |det S(-k)|
    of the original potential.
    """
    target = params.conjugate() if time_reversed else params
    out = []
    for k in k_grid:
        res = numerical_scatter(target, k, cfg)
        out.append((float(k), abs(res.t**2 - res.r_left * res.r_right)))
    return out


def verify_bound_state(params, E, cfg=None):
    """Normalized Wronskian mismatch at x = 0 for a trial energy ``E < 0``.

    The solutions decaying at +inf and at -inf are integrated to the origin;
    the residual is |W| / (|y_right| |y_left|), the sine of the angle between
    the two state vectors.  It vanishes at an eigenvalue.
    """
    cfg = cfg or OracleConfig()
    E = float(E)
    if E >= 0:
        raise ValueError(f"bound states need E < 0, got {E}")
    kappa = np.sqrt(-E)
    k = 1j * kappa  # e^{ikx} = e^{-kappa x}
    L = cfg.L
    results = []
    for refine in (False, True):
        y_r = _propagate(params, E, L, 0.0, jost_boundary(params, k, L, +1), cfg, refine)
        y_l = _propagate(params, E, -L, 0.0, jost_boundary(params, k, -L, -1), cfg, refine)
        w = y_r[0] * y_l[1] - y_r[1] * y_l[0]
        results.append(abs(w) / (np.linalg.norm(y_r) * np.linalg.norm(y_l)))
    if abs(results[1] - results[0]) > cfg.max_est_error:
        raise StepError(f"bound-state residual not converged at E = {E}")
    return float(results[1])
