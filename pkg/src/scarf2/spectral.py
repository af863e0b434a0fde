"""Poles of t(k) in the complex k plane, found as zeros of g = 1/t.

The scan follows the contour picture: on a grid, a cell where both Re g and
Im g change sign holds a crossing of the two zero-contours and seeds a
Newton refinement only if the winding number of g around the cell is
positive.  This drops cells that enclose a pole of g (a zero of t) and
cells next to one, which both zero-contours cross without meeting.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .analytic import inverse_transmission

__all__ = [
    "PoleClass",
    "ScanRegion",
    "PoleRecord",
    "NonConvergence",
    "PoleSearch",
    "EnergySpectrum",
    "inverse_t_grid",
    "find_poles",
    "classify",
    "energy_spectrum",
    "REAL_TOL",
    "RESIDUAL_TOL",
]

REAL_TOL = 1e-7
RESIDUAL_TOL = 1e-10
DEDUP_TOL = 1e-6
PAIR_TOL = 1e-6
MAX_ITERATIONS = 100


class PoleClass(str, enum.Enum):
    SS = "SS"
    SELF_DUAL_SS = "SelfDualSSPair"
    BOUND_STATE = "BoundState"
    CCPE = "CCPEMember"
    UNPAIRED = "UnpairedComplex"
    UNPHYSICAL = "Unphysical"
    AMBIGUOUS = "Ambiguous"


@dataclass(frozen=True)
class ScanRegion:
    kx_min: float
    kx_max: float
    ky_min: float
    ky_max: float
    nx: int = 200
    ny: int = 200

    def __post_init__(self):
        if not (self.kx_max > self.kx_min and self.ky_max > self.ky_min):
            raise ValueError(f"empty scan region {self}")
        if self.nx < 8 or self.ny < 8:
            raise ValueError(f"grid resolution must be >= 8 per axis, got {self.nx}x{self.ny}")

    def axes(self):
        return (np.linspace(self.kx_min, self.kx_max, self.nx),
                np.linspace(self.ky_min, self.ky_max, self.ny))

    def contains(self, k, margin=0.0):
        return (self.kx_min - margin <= k.real <= self.kx_max + margin
                and self.ky_min - margin <= k.imag <= self.ky_max + margin)

    def refined(self, factor=2):
        return ScanRegion(self.kx_min, self.kx_max, self.ky_min, self.ky_max,
                          factor * (self.nx - 1) + 1, factor * (self.ny - 1) + 1)


@dataclass
class PoleRecord:
    k: complex
    cls: PoleClass
    residual: float
    partner: int | None = None

    @property
    def E(self):
        return self.k * self.k


@dataclass(frozen=True)
class NonConvergence:
    seed: complex
    last: complex
    residual: float
    reason: str


@dataclass
class PoleSearch:
    records: list
    nonconverged: list = field(default_factory=list)
    seeds: int = 0

    def roots(self):
        return [r.k for r in self.records]

    def of_class(self, *classes):
        return [r for r in self.records if r.cls in classes]


@dataclass(frozen=True)
class EnergySpectrum:
    energies: list
    ss_energy: float | None = None
    last_ccpe_real: float | None = None

    @property
    def ss_bound_holds(self):
        """E_* >= Re(E_last) when an SS coexists with CCPEs, else None."""
        if self.ss_energy is None or self.last_ccpe_real is None:
            return None
        return self.ss_energy >= self.last_ccpe_real


def inverse_t_grid(params, region):
    """g = 1/t on the region grid, shape (ny, nx); rows follow ky."""
    kx, ky = region.axes()
    k = kx[None, :] + 1j * ky[:, None]
    return inverse_transmission(params, k)


def _winding(corners):
    phases = np.angle(np.asarray(corners))
    d = np.diff(np.append(phases, phases[0]))
    d = (d + np.pi) % (2 * np.pi) - np.pi
    return int(np.round(d.sum() / (2 * np.pi)))


def _cell_winding(params, x0, x1, y0, y1, per_edge=9):
    """Winding number of g around the cell boundary, sampled finely.

    Four corners are not enough next to the double poles of g at
    k = -i(n + 1/2), where the phase turns by pi per edge and both
    zero-contours fan out of the pole without crossing.
    """
    s = np.linspace(0.0, 1.0, per_edge, endpoint=False)
    path = np.concatenate([
        x0 + (x1 - x0) * s + 1j * y0,
        x1 + 1j * (y0 + (y1 - y0) * s),
        x1 - (x1 - x0) * s + 1j * y1,
        x0 + 1j * (y1 - (y1 - y0) * s),
    ])
    values = inverse_transmission(params, path)
    if not np.all(np.isfinite(values)):
        return -1  # a pole of g sits on the boundary
    if np.any(values == 0):
        return 0
    return _winding(values)


def _seed_cells(g, kx, ky, params=None):
    """Centres of cells where both Re g and Im g change sign."""
    finite = np.isfinite(g)
    re, im = g.real, g.imag

    def changes(a):
        c = np.stack([a[:-1, :-1], a[:-1, 1:], a[1:, 1:], a[1:, :-1]])
        return (c.min(axis=0) <= 0) & (c.max(axis=0) >= 0)

    ok = finite[:-1, :-1] & finite[:-1, 1:] & finite[1:, 1:] & finite[1:, :-1]
    with np.errstate(invalid="ignore"):
        mask = changes(re) & changes(im) & ok
    seeds = []
    for j, i in zip(*np.nonzero(mask)):
        if params is None:
            corners = (g[j, i], g[j, i + 1], g[j + 1, i + 1], g[j + 1, i])
            if _winding(corners) < 0:
                continue  # encloses a zero of t, not a pole
        else:
            # the loop is a quarter cell wider on every side so that a root
            # sitting on a grid line is inside both neighbours
            dx, dy = 0.25 * (kx[i + 1] - kx[i]), 0.25 * (ky[j + 1] - ky[j])
            if _cell_winding(params, kx[i] - dx, kx[i + 1] + dx, ky[j] - dy, ky[j + 1] + dy) <= 0:
                continue  # no zero of g inside: a zero of t, or contours that only pass by
        seeds.append(complex(0.5 * (kx[i] + kx[i + 1]), 0.5 * (ky[j] + ky[j + 1])))
    return seeds


def _newton(params, k0, max_excursion=np.inf):
    k = k0
    g = inverse_transmission(params, k)
    for _ in range(MAX_ITERATIONS):
        if abs(k - k0) > max_excursion:
            return k, g, False
        h = 1e-6 * max(1.0, abs(k))
        dg = (inverse_transmission(params, k + h) - inverse_transmission(params, k - h)) / (2 * h)
        if dg == 0 or not np.isfinite(dg):
            return k, g, False
        step = g / dg
        k = k - step
        g = inverse_transmission(params, k)
        if not np.isfinite(g):
            return k, g, False
        if abs(step) < 1e-15 * max(1.0, abs(k)):
            break
    return k, g, abs(g) < RESIDUAL_TOL


def find_poles(params, region, include_unphysical=False):
    """Locate and classify the zeros of 1/t in ``region``.

    Roots with Im k < 0 are unphysical; they are dropped unless
    ``include_unphysical`` is set, in which case they are kept and labelled.
    Seeds that fail to converge are returned in ``nonconverged``.
    """
    kx, ky = region.axes()
    g = inverse_t_grid(params, region)
    seeds = _seed_cells(g, kx, ky, params)
    margin = 0.5 * max((kx[1] - kx[0]), (ky[1] - ky[0]))
    # a seed sits next to its root; anything that wanders this far has
    # lost it (and far from the window 1/Gamma overflows)
    excursion = 1.0 + 20 * margin
    roots, failures = [], []
    for seed in seeds:
        k, gk, ok = _newton(params, seed, max_excursion=excursion)
        if not ok:
            failures.append(NonConvergence(seed, complex(k), float(np.abs(np.complex128(gk))),
                                           "no convergence"))
            continue
        if not region.contains(k, margin):
            # converged onto a root outside the window; the cell that holds
            # that root (if any) is not ours to report
            continue
        if any(abs(k - r) < DEDUP_TOL for r in roots):
            continue
        roots.append(complex(k))
    if not include_unphysical:
        roots = [k for k in roots if k.imag >= -REAL_TOL]
    records = classify(roots, params)
    return PoleSearch(records=records, nonconverged=failures, seeds=len(seeds))


def _is_root(params, k):
    g = inverse_transmission(params, k)
    return np.isfinite(g) and abs(g) < RESIDUAL_TOL


def _order(z):
    # rounding keeps sub-tolerance noise (e.g. Re k ~ 1e-30 on the imaginary
    # axis) from deciding the order
    return (round(z.real, 9), round(z.imag, 9))


def classify(roots, params):
    """Label roots of 1/t with the physical pole taxonomy.

    A real root k* is self-dual when -k* is also a root (checked directly on
    g, so it need not be in ``roots``).  Complex roots pair as k2 = -conj(k1),
    i.e. complex-conjugate energies.
    """
    roots = sorted((complex(k) for k in roots), key=_order)
    residuals = [float(abs(inverse_transmission(params, k))) for k in roots]
    records = []
    for k, res in zip(roots, residuals):
        real_axis = abs(k.imag) < REAL_TOL
        imag_axis = abs(k.real) < REAL_TOL
        if real_axis and imag_axis:
            cls = PoleClass.AMBIGUOUS
        elif real_axis:
            cls = PoleClass.SELF_DUAL_SS if _is_root(params, complex(-k.real, 0.0)) else PoleClass.SS
        elif k.imag < 0:
            cls = PoleClass.UNPHYSICAL
        elif imag_axis:
            cls = PoleClass.BOUND_STATE
        else:
            cls = PoleClass.UNPAIRED
        records.append(PoleRecord(k=k, cls=cls, residual=res))
    for i, rec in enumerate(records):
        if rec.cls is not PoleClass.UNPAIRED and rec.cls is not PoleClass.SELF_DUAL_SS:
            continue
        mirror = -rec.k.conjugate()
        for j, other in enumerate(records):
            if j != i and abs(other.k - mirror) < PAIR_TOL:
                rec.partner = j
                if rec.cls is PoleClass.UNPAIRED:
                    rec.cls = PoleClass.CCPE
                break
    return records


def energy_spectrum(records):
    """Physical energies E = k^2 ordered by real part, with the SS bound check.

    A self-dual pair contributes one energy.  Unphysical and ambiguous
    records are left out.
    """
    energies = []
    for rec in records:
        if rec.cls in (PoleClass.UNPHYSICAL, PoleClass.AMBIGUOUS):
            continue
        E = rec.k * rec.k
        if rec.cls in (PoleClass.SS, PoleClass.SELF_DUAL_SS, PoleClass.BOUND_STATE):
            E = complex(E.real, 0.0)
        if any(abs(E - other) < DEDUP_TOL * max(1.0, abs(E)) for other in energies):
            continue
        energies.append(E)
    energies.sort(key=lambda z: (z.real, z.imag))
    ss = [r.k.real**2 for r in records if r.cls in (PoleClass.SS, PoleClass.SELF_DUAL_SS)]
    ccpe = [(r.k * r.k).real for r in records if r.cls is PoleClass.CCPE]
    return EnergySpectrum(
        energies=energies,
        ss_energy=max(ss) if ss and ccpe else None,
        last_ccpe_real=max(ccpe) if ss and ccpe else None,
    )
