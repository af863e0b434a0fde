"""Gamma-free closed forms for the four non-PT parameter families.

    P1(c, d):  A = -ic,           B = d + i/2
    P2(c):     A = 1 - ic,        B = c - i/2
    P3(c, q):  A = q + 1/2 - ic,  B = c - iq
    P4(c, d):  A = -ic,           B = id

T, F and |det S| are given for P1, P2 and P4.  P3 has no closed T; it is
covered by its pole list and the raw Gamma formula.  Values that diverge
are returned as ``math.inf``; the closed forms refuse to evaluate within
POLE_GUARD of a known pole.
"""

import math
from dataclasses import dataclass


from .analytic import ScarfParams, Side

__all__ = [
    "POLE_GUARD",
    "ConstraintViolation",
    "UnsupportedTag",
    "Parameterization",
    "to_scarf_params",
    "closed_T",
    "closed_F",
    "closed_detS",
    "closed_kz",
    "ss_positions",
    "p3_analytic_poles",
    "p4_bound_states",
]

POLE_GUARD = 1e-8

_TAGS = ("P1", "P2", "P3", "P4", "Raw")


class ConstraintViolation(ValueError):
    pass


class UnsupportedTag(ValueError):
    pass


@dataclass(frozen=True)
class Parameterization:
    tag: str
    c: float | None = None
    d: float | None = None
    q: float | None = None
    A: complex | None = None
    B: complex | None = None

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise UnsupportedTag(f"unknown parameterization {self.tag!r}")
        need = {"P1": ("c", "d"), "P2": ("c",), "P3": ("c", "q"),
                "P4": ("c", "d"), "Raw": ("A", "B")}[self.tag]
        for name in need:
            if getattr(self, name) is None:
                raise ConstraintViolation(f"{self.tag} requires {name}")
        if self.tag == "P3":
            # q down to -1/2 is allowed so that P1 (q=-1/2) and P2 (q=1/2)
            # can be reached continuously
            if self.c <= 0 or self.q < -0.5:
                raise ConstraintViolation(f"P3 needs c > 0 and q >= -1/2, got c={self.c}, q={self.q}")
        if self.tag == "P4" and (self.c <= 0 or self.d <= 0):
            raise ConstraintViolation(f"P4 needs c, d > 0, got c={self.c}, d={self.d}")

    @classmethod
    def p1(cls, c, d):
        return cls("P1", c=float(c), d=float(d))

    @classmethod
    def p2(cls, c):
        return cls("P2", c=float(c))

    @classmethod
    def p3(cls, c, q):
        return cls("P3", c=float(c), q=float(q))

    @classmethod
    def p4(cls, c, d):
        return cls("P4", c=float(c), d=float(d))

    @classmethod
    def raw(cls, A, B):
        return cls("Raw", A=complex(A), B=complex(B))

    def describe(self):
        if self.tag == "Raw":
            return f"Raw(A={self.A}, B={self.B})"
        fields = [f"{n}={getattr(self, n)!r}" for n in ("c", "d", "q") if getattr(self, n) is not None]
        return f"{self.tag}({', '.join(fields)})"


def to_scarf_params(p):
    """Map a parameterization to its (A, B) pair."""
    if p.tag == "P1":
        return ScarfParams(-1j * p.c, p.d + 0.5j)
    if p.tag == "P2":
        return ScarfParams(1 - 1j * p.c, p.c - 0.5j)
    if p.tag == "P3":
        return ScarfParams(p.q + 0.5 - 1j * p.c, p.c - 1j * p.q)
    if p.tag == "P4":
        return ScarfParams(-1j * p.c, 1j * p.d)
    return ScarfParams(p.A, p.B)


def _require(p, *tags):
    if p.tag not in tags:
        raise UnsupportedTag(f"no closed form for {p.tag}; available for {', '.join(tags)}")


def ss_positions(p):
    """Real k at which the closed T diverges (spectral singularities)."""
    _require(p, "P1", "P2", "P4")
    if p.tag == "P1":
        return sorted({p.c, p.d})
    return [p.c]


def _near(k, poles):
    return any(abs(k - kp) < POLE_GUARD for kp in poles)


def _xsh(x):
    """x / sinh(pi x), continuous at 0."""
    return 1.0 / math.pi if x == 0.0 else x / math.sinh(math.pi * x)


def closed_T(p, k):
    """Closed-form T(k) for P1, P2, P4; ``math.inf`` at a spectral singularity."""
    _require(p, "P1", "P2", "P4")
    k = float(k)
    if k == 0.0:
        raise ValueError("closed_T needs k != 0")
    poles = ss_positions(p)
    if p.tag == "P2":
        poles = poles + [-p.c]  # self-dual: T(-k) diverges as well
    if _near(k, poles):
        return math.inf
    pk = math.pi * k
    shch2 = (math.sinh(pk) * math.cosh(pk)) ** 2
    c = p.c
    # cosh^2(pi k) - cosh^2(pi c) = sinh(pi(k+c)) sinh(pi(k-c)); the k+c
    # factor is paired with its sinh so that k = -c is a removable 0/0
    if p.tag == "P1":
        d = p.d
        val = (_xsh(k + c) * _xsh(k + d)
               / ((k - c) * math.sinh(math.pi * (k - c)) * (k - d) * math.sinh(math.pi * (k - d)))
               * shch2)
    elif p.tag == "P2":
        val = ((1 + (k + c) ** 2) / (1 + (k - c) ** 2)
               * shch2 / (math.sinh(math.pi * (k + c)) * math.sinh(math.pi * (k - c))) ** 2)
    else:
        sh2 = math.sinh(pk) ** 2
        cosd2 = math.cos(math.pi * p.d) ** 2
        val = (_xsh(k + c) / ((k - c) * math.sinh(math.pi * (k - c)))
               * shch2 / (sh2 + cosd2))
    return abs(val)


def closed_F(p, k, side=Side.LEFT):
    """Closed-form f_{l,r}(k) so that r_side = t * F_side.

    Signs follow the package convention Left = (A, B), where only the
    cos(pi A) sinh(pi B) term changes sign between sides.  For P4 that term
    is the i cosh(pi c) sin(pi d) one, so the usual printed form with the
    -+ on the sinh(pi c) cos(pi d) term has its labels swapped (and the
    right-hand one off by an overall sign); |F_left| = |F_right| either way.
    """
    _require(p, "P1", "P2", "P4")
    k = float(k)
    if k == 0.0:
        raise ValueError("closed_F needs k != 0")
    sign = 1.0 if Side(side) is Side.LEFT else -1.0
    pk, pc = math.pi * k, math.pi * p.c
    if p.tag == "P1":
        pd = math.pi * p.d
        return 1j * (sign * math.cosh(pc) * math.cosh(pd) / math.cosh(pk)
                     + math.sinh(pc) * math.sinh(pd) / math.sinh(pk))
    if p.tag == "P2":
        return 1j * (sign * math.cosh(pc) ** 2 / math.cosh(pk)
                     + math.sinh(pc) ** 2 / math.sinh(pk))
    pd = math.pi * p.d
    return (math.sinh(pc) * math.cos(pd) / math.sinh(pk)
            + sign * 1j * math.cosh(pc) * math.sin(pd) / math.cosh(pk))


def closed_detS(p, k):
    """|det S(k)| in closed form; negative k is the time-reversed reading."""
    _require(p, "P1", "P2", "P4")
    k = float(k)
    c = p.c
    if p.tag == "P2":
        return (1 + (k + c) ** 2) / (1 + (k - c) ** 2)
    if p.tag == "P1":
        d = p.d
        num, den = (k + c) * (k + d), (k - c) * (k - d)
        if c == -d and _near(abs(k), [abs(c)]):
            # PT point c = -d: the ratio is identically 1, only 0/0 at +-c
            return 1.0
        if _near(k, [c, d]):
            return math.inf
        return abs(num / den)
    if _near(k, [c]):
        return math.inf
    return abs((k + c) / (k - c))


def closed_kz(p):
    """Positive real reflectivity zero for P1 and P2, None for P4.

    The zero is on the right side (reflection for a wave incident from the
    right) when the tanh product is positive, on the left otherwise.
    """
    _require(p, "P1", "P2", "P4")
    if p.tag == "P4":
        return None
    if p.tag == "P1":
        arg = math.tanh(math.pi * p.c) * math.tanh(math.pi * p.d)
    else:
        arg = math.tanh(math.pi * p.c) ** 2
    if arg == 0.0 or abs(arg) >= 1.0:
        return None
    return math.atanh(abs(arg)) / math.pi


def p3_analytic_poles(c, q):
    """Physical poles of t for P3: CCPE pairs plus the unpaired one.

    Returns a dict with ``pairs`` (list of (k_left, k_right)), ``unpaired``
    and ``all`` (flat list, Im k >= 0).  For q = 1/2 the n = 0 pair lies on
    the real axis: the self-dual spectral singularity at +-c.
    """
    if c <= 0 or q < 0.5:
        raise ConstraintViolation(f"p3_analytic_poles needs c > 0 and q >= 1/2, got c={c}, q={q}")
    pairs = []
    n = 0
    while q - 0.5 - n >= -1e-12:
        y = max(q - 0.5 - n, 0.0)
        pairs.append((complex(-c, y), complex(c, y)))
        n += 1
    unpaired = complex(c, q + 0.5)
    flat = [k for pair in pairs for k in pair] + [unpaired]
    return {"pairs": pairs, "unpaired": unpaired, "all": flat}


def p4_bound_states(c, d):
    """Negative-energy levels E_n = -(d - 1/2 - n)^2 of the P4 potential."""
    if c <= 0:
        raise ConstraintViolation(f"P4 needs c > 0, got c={c}")
    levels = []
    n = 0
    while d - 0.5 - n > 0:
        levels.append(-((d - 0.5 - n) ** 2))
        n += 1
    return levels

