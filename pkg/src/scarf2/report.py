"""Analytic-versus-oracle adjudication of the open physics questions.

Each item collects analytic, closed-form and oracle numbers for one
question and ends in a one-line verdict.  The report is observational: it
never changes what the library computes.
"""

import math
from dataclasses import dataclass, field

from . import closed_forms as cf
from .analytic import scattering_coefficients, transmission_amplitude, PoleOfT
from .oracle import OracleConfig, numerical_scatter

__all__ = ["ReportItem", "run_report", "CONSISTENCY_TOL"]

CONSISTENCY_TOL = 1e-6
CONSISTENCY_K = (0.3, 0.7, 1.2, 2.1, 3.4)
APPROACH = (1e-1, 1e-2, 1e-3)
POLE_CLEARANCE = 0.05


@dataclass
class ReportItem:
    item: str
    rows: list = field(default_factory=list)
    verdict: str = ""
    ok: bool = True


def _rel(a, b):
    if a is None or b is None:
        return None
    return abs(a - b) / max(abs(b), 1e-300)


def _oracle_det(params, k, cfg, reversed_):
    res = numerical_scatter(params.conjugate() if reversed_ else params, k, cfg)
    return abs(res.t**2 - res.r_left * res.r_right)


def _closed_det(p, k):
    if p.tag not in ("P1", "P2", "P4"):
        return None
    return cf.closed_detS(p, k)


def _ss_list(p, params):
    if p.tag in ("P1", "P2", "P4"):
        return cf.ss_positions(p)
    if p.tag == "P3" and p.q >= 0.5:
        poles = cf.p3_analytic_poles(p.c, p.q)["all"]
        return [k.real for k in poles if k.imag == 0 and k.real > 0]
    return []


def detS_consistency(p, params, cfg):
    """|det S| at k and -k: Gamma formula vs closed form vs oracle."""
    item = ReportItem("detS_consistency")
    poles = _ss_list(p, params)
    worst = 0.0
    for k in CONSISTENCY_K:
        if any(abs(abs(k) - abs(s)) < POLE_CLEARANCE for s in poles):
            continue
        for sign, reversed_ in ((1, False), (-1, True)):
            kk = sign * k
            an = scattering_coefficients(params, kk)
            if an.infinite:
                continue
            orc = _oracle_det(params, k, cfg, reversed_)
            closed = _closed_det(p, kk)
            err = _rel(an.det_S_abs, orc)
            worst = max(worst, err)
            item.rows.append({
                "quantity": "|det S|", "k": kk, "analytic": an.det_S_abs,
                "closed": closed, "oracle": orc, "rel_diff": err,
                "closed_rel_diff": _rel(closed, an.det_S_abs),
            })
    item.ok = worst < CONSISTENCY_TOL
    item.verdict = (f"analytic |det S| matches oracle |t^2 - r_l r_r| to {worst:.1e} "
                    f"({'within' if item.ok else 'OUTSIDE'} {CONSISTENCY_TOL:g})")
    return item


def _trend(values):
    """'diverges', 'vanishes' or 'finite' along a sequence approaching a point."""
    first, last = values[0], values[-1]
    if last > 10 * first and all(b > a for a, b in zip(values, values[1:])):
        return "diverges"
    if last < 0.1 * first and all(b < a for a, b in zip(values, values[1:])):
        return "vanishes"
    return "finite"


def ss_detS_behaviour(p, params, cfg):
    """Behaviour of |det S| approaching each SS from +k and from -k."""
    items = []
    for ks in _ss_list(p, params):
        if ks <= 0:
            continue
        item = ReportItem(f"detS_at_ss_k={ks:.10g}")
        trends = {}
        for label, reversed_ in (("+k*", False), ("-k*", True)):
            seq = []
            for delta in APPROACH:
                k = ks + delta
                orc = _oracle_det(params, k, cfg, reversed_)
                kk = -k if reversed_ else k
                an = scattering_coefficients(params, kk)
                seq.append(orc)
                item.rows.append({
                    "quantity": f"|det S| near {label}", "k": kk,
                    "analytic": an.det_S_abs, "closed": _closed_det(p, kk), "oracle": orc,
                    "rel_diff": _rel(an.det_S_abs, orc),
                })
            trends[label] = _trend(seq)
        fwd, rev = trends["+k*"], trends["-k*"]
        cpa = rev == "vanishes"
        text = f"|det S| {fwd} as k -> {ks:.6g}, {rev} as k -> {-ks:.6g}"
        text += "; CPA at the time-reversed SS" if cpa else "; no CPA"
        if p.tag == "P4":
            if fwd == "diverges" and cpa:
                text += ("; |(k+c)/(k-c)| confirmed: |det S(c)| = inf, |det S(-c)| = 0, "
                         "so the reverse assignment |det S(c)| = 0, |det S(-c)| = inf is ruled out")
            else:
                text += "; oracle does not confirm |(k+c)/(k-c)|"
        if p.tag == "P1" and cpa:
            text += "; a non-self-dual SS in this family does come with CPA"
        item.verdict = text
        items.append(item)
    return items


def reflection_zero_side(p, params, cfg):
    """Which side's reflection vanishes at k_z, and whether T(k_z) = 1."""
    item = ReportItem("reflection_zero_side")
    from .analytic import reflection_zero_general

    zero = reflection_zero_general(params)
    closed = cf.closed_kz(p) if p.tag in ("P1", "P2", "P4") else None
    if zero is None:
        item.verdict = "no real reflectivity zero"
        if closed is not None:
            item.ok = False
            item.verdict += f" from the Gamma formula, but the closed form gives k_z = {closed:.12g}"
        return item
    kz = zero.k
    an = scattering_coefficients(params, kz)
    orc = numerical_scatter(params, kz, cfg)
    item.rows.append({"quantity": "k_z", "k": kz, "analytic": kz, "closed": closed, "oracle": None,
                      "rel_diff": None, "closed_rel_diff": _rel(closed, kz)})
    for name in ("R_left", "R_right", "T"):
        item.rows.append({"quantity": name, "k": kz, "analytic": getattr(an, name),
                          "closed": cf.closed_T(p, kz) if name == "T" and closed is not None else None,
                          "oracle": getattr(orc, name), "rel_diff": None})
    zero_an = "left" if an.R_left < an.R_right else "right"
    zero_or = "left" if orc.R_left < orc.R_right else "right"
    agree = zero_an == zero_or == zero.side.value
    item.ok = agree
    invis = abs(an.T - 1) < 1e-6
    item.verdict = (f"k_z = {kz:.12g}: {zero.side.value} reflection vanishes "
                    f"(analytic {zero_an}, oracle {zero_or}); T(k_z) = {an.T:.6g} "
                    + ("(equal to 1): unidirectional invisibility" if invis
                       else "(not 1): one-sided reflectionlessness without invisibility"))
    return item


def pt_reduction(p, params):
    """P1 with d = -c: |det S| -> 1 at the self-dual point."""
    item = ReportItem("pt_reduction")
    worst = 0.0
    for base in (p.c, -p.c):
        for delta in (1e-4, -1e-4):
            k = base + delta
            an = scattering_coefficients(params, k)
            worst = max(worst, abs(an.det_S_abs - 1))
            item.rows.append({"quantity": "|det S|", "k": k, "analytic": an.det_S_abs,
                              "closed": cf.closed_detS(p, k), "oracle": None, "rel_diff": None})
    item.ok = worst < 1e-8
    item.verdict = f"lim |det S| at k = +-c is 1 (max deviation {worst:.1e})"
    return item


def self_dual_asymmetry(p, params, cfg):
    """T(k) and T(-k) both diverge at |k| = c but differ elsewhere."""
    item = ReportItem("self_dual_asymmetry")
    c = p.c
    for k in (0.5 * c, c + 0.5):
        plus = scattering_coefficients(params, k).T
        minus = scattering_coefficients(params, -k).T
        orc_minus = numerical_scatter(params.conjugate(), k, cfg).T
        item.rows.append({"quantity": "T(k)", "k": k, "analytic": plus,
                          "closed": cf.closed_T(p, k), "oracle": numerical_scatter(params, k, cfg).T,
                          "rel_diff": None})
        item.rows.append({"quantity": "T(-k)", "k": -k, "analytic": minus,
                          "closed": cf.closed_T(p, -k), "oracle": orc_minus, "rel_diff": _rel(minus, orc_minus)})
    singular = []
    for k in (c, -c):
        try:
            transmission_amplitude(params, k)
        except PoleOfT:
            singular.append(k)
    item.ok = len(singular) == 2
    item.verdict = (f"T(k) and T(-k) both infinite at |k| = {c:.6g}: {item.ok}; "
                    "T(k) != T(-k) away from it (self-dual SS without PT symmetry)")
    return item


def run_report(p, cfg=None):
    """All applicable adjudication items for parameterization ``p``."""
    cfg = cfg or OracleConfig()
    params = cf.to_scarf_params(p)
    items = [detS_consistency(p, params, cfg)]
    items.extend(ss_detS_behaviour(p, params, cfg))
    items.append(reflection_zero_side(p, params, cfg))
    if p.tag == "P1" and math.isclose(p.d, -p.c):
        items.append(pt_reduction(p, params))
    if p.tag == "P2":
        items.append(self_dual_asymmetry(p, params, cfg))
    return items
