"""Command-line interface: ``scarf2 <command> --p1 c=1 d=0.5 ...``.

Exit codes: 0 success, 2 usage error, 3 computation failure.
"""

import argparse
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import closed_forms as cf
from .analytic import reflection_zero_general, scattering_coefficients, transmission_amplitude, PoleOfT
from .oracle import OracleConfig, OracleError, numerical_scatter, verify_bound_state
from .output import SCHEMA_VERSION, cplx, dumps_csv, dumps_json, num, write_text
from .report import run_report
from .spectral import PoleClass, ScanRegion, find_poles, energy_spectrum, inverse_t_grid

EXIT_USAGE = 2
EXIT_COMPUTE = 3

# oracle is kept this far from an analytic pole
ORACLE_POLE_CLEARANCE = 1e-3


class UsageError(ValueError):
    pass


# ------------------------------------------------------------- parsing

_REAL_RE = re.compile(r"^([+-]?)(sqrt\((.+)\)|pi|[0-9.]+(?:[eE][+-]?\d+)?)$")


def parse_real(text):
    """Decimal literal, ``pi`` or ``sqrt(<literal>)``, optionally signed."""
    s = text.strip().replace(" ", "")
    m = _REAL_RE.match(s)
    if not m:
        raise UsageError(f"cannot parse real literal {text!r}")
    sign = -1.0 if m.group(1) == "-" else 1.0
    body = m.group(2)
    if body == "pi":
        return sign * math.pi
    if m.group(3) is not None:
        inner = parse_real(m.group(3))
        if inner < 0:
            raise UsageError(f"sqrt of a negative number in {text!r}")
        return sign * math.sqrt(inner)
    try:
        return sign * float(body)
    except ValueError:
        raise UsageError(f"cannot parse real literal {text!r}") from None


def parse_complex(text):
    """``a``, ``bi``, ``a+bi`` or ``a-bi`` with real literals a, b."""
    s = text.strip().replace(" ", "").replace("j", "i")
    if not s.endswith("i"):
        return complex(parse_real(s), 0.0)
    body = s[:-1]
    # split at the last sign that is not part of an exponent or leading
    split = None
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "eE(":
            split = pos
            break
    if split is None:
        re_part, im_part = "0", body
    else:
        re_part, im_part = body[:split], body[split:]
    if im_part in ("", "+"):
        im = 1.0
    elif im_part == "-":
        im = -1.0
    else:
        im = parse_real(im_part)
    return complex(parse_real(re_part), im)


def parse_range(text):
    """``min:max:step``, min inclusive, max included when on the grid."""
    parts = text.split(":")
    if len(parts) == 1:
        return np.array([parse_real(parts[0])])
    if len(parts) != 3:
        raise UsageError(f"range must be min:max:step, got {text!r}")
    lo, hi, step = (parse_real(p) for p in parts)
    if step <= 0 or hi < lo:
        raise UsageError(f"empty range {text!r}")
    n = int(math.floor((hi - lo) / step + 0.5)) + 1
    # rounding removes the 1.8999999999999999-style drift of lo + i*step
    return np.round(lo + step * np.arange(n), 12)


def parse_region(text, grid):
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"region must be kxmin:kxmax:kymin:kymax, got {text!r}")
    m = re.fullmatch(r"(\d+)x(\d+)", grid.strip())
    if not m:
        raise UsageError(f"grid must be NXxNY, got {grid!r}")
    try:
        return ScanRegion(*(parse_real(p) for p in parts), int(m.group(1)), int(m.group(2)))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _kv(tokens, allowed, flag):
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise UsageError(f"{flag}: expected key=value, got {tok!r}")
        key, value = tok.split("=", 1)
        if key not in allowed:
            raise UsageError(f"{flag}: unknown key {key!r} (expected {', '.join(allowed)})")
        out[key] = value
    missing = [k for k in allowed if k not in out]
    if missing:
        raise UsageError(f"{flag}: missing {', '.join(missing)}")
    return out


def parameterization_from_args(args):
    try:
        if args.p1:
            kv = _kv(args.p1, ("c", "d"), "--p1")
            return cf.Parameterization.p1(parse_real(kv["c"]), parse_real(kv["d"]))
        if args.p2:
            kv = _kv(args.p2, ("c",), "--p2")
            return cf.Parameterization.p2(parse_real(kv["c"]))
        if args.p3:
            kv = _kv(args.p3, ("c", "q"), "--p3")
            return cf.Parameterization.p3(parse_real(kv["c"]), parse_real(kv["q"]))
        if args.p4:
            kv = _kv(args.p4, ("c", "d"), "--p4")
            return cf.Parameterization.p4(parse_real(kv["c"]), parse_real(kv["d"]))
        kv = _kv(args.raw, ("A", "B"), "--raw")
        return cf.Parameterization.raw(parse_complex(kv["A"]), parse_complex(kv["B"]))
    except (cf.ConstraintViolation, ValueError) as exc:
        raise UsageError(str(exc)) from None


def oracle_config_from_args(args):
    kw = {}
    if args.L is not None:
        kw["L"] = args.L
    if args.steps is not None:
        kw["n_steps"] = args.steps
    if args.method is not None:
        kw["method"] = args.method
    try:
        return OracleConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _compare(args):
    items = {c for c in (args.compare or "").split(",") if c}
    bad = items - {"closed", "oracle"}
    if bad:
        raise UsageError(f"--compare accepts closed,oracle; got {','.join(sorted(bad))}")
    return items


# ------------------------------------------------------------ commands

def _param_header(p):
    params = cf.to_scarf_params(p)
    head = {"tag": p.tag}
    for name in ("c", "d", "q"):
        if getattr(p, name) is not None:
            head[name] = getattr(p, name)
    cplx(params.A, "A", head)
    cplx(params.B, "B", head)
    return head


def _has_closed(p):
    return p.tag in ("P1", "P2", "P4")


def _near_pole(params, k):
    try:
        t = transmission_amplitude(params, k)
    except PoleOfT:
        return True
    # |t| ~ 1/|k - k*| next to a simple pole
    return abs(t) > 1.0 / ORACLE_POLE_CLEARANCE


def _oracle_row(job):
    params, k, cfg = job
    return numerical_scatter(params, k, cfg)


def _run_oracle(params, ks, cfg, jobs):
    work = [(params, float(k), cfg) for k in ks]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_oracle_row, work))
    return [_oracle_row(w) for w in work]


def _rel(a, b):
    if a is None or b is None or not (math.isfinite(a) and math.isfinite(b)):
        return None
    return abs(a - b) / max(abs(b), 1e-300)


def cmd_coeffs(args):
    p = parameterization_from_args(args)
    params = cf.to_scarf_params(p)
    ks = parse_range(args.k)
    compare = _compare(args)
    if "closed" in compare and not _has_closed(p):
        raise UsageError(f"no closed forms for {p.tag}")
    if np.any(ks == 0):
        raise UsageError("k = 0 is not a scattering wavenumber")
    cfg = oracle_config_from_args(args)
    oracle_ks = [k for k in ks if "oracle" in compare and k >= 0.05 and not _near_pole(params, k)]
    oracle = dict(zip(oracle_ks, _run_oracle(params, oracle_ks, cfg, args.jobs)))
    rows = []
    for k in ks:
        res = scattering_coefficients(params, k)
        rev = scattering_coefficients(params, -k)
        row = {"k": float(k)}
        for name in ("T", "R_left", "R_right", "det_S_abs"):
            num(math.inf if res.infinite else getattr(res, name), name, row)
        num(math.inf if rev.infinite else rev.T, "T_rev", row)
        num(math.inf if rev.infinite else rev.det_S_abs, "det_S_abs_rev", row)
        row["pole"] = res.pole or ""
        if "closed" in compare:
            Tc = cf.closed_T(p, k)
            num(Tc, "T_closed", row)
            num(cf.closed_T(p, -k), "T_rev_closed", row)
            num(cf.closed_detS(p, k), "det_S_abs_closed", row)
            row["dT_closed"] = _rel(Tc, res.T)
        if "oracle" in compare:
            o = oracle.get(k)
            row["oracle_skipped"] = o is None
            for name in ("T", "R_left", "R_right", "det_S_abs"):
                val = getattr(o, name) if o else None
                row[f"{name}_oracle"] = val
                row[f"d{name}_oracle"] = _rel(val, getattr(res, name)) if o else None
            row["oracle_est_error"] = o.est_error if o else None
        rows.append(row)
    return {"command": "coeffs", "params": _param_header(p), "rows": rows}


def _record_row(i, rec):
    row = {"index": i}
    cplx(rec.k, "k", row)
    cplx(rec.E, "E", row)
    row["class"] = rec.cls.value
    row["residual"] = rec.residual
    row["partner"] = rec.partner
    return row


def cmd_poles(args):
    p = parameterization_from_args(args)
    params = cf.to_scarf_params(p)
    region = parse_region(args.region, args.grid)
    search = find_poles(params, region, include_unphysical=args.unphysical)
    spectrum = energy_spectrum(search.records)
    rows = [_record_row(i, r) for i, r in enumerate(search.records)]
    payload = {
        "command": "poles",
        "params": _param_header(p),
        "region": {"kx_min": region.kx_min, "kx_max": region.kx_max,
                   "ky_min": region.ky_min, "ky_max": region.ky_max,
                   "nx": region.nx, "ny": region.ny},
        "rows": rows,
        "energies": [cplx(E, "E", {}) for E in spectrum.energies],
        "ss_bound_holds": spectrum.ss_bound_holds,
        "warnings": [
            {"seed_re": f.seed.real, "seed_im": f.seed.imag, "last_re": f.last.real,
             "last_im": f.last.imag, "residual": f.residual, "reason": f.reason}
            for f in search.nonconverged
        ],
    }
    if p.tag == "P3" and p.q >= 0.5:
        expected = cf.p3_analytic_poles(p.c, p.q)["all"]
        found = [r.k for r in search.records]
        payload["analytic_poles"] = [cplx(k, "k", {}) for k in expected]
        payload["unmatched_found"] = [cplx(k, "k", {}) for k in found
                                      if min(abs(k - e) for e in expected) > 1e-8]
    if args.contours:
        kx, ky = region.axes()
        g = inverse_t_grid(params, region)
        payload["contours"] = {
            "kx": [float(v) for v in kx],
            "ky": [float(v) for v in ky],
            "re_g": [[float(v) for v in row] for row in g.real],
            "im_g": [[float(v) for v in row] for row in g.imag],
        }
    return payload


def cmd_boundstates(args):
    p = parameterization_from_args(args)
    params = cf.to_scarf_params(p)
    cfg = oracle_config_from_args(args)
    if p.tag == "P4":
        energies = cf.p4_bound_states(p.c, p.d)
        source = "closed"
    else:
        region = parse_region(args.region, args.grid)
        search = find_poles(params, region)
        energies = sorted((r.k * r.k).real for r in search.of_class(PoleClass.BOUND_STATE))
        source = "poles"
    rows = []
    for n, E in enumerate(sorted(energies)):
        rows.append({"n": n, "E": float(E), "kappa": math.sqrt(-E),
                     "residual": verify_bound_state(params, E, cfg), "source": source})
    return {"command": "boundstates", "params": _param_header(p), "rows": rows}


def cmd_zeros(args):
    p = parameterization_from_args(args)
    params = cf.to_scarf_params(p)
    compare = _compare(args)
    cfg = oracle_config_from_args(args)
    rows = []
    zero = reflection_zero_general(params)
    closed = cf.closed_kz(p) if _has_closed(p) else None
    if zero is not None:
        res = scattering_coefficients(params, zero.k)
        row = {"k_z": zero.k, "side": zero.side.value, "k_z_closed": closed,
               "R_left": res.R_left, "R_right": res.R_right, "T": res.T}
        if "oracle" in compare:
            o = numerical_scatter(params, zero.k, cfg)
            row.update({"R_left_oracle": o.R_left, "R_right_oracle": o.R_right, "T_oracle": o.T})
        rows.append(row)
    elif closed is not None:
        rows.append({"k_z": None, "side": "", "k_z_closed": closed})
    return {"command": "zeros", "params": _param_header(p), "rows": rows}


def cmd_detS(args):
    p = parameterization_from_args(args)
    params = cf.to_scarf_params(p)
    ks = parse_range(args.k)
    if np.any(ks == 0):
        raise UsageError("k = 0 is not a scattering wavenumber")
    compare = _compare(args)
    cfg = oracle_config_from_args(args)
    if "oracle" in compare:
        fwd_ks = [k for k in ks if k >= 0.05 and not _near_pole(params, k)]
        rev_ks = [k for k in ks if k >= 0.05 and not _near_pole(params, -k)]
        fwd = dict(zip(fwd_ks, _run_oracle(params, fwd_ks, cfg, args.jobs)))
        rev = dict(zip(rev_ks, _run_oracle(params.conjugate(), rev_ks, cfg, args.jobs)))
    rows = []
    for k in ks:
        row = {"k": float(k)}
        for label, kk in (("", k), ("_rev", -k)):
            res = scattering_coefficients(params, kk)
            num(math.inf if res.infinite else res.det_S_abs, f"det_S_abs{label}", row)
            if "closed" in compare and _has_closed(p):
                num(cf.closed_detS(p, kk), f"det_S_abs{label}_closed", row)
        if "oracle" in compare:
            o, orv = fwd.get(k), rev.get(k)
            row["det_S_abs_oracle"] = abs(o.t**2 - o.r_left * o.r_right) if o else None
            row["det_S_abs_rev_oracle"] = abs(orv.t**2 - orv.r_left * orv.r_right) if orv else None
        rows.append(row)
    return {"command": "detS", "params": _param_header(p), "rows": rows}


def cmd_oracle(args):
    p = parameterization_from_args(args)
    params = cf.to_scarf_params(p)
    ks = parse_range(args.k)
    cfg = oracle_config_from_args(args)
    rows = []
    for k, o in zip(ks, _run_oracle(params, ks, cfg, args.jobs)):
        row = {"k": float(k)}
        cplx(o.t, "t", row)
        cplx(o.r_left, "r_left", row)
        cplx(o.r_right, "r_right", row)
        cplx(o.t_right, "t_right", row)
        row.update({"T": o.T, "R_left": o.R_left, "R_right": o.R_right,
                    "det_S_abs": o.det_S_abs, "est_error": o.est_error})
        rows.append(row)
    return {"command": "oracle", "params": _param_header(p),
            "config": {"L": cfg.L, "n_steps": cfg.n_steps, "method": cfg.method}, "rows": rows}


def cmd_report(args):
    p = parameterization_from_args(args)
    cfg = oracle_config_from_args(args)
    items = run_report(p, cfg)
    rows = []
    for it in items:
        for r in it.rows:
            rows.append({"item": it.item, **r})
    for it in items:
        print(f"[{'ok' if it.ok else 'FAIL'}] {it.item}: {it.verdict}", file=sys.stderr)
    return {
        "command": "report",
        "params": _param_header(p),
        "items": [{"item": it.item, "ok": it.ok, "verdict": it.verdict, "rows": it.rows} for it in items],
        "rows": rows,
    }


COMMANDS = {
    "coeffs": cmd_coeffs,
    "poles": cmd_poles,
    "boundstates": cmd_boundstates,
    "zeros": cmd_zeros,
    "detS": cmd_detS,
    "oracle": cmd_oracle,
    "report": cmd_report,
}


# -------------------------------------------------------------- parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    fam = common.add_mutually_exclusive_group(required=True)
    fam.add_argument("--p1", nargs=2, metavar="KEY=VAL", help="A = -ic, B = d + i/2 (c=, d=)")
    fam.add_argument("--p2", nargs=1, metavar="KEY=VAL", help="A = 1 - ic, B = c - i/2 (c=)")
    fam.add_argument("--p3", nargs=2, metavar="KEY=VAL", help="A = q + 1/2 - ic, B = c - iq (c=, q=)")
    fam.add_argument("--p4", nargs=2, metavar="KEY=VAL", help="A = -ic, B = id (c=, d=)")
    fam.add_argument("--raw", nargs=2, metavar="KEY=VAL", help="complex A= B= (a+bi)")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--L", type=float, default=None, help="oracle half-domain length")
    common.add_argument("--steps", type=int, default=None, help="oracle RK4 steps")
    common.add_argument("--method", choices=("rk4", "rk45"), default=None)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for oracle rows")

    parser = argparse.ArgumentParser(prog="scarf2", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common], help="T, R_left, R_right, |det S| on a k grid")
    p.add_argument("--k", required=True, help="min:max:step")
    p.add_argument("--compare", default="", help="closed,oracle")

    p = sub.add_parser("poles", parents=[common], help="complex k poles of t(k)")
    p.add_argument("--region", default="-3:3:-0.5:3", help="kxmin:kxmax:kymin:kymax")
    p.add_argument("--grid", default="200x200", help="NXxNY")
    p.add_argument("--contours", action="store_true", help="include the Re/Im 1/t grid")
    p.add_argument("--unphysical", action="store_true", help="keep Im k < 0 roots")

    p = sub.add_parser("boundstates", parents=[common], help="negative-energy levels with residuals")
    p.add_argument("--region", default="-0.5:0.5:0.01:8", help="scan window (non-P4 only)")
    p.add_argument("--grid", default="40x400", help="NXxNY (non-P4 only)")

    p = sub.add_parser("zeros", parents=[common], help="one-sided reflectivity zeros")
    p.add_argument("--compare", default="", help="oracle")

    p = sub.add_parser("detS", parents=[common], help="|det S| at k and -k")
    p.add_argument("--k", required=True, help="min:max:step")
    p.add_argument("--compare", default="", help="closed,oracle")

    p = sub.add_parser("oracle", parents=[common], help="direct integration at given k")
    p.add_argument("--k", required=True, help="value or min:max:step")

    sub.add_parser("report", parents=[common], help="analytic vs oracle adjudication")
    return parser


def _render(payload, fmt):
    if fmt == "csv":
        return dumps_csv(payload.get("rows", []))
    body = {"schema": SCHEMA_VERSION}
    body.update({k: v for k, v in payload.items() if not (k == "rows" and payload["command"] == "report")})
    return dumps_json(body)


_VALUE_FLAGS = ("--k", "--region")


def _glue_negative_values(argv):
    """``--region -3:3:0:1`` -> ``--region=-3:3:0:1`` so argparse keeps the value."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        payload = COMMANDS[args.command](args)
        text = _render(payload, args.format)
    except UsageError as exc:
        print(f"scarf2 {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OracleError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"scarf2 {args.command}: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    for w in payload.get("warnings", []):
        print(f"warning: seed {w['seed_re']:+.6f}{w['seed_im']:+.6f}i did not converge", file=sys.stderr)
    write_text(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
