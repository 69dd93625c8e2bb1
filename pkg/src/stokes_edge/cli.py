"""Command-line interface: ``stokes-edge {green,pencil,cone,verify} ...``.

Exit codes: 0 success, 1 failed verification, 2 usage or domain error,
3 schema violation. Messages go to stderr; results to stdout or files.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import jsonschema
import numpy as np

from . import __version__
from .core import DEFAULT_CONFIG, TWO_PI, BcType
from .errors import SchemaViolation, StokesEdgeError
from .exponents import ConeDescriptor, cone_report, format_report
from .green import FREE_SPACE, green, halfspace_green_derivative, parse_bc
from .pencil import (
    Eigenvalue,
    Region,
    Spectrum,
    WedgeConfig,
    classify,
    closed_form_spectrum,
    one_in_spectrum_dedicated,
    scan_spectrum,
    sweep,
)
from .verification import run_battery

FORMAT_VERSION = 1
CSV_COLUMNS = ("re", "im", "source", "theta", "d_minus", "d_plus")

CONE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["edges", "lambda_minus", "lambda_plus"],
    "properties": {
        "format_version": {"const": FORMAT_VERSION},
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["name", "theta", "d_plus", "d_minus"],
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "theta": {"type": "number", "exclusiveMinimum": 0, "maximum": TWO_PI},
                    "d_plus": {"type": "integer", "minimum": 0, "maximum": 3},
                    "d_minus": {"type": "integer", "minimum": 0, "maximum": 3},
                },
            },
        },
        "lambda_minus": {"type": "number"},
        "lambda_plus": {"type": "number"},
        "lambda_provenance": {"type": "string"},
        "epsilon": {"type": "number", "exclusiveMinimum": 0, "maximum": 0.1},
    },
}

_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_NUM_OR_NULL = {"type": ["number", "null"]}
_TEMPLATE = {
    "type": "object",
    "additionalProperties": False,
    "required": ["regime", "prefactor_exponent", "x_factors", "xi_factors"],
    "properties": {
        "regime": {"type": "string"},
        "prefactor_exponent": {"type": "number"},
        "x_factors": {"type": "array"},
        "xi_factors": {"type": "array"},
        "x_norm_exponent": {"type": "number"},
        "xi_norm_exponent": {"type": "number"},
    },
}
CONE_REPORT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["format_version", "epsilon", "lambda_minus", "lambda_plus", "edges", "near_field", "far_field"],
    "properties": {
        "format_version": {"const": FORMAT_VERSION},
        "package_version": {"type": "string"},
        "epsilon": {"type": "number"},
        "lambda_minus": {"type": "number"},
        "lambda_plus": {"type": "number"},
        "lambda_provenance": {"type": "string"},
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "theta", "d_minus", "d_plus", "status"],
                "properties": {
                    "status": {"enum": ["ok", "failed"]},
                    "lambda1": {"anyOf": [_PAIR, {"type": "null"}]},
                    "lambda2": {"anyOf": [_PAIR, {"type": "null"}]},
                    "mu": _NUM_OR_NULL,
                    "sigma": {"type": "object", "additionalProperties": {"type": "number"}},
                },
            },
        },
        "near_field": {"type": "object", "additionalProperties": {
            "type": "object", "required": ["scaling_exponent"]}},
        "far_field": {"type": "object", "additionalProperties": {
            "type": "object", "required": ["x_dominant", "xi_dominant"],
            "properties": {"x_dominant": _TEMPLATE, "xi_dominant": _TEMPLATE}}},
    },
}


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# value parsing


def _angle(text: str) -> float:
    t = text.strip().lower()
    if t.endswith(("deg", "°", "d")):
        raise argparse.ArgumentTypeError("angles are in radians; degree values are not accepted")
    try:
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _triple(text: str, kind=float):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated values, got {text!r}")
    try:
        return tuple(kind(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad component in {text!r}") from None


def _multi(text: str):
    return _triple(text, int)


def _bc_code(text: str) -> int:
    try:
        return int(BcType.parse(text))
    except StokesEdgeError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def fmt(v: float) -> str:
    """Shortest repr that round-trips (at most 17 significant digits)."""
    return repr(float(v))


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _write(text: str, path: Optional[str]):
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# spectrum CSV


def merged_spectrum(config: WedgeConfig, region: Region) -> Spectrum:
    """Catalogue values, determinant zeros not in the catalogue, and lambda = 1 when present.

    Values confirmed by the determinant keep their catalogue tag. Complex
    values appear with their conjugates.
    """
    cf = closed_form_spectrum(config, region, DEFAULT_CONFIG, disks=False).eigenvalues
    sc = scan_spectrum(config, region, DEFAULT_CONFIG).eigenvalues
    tol = 1e-9
    out = list(cf)
    for e in sc:
        if not any(abs(e.value - c.value) <= tol for c in cf):
            out.append(e)
    if one_in_spectrum_dedicated(config) and not any(abs(e.value - 1) <= tol for e in out):
        out.append(Eigenvalue(1 + 0j, "dedicated"))
    # the determinants have real coefficients; the scans cover Im >= 0 only
    out += [Eigenvalue(e.value.conjugate(), e.source) for e in out if e.value.imag > tol]
    out.sort(key=lambda e: (e.value.real, e.value.imag))
    return Spectrum(config, region, out)


def spectrum_to_csv(spec: Spectrum) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    c = spec.config
    for e in sorted(spec.eigenvalues, key=lambda e: (e.value.real, e.value.imag)):
        w.writerow([fmt(e.value.real), fmt(e.value.imag), e.source, fmt(c.theta), int(c.d_minus), int(c.d_plus)])
    return buf.getvalue()


def spectrum_from_csv(text: str, region: Optional[Region] = None) -> Spectrum:
    """Inverse of :func:`spectrum_to_csv`; all rows must share one wedge configuration."""
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise SchemaViolation("spectrum CSV has no data rows")
    keys = {(r["theta"], r["d_minus"], r["d_plus"]) for r in rows}
    if len(keys) != 1:
        raise SchemaViolation("spectrum CSV mixes wedge configurations")
    th, dm, dp = keys.pop()
    cfg = WedgeConfig(float(th), int(dm), int(dp))
    eigs = [Eigenvalue(complex(float(r["re"]), float(r["im"])), r["source"]) for r in rows]
    return Spectrum(cfg, region or Region.default(), eigs)


# --------------------------------------------------------------------------
# subcommands


def cmd_green_eval(args) -> int:
    bc = parse_bc(args.bc)
    if (args.row is None) != (args.col is None):
        raise UsageError("--row and --col must be given together")
    deriv = args.dx is not None or args.dxi is not None
    label = bc if bc == FREE_SPACE else bc.cli_name
    pairs = [(args.row, args.col)] if args.row is not None else [(i, j) for i in range(1, 5) for j in range(1, 5)]
    for i, j in pairs:
        if not (1 <= i <= 4 and 1 <= j <= 4):
            raise UsageError("--row and --col take values 1..4")
    if deriv:
        vals = {(i, j): halfspace_green_derivative(bc, i, j, args.dx, args.dxi, args.x, args.xi) for i, j in pairs}
        delta = {}
    else:
        G = green(bc, args.x, args.xi)
        vals = {(i, j): G[i, j].value for i, j in pairs}
        delta = {(i, j): G[i, j].delta_coefficient for i, j in pairs if G[i, j].has_delta}
    if args.json:
        doc = {
            "format_version": FORMAT_VERSION,
            "bc": label,
            "x": list(args.x),
            "xi": list(args.xi),
            "dx": list(args.dx or (0, 0, 0)),
            "dxi": list(args.dxi or (0, 0, 0)),
            "entries": [{"row": i, "col": j, "value": v} for (i, j), v in vals.items()],
            "delta": [{"row": i, "col": j, "coefficient": c} for (i, j), c in delta.items()],
        }
        _write(_dump_json(doc), None)
        return 0
    lines = []
    if args.row is not None:
        i, j = pairs[0]
        line = fmt(vals[(i, j)])
        if (i, j) in delta:
            line += f"  delta: {delta[(i, j)]:g}"
        lines.append(line)
    else:
        for i in range(1, 5):
            lines.append("  ".join(f"{vals[(i, j)]: .17g}" for j in range(1, 5)))
        for (i, j), c in delta.items():
            lines.append(f"G[{i},{j}] delta: {c:g}")
    if deriv:
        lines.append("(regular part)")
    _write("\n".join(lines) + "\n", None)
    return 0


def cmd_pencil_spectrum(args) -> int:
    cfg = WedgeConfig(args.theta, args.dm, args.dp)
    spec = merged_spectrum(cfg, Region(args.re_max, args.im_max))
    text = spectrum_to_csv(spec)
    if args.csv:
        Path(args.csv).write_text(text, encoding="utf-8")
    lines = [f"{'re':>22} {'im':>22}  source"]
    for e in spec.eigenvalues:
        lines.append(f"{e.value.real:>22.17g} {e.value.imag:>22.17g}  {e.source}")
    _write("\n".join(lines) + "\n", None)
    return 0


def _cx(z):
    return "none" if z is None else (fmt(z.real) if z.imag == 0 else f"{z.real:.17g}{z.imag:+.17g}j")


def cmd_pencil_classify(args) -> int:
    from .exponents import EdgeExponentBundle, sigma_table

    c = classify(WedgeConfig(args.theta, args.dm, args.dp))
    lines = [
        f"lambda1 = {_cx(c.lambda1)}",
        f"lambda2 = {_cx(c.lambda2)}",
        f"mu = {fmt(c.mu)}",
        f"zero_is_eigenvalue = {str(c.zero_is_eigenvalue).lower()}",
        f"zero_in_condition_list = {str(c.zero_in_condition_list).lower()}",
        f"one_in_spectrum = {str(c.one_in_spectrum).lower()}",
    ]
    if args.eps is not None:
        for k, v in sigma_table(EdgeExponentBundle.from_classification(c, args.eps)).items():
            lines.append(f"sigma[{k}] = {fmt(v)}")
    _write("\n".join(lines) + "\n", None)
    return 0


def cmd_pencil_sweep(args) -> int:
    if args.theta_grid < 2:
        raise UsageError("--theta-grid needs at least 2 points")
    grid = np.linspace(0.1, TWO_PI, args.theta_grid)
    pts = sweep(args.dm, args.dp, grid)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("theta", "lambda1_re", "lambda1_im", "mu", "lower_bound", "d_minus", "d_plus"))
    for p in pts:
        l1 = p.lambda1
        w.writerow([fmt(p.theta), "" if l1 is None else fmt(l1.real), "" if l1 is None else fmt(l1.imag),
                    "" if p.mu is None else fmt(p.mu), fmt(p.lower_bound), args.dm, args.dp])
    if args.csv:
        Path(args.csv).write_text(buf.getvalue(), encoding="utf-8")
    lines = [f"{'theta':>20} {'Re lambda1':>20} {'mu':>20}"]
    for p in pts:
        l1 = "-" if p.lambda1 is None else f"{p.lambda1.real:.12g}"
        mu = "-" if p.mu is None else f"{p.mu:.12g}"
        lines.append(f"{p.theta:>20.12g} {l1:>20} {mu:>20}")
    _write("\n".join(lines) + "\n", None)
    return 0


def load_cone_config(path: str) -> ConeDescriptor:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"{path}: not valid JSON ({exc})") from None
    try:
        jsonschema.validate(doc, CONE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaViolation(f"{path}: {exc.message}") from None
    return ConeDescriptor.from_dict(doc)


def build_cone_report(cone: ConeDescriptor) -> dict:
    doc = {"format_version": FORMAT_VERSION, "package_version": __version__}
    doc.update(cone_report(cone))
    jsonschema.validate(doc, CONE_REPORT_SCHEMA)
    return doc


def cmd_cone_report(args) -> int:
    doc = build_cone_report(load_cone_config(args.config))
    if args.out:
        Path(args.out).write_text(_dump_json(doc), encoding="utf-8")
    _write(format_report(doc) + "\n", None)
    return 0


def cmd_verify(args) -> int:
    rep = run_battery(args.battery, args.seed)
    text = _dump_json(rep)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    for c in rep["checks"]:
        if c["gating"] and not c["passed"]:
            print(f"FAILED {c['name']}: value {c['value']} tolerance {c['tolerance']}", file=sys.stderr)
    return 0 if rep["passed"] else 1


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stokes-edge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="group", required=True)

    g = sub.add_parser("green", help="Green-matrix evaluation").add_subparsers(dest="cmd", required=True)
    ge = g.add_parser("eval", help="entries of the Green matrix or their derivatives")
    ge.add_argument("--bc", required=True,
                    choices=["dirichlet", "mixed-normal", "free-surface", "neumann", "free-space"])
    ge.add_argument("--x", required=True, type=_triple)
    ge.add_argument("--xi", required=True, type=_triple)
    ge.add_argument("--row", type=int)
    ge.add_argument("--col", type=int)
    ge.add_argument("--dx", type=_multi, help="derivative multi-index in x, e.g. 0,0,1")
    ge.add_argument("--dxi", type=_multi, help="derivative multi-index in xi")
    ge.add_argument("--json", action="store_true")
    ge.set_defaults(func=cmd_green_eval)

    pc = sub.add_parser("pencil", help="edge pencil spectra").add_subparsers(dest="cmd", required=True)

    def wedge_args(q, theta=True):
        if theta:
            q.add_argument("--theta", required=True, type=_angle, help="opening angle in radians")
        q.add_argument("--dm", required=True, type=_bc_code, help="boundary code of the side phi = -theta/2")
        q.add_argument("--dp", required=True, type=_bc_code, help="boundary code of the side phi = +theta/2")

    ps = pc.add_parser("spectrum", help="eigenvalues in 0 < Re <= re-max, |Im| <= im-max")
    wedge_args(ps)
    ps.add_argument("--re-max", type=float, default=DEFAULT_CONFIG.scan_rect[0])
    ps.add_argument("--im-max", type=float, default=DEFAULT_CONFIG.scan_rect[1])
    ps.add_argument("--csv")
    ps.set_defaults(func=cmd_pencil_spectrum)

    pl = pc.add_parser("classify", help="lambda_1, lambda_2, mu and membership of 0 and 1")
    wedge_args(pl)
    pl.add_argument("--eps", type=float, help="also print the sigma exponents for this epsilon")
    pl.set_defaults(func=cmd_pencil_classify)

    pw = pc.add_parser("sweep", help="lambda_1 and mu over theta in [0.1, 2 pi]")
    wedge_args(pw, theta=False)
    pw.add_argument("--theta-grid", required=True, type=int)
    pw.add_argument("--csv")
    pw.set_defaults(func=cmd_pencil_sweep)

    c = sub.add_parser("cone", help="polyhedral-cone exponent report").add_subparsers(dest="cmd", required=True)
    cr = c.add_parser("report")
    cr.add_argument("--config", required=True)
    cr.add_argument("--out")
    cr.set_defaults(func=cmd_cone_report)

    v = sub.add_parser("verify", help="run the verification battery")
    v.add_argument("battery", choices=["all", "green", "pencil", "representation"])
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SchemaViolation as exc:
        print(f"schema violation: {exc}", file=sys.stderr)
        return 3
    except (UsageError, StokesEdgeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
