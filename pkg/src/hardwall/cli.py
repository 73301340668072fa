"""Command-line front end: ``hardwall <command> [options]``.

Commands
--------
constants   the six universal constants and the two identity residuals
geometry    droplet radii, surface mass and regime of a potential
exact       ``log u_j`` for every ``j`` and their sum
terms       asymptotic versus exact ``log u_j`` over a range of ``j``
predict     large-N expansion coefficients
verify      remainder of the expansion over a ladder of ``N``

Output is JSON (default) or CSV on stdout.  No environment variables are read.
Exit status: 0 on success, 2 on a usage or descriptor error, 1 on a
numerical failure; failures print a JSON report with an error code.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict
from fractions import Fraction

from . import __version__
from .constants import beta_tilde, compute_universal_constants, identity_residuals
from .errors import DescriptorError, HardwallError
from .exact import log_partition_hard, log_uj_oracle, log_uj_quadrature
from .expansion import expansion_coefficients, predict_log_partition, remainder_sweep
from .numerics import DEFAULT_CONFIG, QuadratureConfig
from .potential import parse_descriptor
from .term_asym import log_uj_asymptotic

_METHOD = {"quad": "quadrature", "gamma": "gamma_oracle"}


class UsageError(Exception):
    code = "usage"


def _clean(obj):
    """Round floats to 15 significant digits; non-finite floats become strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return float(f"{obj:.15g}")
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return _clean(float(obj))


def _fmt_cell(v):
    v = _clean(v)
    return "" if v is None else (repr(v) if isinstance(v, float) else str(v))


def _to_json(report):
    return json.dumps(_clean(report), sort_keys=True, indent=2)


def _to_csv(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt_cell(row[c]) for c in columns])
    return buf.getvalue()


def _workers(value):
    if value == "auto":
        return os.cpu_count() or 1
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--threads expects an integer or 'auto', got {value!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("--threads must be at least 1")
    return n


def _positive_float(value):
    try:
        x = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed number {value!r}")
    if not x > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return x


def _n_list(value):
    try:
        out = [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {value!r}")
    if not out or min(out) < 2:
        raise argparse.ArgumentTypeError("each n must be at least 2")
    return out


def _j_range(value):
    lo, sep, hi = value.partition(":")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--j-range expects a:b, got {value!r}")
    if not sep or a < 0 or b <= a:
        raise argparse.ArgumentTypeError(f"--j-range expects 0 <= a < b, got {value!r}")
    return a, b


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    shared = _Parser(add_help=False)
    shared.add_argument("--tol", type=_positive_float, default=None,
                        help="relative quadrature tolerance (default 1e-12)")
    shared.add_argument("--emit", choices=("json", "csv"), default="json")
    shared.add_argument("--threads", type=_workers, default=1,
                        help="worker processes for per-term work, or 'auto'")

    pot = _Parser(add_help=False)
    pot.add_argument("--potential", required=True,
                     help='descriptor, e.g. "annulus-log a=0.5"')

    p = _Parser(prog="hardwall", description="Hard-wall Coulomb gas partition functions.")
    p.add_argument("--version", action="version", version=f"hardwall {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("constants", parents=[shared], help="universal constants")
    sub.add_parser("geometry", parents=[shared, pot], help="droplet geometry")
    ex = sub.add_parser("exact", parents=[shared, pot], help="exact log u_j and their sum")
    ex.add_argument("--n", type=int, required=True)
    ex.add_argument("--method", choices=tuple(_METHOD), default="quad")
    te = sub.add_parser("terms", parents=[shared, pot], help="asymptotic vs exact terms")
    te.add_argument("--n", type=int, required=True)
    te.add_argument("--j-range", type=_j_range, default=None)
    te.add_argument("--compare", choices=("oracle", "quad"), default="quad")
    pr = sub.add_parser("predict", parents=[shared, pot], help="expansion coefficients")
    pr.add_argument("--n", type=int, default=None, help="also evaluate the expansion at n")
    ve = sub.add_parser("verify", parents=[shared, pot], help="remainder sweep")
    ve.add_argument("--n", type=_n_list, required=True, help="comma-separated ladder")
    ve.add_argument("--method", choices=tuple(_METHOD), default="quad")
    return p


def _cfg(args):
    if args.tol is None:
        return DEFAULT_CONFIG
    return QuadratureConfig(rel_tol=args.tol, abs_tol=DEFAULT_CONFIG.abs_tol,
                            max_subdivisions=DEFAULT_CONFIG.max_subdivisions)


def _cmd_constants(args, cfg):
    c = compute_universal_constants(cfg)
    r_in, r_out = identity_residuals(c)
    values = c.as_dict()
    out = {"constants": values, "errors": dict(c.errors),
           "identity_residuals": {"in": r_in, "out": r_out},
           "beta_tilde": {"in": beta_tilde("in", cfg), "out": beta_tilde("out", cfg)}}
    rows = [{"name": k, "value": v, "error": c.errors[k]} for k, v in values.items()]
    rows += [{"name": "identity_residual_in", "value": r_in, "error": None},
             {"name": "identity_residual_out", "value": r_out, "error": None}]
    return out, (["name", "value", "error"], rows)


def _cmd_geometry(args, cfg):
    g = parse_descriptor(args.potential).geometry
    d = g.as_dict()
    return d, (list(d), [d])


def _check_n(n):
    if n < 1:
        raise UsageError("--n must be at least 1")


def _cmd_exact(args, cfg):
    _check_n(args.n)
    pot = parse_descriptor(args.potential)
    res = log_partition_hard(pot, args.n, _METHOD[args.method], cfg, args.threads)
    out = {"log_z_over_2pi_pow_n": res.log_z_over_2pi_pow_n, "n": res.n,
           "method": res.method, "per_term_logs": list(res.per_term_logs)}
    rows = [{"j": j, "log_uj": v} for j, v in enumerate(res.per_term_logs)]
    return out, (["j", "log_uj"], rows)


def _cmd_terms(args, cfg):
    _check_n(args.n)
    pot = parse_descriptor(args.potential)
    a, b = args.j_range or (0, args.n)
    if b > args.n:
        raise UsageError(f"--j-range end {b} exceeds n={args.n}")
    rows = []
    for j in range(a, b):
        asym, regime = log_uj_asymptotic(pot, args.n, j)
        exact = (log_uj_oracle(pot, args.n, j) if args.compare == "oracle"
                 else log_uj_quadrature(pot, args.n, j, cfg))
        rows.append({"j": j, "regime": regime.tag.value, "x": regime.x,
                     "log_uj_asym": asym, "log_uj_exact": exact,
                     "rel_err": math.expm1(asym - exact)})
    cols = ["j", "regime", "log_uj_asym", "log_uj_exact", "rel_err"]
    return {"n": args.n, "compare": args.compare, "terms": rows}, (cols, rows)


def _cmd_predict(args, cfg):
    pot = parse_descriptor(args.potential)
    co = expansion_coefficients(pot, cfg)
    out = co.as_dict()
    if args.n is not None:
        if args.n < 2:
            raise UsageError("--n must be at least 2")
        out["n"] = args.n
        out["predicted"] = predict_log_partition(co, args.n)
    return out, (list(out), [out])


def _cmd_verify(args, cfg):
    pot = parse_descriptor(args.potential)
    rows = [asdict(r) for r in remainder_sweep(pot, args.n, cfg, _METHOD[args.method],
                                               args.threads)]
    cols = ["n", "exact", "predicted", "remainder", "ratio"]
    return {"rows": rows}, (cols, rows)


_COMMANDS = {
    "constants": _cmd_constants, "geometry": _cmd_geometry, "exact": _cmd_exact,
    "terms": _cmd_terms, "predict": _cmd_predict, "verify": _cmd_verify,
}


def _inputs(args):
    d = {k: v for k, v in vars(args).items() if k != "command"}
    if d.get("j_range") is not None:
        d["j_range"] = f"{d['j_range'][0]}:{d['j_range'][1]}"
    return d


def parse_and_run(argv, stdout=None, stderr=None) -> int:
    """Run one command; returns the process exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = None
    try:
        args = parser.parse_args(argv)
        cfg = _cfg(args)
        payload, (cols, rows) = _COMMANDS[args.command](args, cfg)
    except (UsageError, DescriptorError) as exc:
        code = getattr(exc, "code", "usage")
        print(f"hardwall: error: {exc}", file=stderr)
        print(_to_json({"error": {"code": code, "message": str(exc)}}), file=stdout)
        return 2
    except HardwallError as exc:
        report = {"command": args.command, "inputs": _inputs(args),
                  "error": {"code": exc.code, "message": str(exc)}}
        print(_to_json(report), file=stdout)
        return 1
    if args.emit == "csv":
        stdout.write(_to_csv(cols, rows))
    else:
        report = {"command": args.command, "inputs": _inputs(args), "outputs": payload,
                  "tolerances": asdict(cfg), "tool_version": __version__}
        print(_to_json(report), file=stdout)
    return 0


def main(argv=None):
    sys.exit(parse_and_run(sys.argv[1:] if argv is None else argv))
