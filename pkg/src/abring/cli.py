"""Command-line front end: ``abring {spectrum,current,persistent,sweep,verify}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .currents import (
    chi,
    current_energy_derivative_check,
    partial_current,
    richardson_derivative_residual,
    superposition_current,
)
from .dirac import (
    SuperpositionState,
    build_spinor,
    cross_current,
    gram_matrix,
    operator_residuals,
    solve_energies,
    system_residual,
)
from .errors import RingError
from .persistent import (
    DEFAULT_MAX_ELECTRONS,
    OccupationSpec,
    c_sweep,
    log_mu_grid,
    persistent_current,
)
from .ring import HalfOddInteger, PhysicalRingSpec, RingConfig, half_odd_range, mu_from_physical, nu

SCHEMA_VERSION = 1
DEFAULT_BETA = 1e-8
VERIFY_TOL = 1e-10


def _half_odd(text):
    try:
        return HalfOddInteger.parse(text)
    except RingError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive_int(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abring",
        description="Relativistic spectrum and persistent currents of an ideal Aharonov-Bohm ring.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def ring_args(p, beta_required):
        p.add_argument("--mu", type=float, help="dimensionless mass-radius product M*R")
        p.add_argument("--radius-nm", type=float, help="ring radius in nm (with --mass-ratio)")
        p.add_argument("--mass-ratio", type=float, help="effective mass m*/m_e (with --radius-nm)")
        if beta_required:
            p.add_argument("--beta", type=float, required=True, help="flux parameter")
        else:
            p.add_argument("--beta", type=float, default=DEFAULT_BETA, help="flux parameter (default 1e-8)")

    def output_args(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", metavar="PATH", help="write here instead of stdout")

    def mode_args(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--lambda", dest="lambdas", type=_half_odd, action="append",
                       help="half-odd angular number, e.g. 3/2 or -0.5 (repeatable)")
        g.add_argument("--lambda-max", type=_half_odd, help="use all modes -L..L")

    p = sub.add_parser("spectrum", help="energies E*R of selected modes")
    ring_args(p, True)
    mode_args(p)
    p.add_argument("--negative", action="store_true", help="also list the negative-energy branch")
    output_args(p)

    p = sub.add_parser("current", help="partial currents of selected modes")
    ring_args(p, True)
    mode_args(p)
    output_args(p)

    p = sub.add_parser("persistent", help="T=0 persistent current")
    ring_args(p, False)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--electrons", type=_positive_int, help="even electron count N_e")
    g.add_argument("--lambda-max", type=_half_odd, help="highest occupied lambda_F")
    p.add_argument("--max-electrons", type=_positive_int, default=DEFAULT_MAX_ELECTRONS)
    output_args(p)

    p = sub.add_parser("sweep", help="c(mu) over a log-spaced mu grid")
    p.add_argument("--k-ratio", type=float, required=True, help="lambda_F / mu")
    p.add_argument("--mu-min", type=float, default=100.0)
    p.add_argument("--mu-max", type=float, default=1e4)
    p.add_argument("--points", type=_positive_int, default=50)
    p.add_argument("--beta", type=float, default=DEFAULT_BETA)
    p.add_argument("--no-snap", action="store_true",
                   help="keep the raw log grid instead of moving mu so that k*mu is half-odd")
    output_args(p)

    p = sub.add_parser("verify", help="check spinors, orthonormality and dI/dbeta identity")
    ring_args(p, False)
    p.add_argument("--lambda-max", type=_half_odd, required=True)
    p.add_argument("--nodes", type=_positive_int, default=2048)
    p.add_argument("--tol", type=float, default=VERIFY_TOL)
    output_args(p)
    return parser


def _resolve_mu(parser, args) -> tuple[float, dict]:
    physical = args.radius_nm is not None or args.mass_ratio is not None
    if physical == (args.mu is not None):
        parser.error("give exactly one of --mu or (--radius-nm and --mass-ratio)")
    if not physical:
        return args.mu, {"mu": args.mu}
    if args.radius_nm is None or args.mass_ratio is None:
        parser.error("--radius-nm and --mass-ratio must be given together")
    spec = PhysicalRingSpec(args.radius_nm, args.mass_ratio)
    mu = mu_from_physical(spec)
    return mu, {"radius_nm": args.radius_nm, "mass_ratio": args.mass_ratio, "mu": mu}


def _modes(args):
    if args.lambdas:
        return list(args.lambdas)
    if args.lambda_max.twice_value <= 0:
        raise RingError("--lambda-max must be positive")
    return half_odd_range(args.lambda_max)


def _cmd_spectrum(args, config):
    rows = []
    for lam in _modes(args):
        e = solve_energies(config, lam)
        rows.append({"mu": config.mu, "beta": config.beta, "lambda": str(lam), "nu": nu(config, lam), "energy_R": e})
        if args.negative:
            rows.append({"mu": config.mu, "beta": config.beta, "lambda": str(lam), "nu": nu(config, lam),
                         "energy_R": solve_energies(config, lam, negative=True)})
    return rows, {}


def _cmd_current(args, config):
    return [partial_current(config, lam).as_row(config) for lam in _modes(args)], {}


def _cmd_persistent(args, config):
    occ = (OccupationSpec(args.electrons) if args.electrons is not None
           else OccupationSpec.from_lambda_f(args.lambda_max))
    res = persistent_current(config, occ, max_electrons=args.max_electrons)
    return [res.as_row()], {"units": {"exact_sum": "1/(2 pi R)", "linearized_c": "I_max",
                                      "closed_form": "I_max", "i_max": "1/R (natural)"}}


def _cmd_sweep(args):
    if args.k_ratio <= 0:
        raise RingError("--k-ratio must be positive")
    grid = log_mu_grid(args.mu_min, args.mu_max, args.points, None if args.no_snap else args.k_ratio)
    res = c_sweep(grid, args.k_ratio, beta=args.beta)
    diag = {"errors": len(res.errors)}
    if len(res.column("linearized_c")):
        col = res.column("linearized_c")
        diag.update(spread=res.spread(), monotone_decreasing=res.is_monotone_decreasing(),
                    first=float(col[0]), last=float(col[-1]),
                    asymptote=args.k_ratio / math.sqrt(1 + args.k_ratio**2))
    return res.rows, diag


def _cmd_verify(args, config):
    tol = args.tol
    rows = []
    spinors = []
    worst = {"operator": 0.0, "system": 0.0, "derivative": 0.0, "cross": 0.0, "superposition": 0.0}
    for lam in half_odd_range(args.lambda_max):
        if config.mu == 0 and nu(config, lam) == 0:
            continue
        pure = partial_current(config, lam).chi
        mixed = superposition_current(SuperpositionState(0.6, 0.8j, lam, config), args.nodes).chi
        d = richardson_derivative_residual(config, lam)
        x = abs(cross_current(config, lam, args.nodes))
        for kappa in (1, -1):
            s = build_spinor(config, lam, kappa)
            spinors.append(s)
            r = operator_residuals(s)
            row = {"mu": config.mu, "beta": config.beta, "lambda": str(lam), "kappa": kappa}
            row.update({f"res_{k}": v for k, v in r.as_dict().items()})
            row.update(res_system=system_residual(s), res_derivative=d, cross_current=x,
                       superposition_diff=abs(mixed - pure))
            rows.append(row)
            worst["operator"] = max(worst["operator"], r.max())
            worst["system"] = max(worst["system"], row["res_system"])
        worst["derivative"] = max(worst["derivative"], d)
        worst["cross"] = max(worst["cross"], x)
        worst["superposition"] = max(worst["superposition"], abs(mixed - pure))
    G = gram_matrix(spinors, args.nodes)
    worst["orthonormality"] = float(np.abs(G - np.eye(len(spinors))).max())
    diag = {"max_residuals": worst, "tolerance": tol, "passed": all(v < tol for v in worst.values())}
    return rows, diag


def _fmt_csv(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.12g}"
    return str(v)


def _json_clean(v):
    if isinstance(v, dict):
        return {k: _json_clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_clean(x) for x in v]
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def render(fmt: str, command: str, echo: dict, rows: list, diagnostics: dict) -> str:
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command, "request_echo": echo,
               "rows": rows, "diagnostics": diagnostics}
        return json.dumps(_json_clean(doc), indent=2, allow_nan=False) + "\n"
    columns = []
    for r in rows:
        for k in r:
            if k not in columns:
                columns.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt_csv(r.get(c)) for c in columns])
    return buf.getvalue()


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    echo = {k: (str(v) if isinstance(v, HalfOddInteger) else
                [str(x) for x in v] if isinstance(v, list) else v)
            for k, v in vars(args).items() if k not in ("format", "out")}
    try:
        if args.command == "sweep":
            rows, diag = _cmd_sweep(args)
        else:
            mu, mu_echo = _resolve_mu(parser, args)
            echo.update(mu_echo)
            config = RingConfig(mu, args.beta)
            handler = {"spectrum": _cmd_spectrum, "current": _cmd_current,
                       "persistent": _cmd_persistent, "verify": _cmd_verify}[args.command]
            rows, diag = handler(args, config)
    except RingError as exc:
        err = {"type": type(exc).__name__, "message": str(exc)}
        if args.format == "json":
            _emit(render("json", args.command, echo, [], {"error": err}), args.out)
        else:
            print(f"error: {err['type']}: {err['message']}", file=sys.stderr)
        return 1
    _emit(render(args.format, args.command, echo, rows, diag), args.out)
    if any(r.get("error") for r in rows):
        return 1
    if args.command == "verify" and not diag["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
