"""Command-line interface: ``plaplace {check,curve,solve,diagnose,invariants}``.

Exit codes: 0 success, 1 usage or configuration error, 2 domain failure.
Payloads go to stdout or the requested files; messages go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import __version__
from .config import ProblemConfig
from .diagnostics import DEFAULT_N_GRID, INVARIANT_N_GRID, diagnose, diagnose_curve, invariant_report
from .errors import ConfigError, DomainError, InadmissibleAmplitude, IntegrationError, QuadratureError
from .nonlinearity import check_hypotheses
from .shooting import shoot_and_scale
from .svg import curve_svg
from .timemap import is_admissible, reconstruct_profile, trace_curve

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN = 0, 1, 2
CURVE_COLUMNS = ["alpha", "lambda", "dlambda_dalpha", "uprime_at_1", "w_at_1", "admissible", "reason"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def fmt(v) -> str:
    """17 significant digits; non-finite values become ``nan``/``inf``."""
    return format(float(v), ".17g")


def to_json(obj) -> str:
    """JSON text with floats at 17 significant digits and NaN/inf as null."""

    def enc(o):
        if isinstance(o, bool) or o is None:
            return json.dumps(o)
        if isinstance(o, int):
            return str(o)
        if isinstance(o, float) or hasattr(o, "dtype"):
            o = float(o)
            return fmt(o) if math.isfinite(o) else "null"
        if isinstance(o, str):
            return json.dumps(o)
        if isinstance(o, dict):
            return "{" + ", ".join(f"{json.dumps(str(k))}: {enc(v)}" for k, v in o.items()) + "}"
        if isinstance(o, (list, tuple)):
            return "[" + ", ".join(enc(v) for v in o) + "]"
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return enc(obj) + "\n"


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from exc


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def _bool(b) -> str:
    return "true" if b else "false"


def cmd_check(cfg, args):
    rep = check_hypotheses(cfg.nonlinearity, cfg.exponent, cfg.resolved_u_max)
    _write(None, to_json(rep.to_dict()))
    if not rep.all_ok:
        failed = [k for k in ("h41", "h4a", "h42") if not getattr(rep, f"{k}_ok")]
        print(f"hypotheses failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def curve_csv(curve) -> str:
    rows = [CURVE_COLUMNS]
    for pt in curve.rows():
        rows.append(
            [fmt(pt.alpha), fmt(pt.lam), fmt(pt.dlambda_dalpha), fmt(pt.uprime_at_1), fmt(pt.w_at_1),
             _bool(pt.admissible), pt.reason]
        )
    text = _csv(rows)
    star = "none" if curve.alpha_star is None else fmt(curve.alpha_star)
    lam0 = "none" if curve.lambda0 is None else fmt(curve.lambda0)
    return text + f"# alpha_star,{star}\n# lambda0,{lam0}\n"


def cmd_curve(cfg, args):
    nl, e = cfg.nonlinearity, cfg.exponent
    tol = cfg.tolerances
    curve = trace_curve(nl, e, args.alpha_min, args.alpha_max, args.n, tol["quad_rel_tol"], jobs=args.jobs)
    if not args.skip_w and curve.points:
        verdicts = diagnose_curve(nl, e, curve, args.grid, tol["rk_tol"], jobs=args.jobs)
        singular = sum(1 for v in verdicts if v is False)
        if singular:
            print(f"{singular} point(s) flagged singular-suspect", file=sys.stderr)
    _write(args.out, curve_csv(curve))
    if args.svg:
        end = None if curve.alpha_star is None or curve.lambda0 is None else (curve.lambda0, curve.alpha_star)
        pts = curve.points
        _write(args.svg, curve_svg([p.lam for p in pts], [p.alpha for p in pts], endpoint=end))
    print(f"{len(curve.points)} admissible, {len(curve.rejected)} rejected", file=sys.stderr)
    if curve.note:
        print(curve.note, file=sys.stderr)
    return EXIT_OK


def cmd_solve(cfg, args):
    nl, e = cfg.nonlinearity, cfg.exponent
    tol = cfg.tolerances
    adm = is_admissible(nl, e, args.alpha)
    if not adm.ok or adm.boundary:
        raise InadmissibleAmplitude(args.alpha, adm.reason or "curve endpoint")
    if args.method == "timemap":
        prof = reconstruct_profile(nl, e, args.alpha, args.grid, tol["quad_rel_tol"])
        b = prof.lam ** (1.0 / e.p)
    else:
        res = shoot_and_scale(nl, e, args.alpha, tol["rk_tol"], args.grid)
        prof, b = res.profile, res.b
    if args.out:
        rows = [["x", "u", "uprime", "m"]]
        rows += [[fmt(a), fmt(c), fmt(d), fmt(g)] for a, c, d, g in zip(prof.x, prof.u, prof.uprime, prof.m)]
        _write(args.out, _csv(rows))
    summary = {"method": args.method, "alpha": float(args.alpha), "lambda": prof.lam, "x0": prof.x0, "b": b}
    _write(None, to_json(summary))
    return EXIT_OK


def cmd_diagnose(cfg, args):
    tol = cfg.tolerances
    d = diagnose(cfg.nonlinearity, cfg.exponent, args.alpha, args.grid, tol["rk_tol"], tol["quad_rel_tol"])
    _write(None, to_json(d.to_dict()))
    if args.require_nonsingular and not d.verdict_nonsingular:
        print(f"singular-suspect at alpha={args.alpha!r}: w(1)={d.point.w_at_1:.3e}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_invariants(cfg, args):
    tol = cfg.tolerances
    rep = invariant_report(cfg.nonlinearity, cfg.exponent, args.alpha, args.grid, tol["rk_tol"], tol["quad_rel_tol"])
    _write(None, to_json(rep.to_dict()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="plaplace", description="One-dimensional p-Laplace Dirichlet problem solver.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="check the hypotheses on f")
    c.add_argument("config")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("curve", help="trace the solution curve to CSV")
    c.add_argument("config")
    c.add_argument("--alpha-min", type=float, required=True)
    c.add_argument("--alpha-max", type=float, required=True)
    c.add_argument("--n", type=int, default=50)
    c.add_argument("--out", help="CSV path (default stdout)")
    c.add_argument("--svg", help="also write an 800x600 SVG chart")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--grid", type=int, default=DEFAULT_N_GRID, help="profile grid for w(1)")
    c.add_argument("--skip-w", action="store_true", help="leave w_at_1 as nan")
    c.set_defaults(func=cmd_curve)

    c = sub.add_parser("solve", help="solution profile at one amplitude")
    c.add_argument("config")
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--method", choices=("timemap", "shoot"), default="timemap")
    c.add_argument("--grid", type=int, default=DEFAULT_N_GRID)
    c.add_argument("--out", help="profile CSV path")
    c.set_defaults(func=cmd_solve)

    c = sub.add_parser("diagnose", help="non-singularity verdict at one amplitude")
    c.add_argument("config")
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--grid", type=int, default=DEFAULT_N_GRID)
    c.add_argument("--require-nonsingular", action="store_true", help="exit 2 on a singular-suspect verdict")
    c.set_defaults(func=cmd_diagnose)

    c = sub.add_parser("invariants", help="proof quantities at one amplitude")
    c.add_argument("config")
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--grid", type=int, default=INVARIANT_N_GRID)
    c.set_defaults(func=cmd_invariants)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "grid", 3) < 3 or getattr(args, "jobs", 1) < 1:
            raise UsageError("--grid must be >= 3 and --jobs >= 1")
        if args.command == "curve" and not (args.alpha_max > args.alpha_min > 0 and args.n >= 1):
            raise UsageError("need --alpha-max > --alpha-min > 0 and --n >= 1")
        cfg = ProblemConfig.load(args.config)
        return args.func(cfg, args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, IntegrationError, QuadratureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
