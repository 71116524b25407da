"""Command-line interface: ``abel-frac <solve|table|converge|residual>``.

Right-hand sides are given in the expression language of
:mod:`abelfrac.expr`, e.g. ``--f "exp(x)-1"`` or ``--f "x^(7/6)"``. Numeric
flags accept fractions (``--alpha 4/5``); list flags are comma-separated
(``--x 0.1,0.2,0.3 --k 1,10,100``).

Exit codes: 0 on success, 2 for invalid input, 3 when a computation fails
(quadrature non-convergence, evaluation outside an expression's domain).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import __version__
from .abel import AbelProblem, ConvergenceError, convergence_study, residual, sample_solution, solve
from .expr import DomainError, ExprError, parse
from .quad import DEFAULT_TOL

PRESETS = {
    "example1": {"f": "exp(x)-1", "alpha": "1/2", "x": "0.1,0.2,0.3", "k": "1,10,100"},
    "example2": {"f": "x", "alpha": "4/5", "x": "0.4,0.5,0.6", "k": "1,10"},
    "example3": {"f": "x^(7/6)", "alpha": "1/3", "x": "0.6,0.7,0.8", "k": "10,100,1000"},
}

GRAMMAR_HELP = """\
expression grammar (f and g):
  expr  := term (('+'|'-') term)*
  term  := unary (('*'|'/') unary)*
  unary := '-' unary | power
  power := atom ('^' unary)?          right-associative
  atom  := number | x | func '(' expr ')' | '(' expr ')'
  func  := exp | ln | sin | cos | sqrt | erf | abs
"""


class UsageError(Exception):
    pass


def parse_real(text: str) -> float:
    """Decimal or fraction literal, rounded once to binary64."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a real number or fraction: {text!r}") from None


def parse_real_list(text: str) -> list[float]:
    return [parse_real(part) for part in text.split(",") if part.strip()]


def parse_int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            k = int(part)
        except ValueError:
            raise UsageError(f"not an integer: {part!r}") from None
        if k < 1:
            raise UsageError(f"k must be a positive integer, got {k}")
        out.append(k)
    return out


@dataclass
class RunConfig:
    command: str
    f: str
    alpha_text: str
    alpha: float
    points: list[float]
    k_list: list[int]
    tol: float
    output_format: str
    digits: int
    preset: Optional[str] = None
    g: Optional[str] = None
    samples: int = 51

    def echo(self) -> dict:
        d = {
            "f": self.f,
            "alpha": self.alpha_text,
            "alpha_value": self.alpha,
            "x": self.points,
            "k": self.k_list,
            "tol": self.tol,
            "format": self.output_format,
            "digits": self.digits,
        }
        if self.preset:
            d["preset"] = self.preset
        if self.command == "residual":
            d["g"] = self.g
            d["samples"] = self.samples
        return d


def build_config(args: argparse.Namespace) -> RunConfig:
    preset = {}
    if args.preset:
        preset = PRESETS[args.preset]
    f = args.f if args.f is not None else preset.get("f")
    alpha_text = args.alpha if args.alpha is not None else preset.get("alpha")
    x_text = args.x if args.x is not None else preset.get("x")
    k_text = args.k if args.k is not None else preset.get("k")
    missing = [name for name, v in (("--f", f), ("--alpha", alpha_text), ("--x", x_text)) if v is None]
    if missing:
        raise UsageError(f"missing {', '.join(missing)} (or use --preset)")
    if not 1 <= args.digits <= 17:
        raise UsageError(f"--digits must be in [1, 17], got {args.digits}")
    tol = parse_real(args.tol) if args.tol is not None else DEFAULT_TOL
    if not tol > 0.0:
        raise UsageError("--tol must be positive")
    points = parse_real_list(x_text)
    if not points:
        raise UsageError("no query points given")
    if any(not x > 0.0 for x in points):
        raise UsageError("query points must be positive")
    k_list = parse_int_list(k_text) if k_text is not None else []
    cfg = RunConfig(
        command=args.command,
        f=f,
        alpha_text=alpha_text,
        alpha=parse_real(alpha_text),
        points=points,
        k_list=k_list,
        tol=tol,
        output_format=args.format,
        digits=args.digits,
        preset=args.preset,
        g=getattr(args, "g", None),
        samples=getattr(args, "samples", 51),
    )
    if cfg.command == "solve" and len(k_list) != 1:
        raise UsageError("solve needs exactly one --k value")
    if cfg.command == "table" and not k_list:
        raise UsageError("table needs at least one --k value")
    if cfg.command == "converge" and (len(k_list) < 2 or k_list != sorted(set(k_list))):
        raise UsageError("converge needs a strictly increasing --k list of length >= 2")
    if cfg.command == "residual" and cfg.g is None and len(k_list) != 1:
        raise UsageError("residual needs --g or exactly one --k value")
    if cfg.command == "residual" and cfg.samples < 2:
        raise UsageError("--samples must be at least 2")
    return cfg


def make_problem(cfg: RunConfig) -> AbelProblem:
    try:
        expr = parse(cfg.f)
    except ExprError as exc:
        raise UsageError(f"--f: {exc}") from None
    try:
        return AbelProblem(expr, cfg.alpha, max(cfg.points))
    except (ValueError, ExprError) as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# rendering


def _num(v: Optional[float]) -> Optional[float]:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return None
    return v


def _fmt(v, digits: int, keep_zeros: bool = False) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, int):
        return str(v)
    if math.isnan(v):
        return "nan"
    return f"{v:#.{digits}g}" if keep_zeros else f"{v:.{digits}g}"


def render(cfg: RunConfig, columns: list[str], rows: list[dict], json_rows: list[dict], order=None,
           notes: tuple[str, ...] = ()) -> str:
    if cfg.output_format == "json":
        doc = {"command": cfg.command, "config": cfg.echo(), "rows": json_rows}
        if order is not None:
            doc["order"] = order
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"
    if cfg.output_format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row.get(c), 17) for c in columns])
        return buf.getvalue()
    # solution values keep trailing zeros so columns line up digit for digit
    value_cols = [c in ("gtilde", "exact") or c.startswith("k=") for c in columns]
    cells = [[_fmt(row.get(c), cfg.digits, keep) for c, keep in zip(columns, value_cols)] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(wd) for c, wd in zip(columns, widths))]
    lines.append("  ".join("-" * wd for wd in widths))
    lines += ["  ".join(v.rjust(wd) for v, wd in zip(r, widths)) for r in cells]
    lines += list(notes)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_solve(cfg: RunConfig) -> str:
    p = make_problem(cfg)
    k = cfg.k_list[0]
    res = solve(p, cfg.points, k, tol=cfg.tol)
    rows = [
        {"x": x, "k": k, "gtilde": v, "exact": e, "abs_error": err}
        for x, v, e, err in zip(res.points, res.values, res.exact, res.abs_errors)
    ]
    return render(cfg, ["x", "k", "gtilde", "exact", "abs_error"], rows, rows)


def cmd_table(cfg: RunConfig) -> str:
    p = make_problem(cfg)
    ks = cfg.k_list
    per_k = [solve(p, cfg.points, k, exact=(k == ks[-1]), tol=cfg.tol) for k in ks]
    exact = per_k[-1].exact
    kmax = ks[-1]
    columns = ["x"] + [f"k={k}" for k in ks] + ["exact", f"abs_error(k={kmax})"]
    rows, json_rows = [], []
    for i, x in enumerate(cfg.points):
        row = {"x": x, "exact": exact[i], f"abs_error(k={kmax})": per_k[-1].abs_errors[i]}
        for k, res in zip(ks, per_k):
            row[f"k={k}"] = res.values[i]
            json_rows.append(
                {"x": x, "k": k, "gtilde": res.values[i], "exact": exact[i],
                 "abs_error": abs(res.values[i] - exact[i])}
            )
        rows.append(row)
    return render(cfg, columns, rows, json_rows)


def cmd_converge(cfg: RunConfig) -> str:
    p = make_problem(cfg)
    rows, orders, notes = [], [], []
    for x in cfg.points:
        study = convergence_study(p, x, cfg.k_list, cfg.tol)
        label = "floor" if study.at_floor else ""
        for r in study.rows:
            rows.append({"x": x, "k": r.k, "h": r.h, "gtilde": r.value, "exact": study.exact,
                         "abs_error": r.abs_error, "order": study.order, "flag": label})
        orders.append({"x": x, "order": _num(study.order), "at_floor": study.at_floor})
        text = f"x={_fmt(x, cfg.digits)}: empirical order {_fmt(study.order, 4)}"
        if study.at_floor:
            text += " (floor: errors at the quadrature oracle's noise level, order not meaningful)"
        notes.append(text)
    json_rows = [{k: v for k, v in row.items() if k not in ("order", "flag")} for row in rows]
    columns = ["x", "k", "h", "gtilde", "exact", "abs_error", "order", "flag"]
    return render(cfg, columns, rows, json_rows, order=orders, notes=tuple(notes))


def cmd_residual(cfg: RunConfig) -> str:
    p = make_problem(cfg)
    rows = []
    if cfg.g is not None:
        try:
            g = parse(cfg.g)
        except ExprError as exc:
            raise UsageError(f"--g: {exc}") from None
        for x in cfg.points:
            rows.append({"x": x, "residual": residual(p, g, x, cfg.tol)})
    else:
        k = cfg.k_list[0]
        for x in cfg.points:
            samples = sample_solution(p, x, k, cfg.samples)
            rows.append({"x": x, "k": k, "residual": residual(p, samples, x, cfg.tol)})
    columns = ["x", "residual"] if cfg.g is not None else ["x", "k", "residual"]
    return render(cfg, columns, rows, rows)


COMMANDS = {"solve": cmd_solve, "table": cmd_table, "converge": cmd_converge, "residual": cmd_residual}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--f", help="right-hand side f(x), must satisfy f(0) = 0")
    common.add_argument("--alpha", help="kernel exponent in (0, 1), e.g. 1/2 or 0.8")
    common.add_argument("--x", help="comma-separated query points")
    common.add_argument("--k", help="comma-separated panel counts")
    common.add_argument("--tol", help=f"quadrature tolerance for exact values (default {DEFAULT_TOL:g})")
    common.add_argument("--preset", choices=sorted(PRESETS), help="built-in example problem")
    common.add_argument("--format", choices=["pretty", "csv", "json"], default="pretty")
    common.add_argument("--digits", type=int, default=10, help="significant digits in pretty output")

    parser = argparse.ArgumentParser(
        prog="abel-frac",
        description="Solve Abel integral equations f(x) = int_0^x g(t)/(x-t)^alpha dt "
        "with a modified trapezoidal Caputo-derivative rule.",
        epilog=GRAMMAR_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="approximate and exact g at the query points")
    sub.add_parser("table", parents=[common], help="approximations for several k side by side")
    sub.add_parser("converge", parents=[common], help="errors for a k sequence and the fitted order")
    r = sub.add_parser("residual", parents=[common], help="substitute a candidate g back into the equation")
    r.add_argument("--g", help="candidate solution expression; default: interpolated approximation")
    r.add_argument("--samples", type=int, default=51, help="interpolation samples when --g is absent")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        out = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"abel-frac: error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, DomainError, ExprError, OverflowError, ZeroDivisionError) as exc:
        print(f"abel-frac: numerical failure: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
