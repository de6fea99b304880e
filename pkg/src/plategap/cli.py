"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 bad usage or parameters.
Tables go to ``--output`` (or stdout); human-readable summaries go to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .asymptotics import e_of_ell, e_of_ell_alpha, first_order_correction, sweep_alpha
from .core import REFERENCE_SIGMA, PlateGeometry
from .eigen import ComboSpec, combo_max_gap, eigen_gap_table
from .errors import PlateError
from .series import gap_profile, make_load, solve_plate
from .validation import run_suite, table_cells

GAP_SAMPLES = 257

_PI_FORM = re.compile(r"^\s*(?:([0-9.eE+-]+)\s*\*\s*)?pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")


class UsageError(Exception):
    """Bad parameters detected after parsing; reported with exit code 2."""


def parse_ell(text: str) -> float:
    """Half-width as a real or in the form ``pi``, ``pi/150``, ``2*pi/300``."""
    m = _PI_FORM.match(text)
    try:
        if m:
            num = float(m.group(1)) if m.group(1) else 1.0
            den = float(m.group(2)) if m.group(2) else 1.0
            value = num * math.pi / den
        else:
            value = float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"cannot parse half-width {text!r}") from None
    if not (math.isfinite(value) and value > 0.0):
        raise argparse.ArgumentTypeError(f"half-width must be positive, got {text!r}")
    return value


def parse_gspec(text: str):
    """``sin`` | ``const`` | ``modes:3=1,7=0.5``, returned as ``make_load`` keyword arguments."""
    text = text.strip()
    if text == "sin":
        return {}
    if text == "const":
        return {"g": lambda x: np.ones_like(np.asarray(x, dtype=float))}
    if text.startswith("modes:"):
        gam = {}
        for item in filter(None, text[6:].split(",")):
            try:
                k, v = item.split("=")
                gam[int(k)] = float(v)
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad mode entry {item!r}") from None
        if not gam:
            raise argparse.ArgumentTypeError("modes: needs at least one m=gamma entry")
        return {"gammas": gam}
    raise argparse.ArgumentTypeError(f"unknown g-spec {text!r}; use sin, const or modes:m=g,...")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _emit(args, config, results, warnings, csv_text):
    if args.format == "json":
        doc = {"config": config, "results": results, "warnings": warnings}
        text = json.dumps(_json_safe(doc), indent=2) + "\n"
    else:
        text = csv_text
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)


def _geometry(args) -> PlateGeometry:
    return PlateGeometry(args.ell, args.sigma)


def _base_config(args, **extra):
    return {"command": args.command, "ell": args.ell, "sigma": args.sigma, **extra}


def cmd_gap_exp(args) -> int:
    geo = _geometry(args)
    load_kw = parse_gspec(args.g)
    if args.g == "const":
        load_kw["m_max"] = args.modes
    load = make_load(geo, args.alpha, **load_kw)
    sol = solve_plate(geo, load)
    prof = gap_profile(sol)
    xs = np.linspace(0.0, math.pi, GAP_SAMPLES)
    gs = prof(xs)
    e_lim, c1 = e_of_ell(geo), first_order_correction(geo)
    # closed form only applies to the sin x load
    e_alpha = e_of_ell_alpha(geo, args.alpha) if args.g == "sin" else None
    scalars = {"g_infinity": prof.g_infinity, "x_max": prof.x_max,
               "e_ell_alpha": e_alpha, "e_ell": e_lim, "c1": c1}
    rows = [(x, g) for x, g in zip(xs, gs)]
    rows += [(k, v) for k, v in scalars.items() if v is not None]
    results = {"x": xs.tolist(), "gap": gs.tolist(), **scalars, "modes": len(sol.modes)}
    warnings = [] if geo.narrow else ["plate is not narrow (2*ell >= pi)"]
    _emit(args, _base_config(args, alpha=args.alpha, g=args.g), results, warnings,
          _csv(["x", "gap"], rows))
    print(f"g_infinity = {prof.g_infinity:.6e} at x = {prof.x_max:.6f}; "
          f"E(ell) = {e_lim:.6e}; c1 = {c1:.6e}", file=sys.stderr)
    return 0


def cmd_eigen_table(args) -> int:
    geo = _geometry(args)
    table = eigen_gap_table(geo, args.m_max, args.j_max)
    header = ["j"] + [f"m={m}" for m in range(1, args.m_max + 1)]
    rows, grid = [], []
    for j, row in enumerate(table.cells, start=1):
        vals = [c.c if c is not None else "ERROR" for c in row]
        rows.append([j, *vals])
        grid.append([c.c if c is not None else None for c in row])
    warnings = [f"cell m={m} j={j}: {msg}" for (m, j), msg in sorted(table.errors.items())]
    nus = [[c.nu if c is not None else None for c in row] for row in table.cells]
    results = {"c": grid, "nu": nus, "errors": len(table.errors)}
    _emit(args, _base_config(args, m_max=args.m_max, j_max=args.j_max), results, warnings,
          _csv(header, rows))
    print("j\\m " + " ".join(f"{m:>11d}" for m in range(1, args.m_max + 1)), file=sys.stderr)
    for j, row in enumerate(grid, start=1):
        cells = " ".join(f"{v:11.4e}" if v is not None else f"{'ERROR':>11}" for v in row)
        print(f"{j:3d} {cells}", file=sys.stderr)
    if table.errors:
        print(f"{len(table.errors)} cell(s) failed", file=sys.stderr)
    return 0


def cmd_sweep_alpha(args) -> int:
    geo = _geometry(args)
    sw = sweep_alpha(geo, args.alpha_min, args.alpha_max, args.points, args.spacing)
    results = {"alpha": list(sw.alpha_grid), "g_infinity": list(sw.values),
               "nudged": [bool(n) for n in sw.nudged], "limit": sw.limit,
               "strictly_increasing": sw.strictly_increasing}
    warnings = [f"alpha nudged to {a!r}" for a, n in zip(sw.alpha_grid, sw.nudged) if n]
    config = _base_config(args, alpha_min=args.alpha_min, alpha_max=args.alpha_max,
                          points=args.points, spacing=args.spacing)
    _emit(args, config, results, warnings, sw.to_csv())
    below = all(v < sw.limit for v in sw.values)
    word = "strictly increasing" if sw.strictly_increasing else "NOT strictly increasing"
    print(f"monotonicity: {word} over {len(sw.values)} points; "
          f"{'all below' if below else 'NOT all below'} E(ell) = {sw.limit:.6e}", file=sys.stderr)
    return 0


def read_combo_file(path: str) -> ComboSpec:
    """JSON (list of ``[m, j, weight]`` or ``{"entries": ...}``) or text lines ``m j weight``."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
        if isinstance(data, dict):
            data = data.get("entries", [])
        triples = [tuple(t) for t in data]
    except json.JSONDecodeError:
        triples = []
        for ln, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].replace(",", " ").strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise UsageError(f"{path}:{ln}: expected 'm j weight'")
            triples.append((parts[0], parts[1], parts[2]))
    try:
        return ComboSpec(tuple((int(m), int(j), float(w)) for m, j, w in triples))
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad combination spec: {exc}") from None


def cmd_combo(args) -> int:
    geo = _geometry(args)
    spec = read_combo_file(args.spec_file)
    res = combo_max_gap(geo, spec)
    rows = [("max_gap", res.max_gap), ("m_o", res.m_o), ("j_o", res.j_o),
            ("actual_gap", res.actual_gap), ("weighted_bound", res.weighted_bound)]
    rows += [(f"c_m{m}_j{j}", c) for (m, j, _), c in zip(spec.entries, res.c_values)]
    results = {"max_gap": res.max_gap, "m_o": res.m_o, "j_o": res.j_o,
               "argmax_weights": [list(w) for w in res.argmax_weights],
               "actual_gap": res.actual_gap, "weighted_bound": res.weighted_bound,
               "entries": [{"m": m, "j": j, "weight": w, "c": c}
                           for (m, j, w), c in zip(spec.entries, res.c_values)]}
    _emit(args, _base_config(args, spec_file=str(args.spec_file)), results, [],
          _csv(["quantity", "value"], rows))
    print(f"max over weights = {res.max_gap:.6e} (all weight on m={res.m_o}, j={res.j_o}); "
          f"given weights give {res.actual_gap:.6e}", file=sys.stderr)
    return 0


def cmd_validate(args) -> int:
    rep = run_suite(args.level, _geometry(args))
    doc = rep.to_dict()
    rows = []
    for c in rep.checks:
        rows.append((c.name, "", "", c.passed))
        if c.name == "table_reproduction":
            for cell in c.detail["cells"]:
                rows.append((c.name, f"m={cell['m']} j={cell['j']}", cell["rel_error"], cell["passed"]))
        if c.name == "zero_solution_residual":
            rows.append((c.name, "max_residual", c.detail["max_residual"], c.passed))
    if args.format == "json":
        text = json.dumps(_json_safe({"config": _base_config(args, level=args.level),
                                      "results": doc, "warnings": []}), indent=2) + "\n"
    else:
        text = _csv(["check", "item", "value", "passed"], rows)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    for c in rep.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}", file=sys.stderr)
    print(f"{doc['n_checks'] - doc['n_failed']}/{doc['n_checks']} checks passed "
          f"in {rep.seconds:.2f} s ({kernels.BACKEND} kernels)", file=sys.stderr)
    return 0 if rep.passed else 1


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ell", type=parse_ell, default="pi/150",
                        help="half-width: a real or pi/N form (default pi/150)")
    common.add_argument("--sigma", type=float, default=REFERENCE_SIGMA,
                        help="Poisson ratio in (0, 1/2) (default 0.2)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", default=None, help="output file (default stdout)")

    p = argparse.ArgumentParser(
        prog="plategap", description="Gap function and torsional modes of partially hinged plates.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gap-exp", parents=[common], help="gap under the e^{alpha y} g(x) load")
    g.add_argument("--alpha", type=float, required=True)
    g.add_argument("--g", default="sin", help="sin | const | modes:m=gamma,... (default sin)")
    g.add_argument("--modes", type=_positive_int, default=64,
                   help="Fourier modes kept for --g const (default 64)")
    g.set_defaults(func=cmd_gap_exp)

    e = sub.add_parser("eigen-table", parents=[common], help="resonant maximal-gap table")
    e.add_argument("--m-max", type=_positive_int, default=5)
    e.add_argument("--j-max", type=_positive_int, default=5)
    e.set_defaults(func=cmd_eigen_table)

    s = sub.add_parser("sweep-alpha", parents=[common], help="maximal gap along an alpha grid")
    s.add_argument("--alpha-min", type=float, default=1.5)
    s.add_argument("--alpha-max", type=float, default=1e6)
    s.add_argument("--points", type=_positive_int, default=200)
    s.add_argument("--spacing", choices=("log", "linear"), default="log")
    s.set_defaults(func=cmd_sweep_alpha)

    c = sub.add_parser("combo", parents=[common], help="maximal gap of a resonant combination")
    c.add_argument("spec_file", help="JSON or text file of (m, j, weight) triples")
    c.set_defaults(func=cmd_combo)

    v = sub.add_parser("validate", parents=[common], help="run the invariant suites")
    v.add_argument("level", nargs="?", choices=("fast", "full"), default="fast")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gap-exp":
        try:
            parse_gspec(args.g)
        except argparse.ArgumentTypeError as exc:
            parser.error(str(exc))
    try:
        return args.func(args)
    except (PlateError, UsageError) as exc:
        print(f"plategap {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
