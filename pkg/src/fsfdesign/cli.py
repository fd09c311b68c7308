"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 solver failure, 4 file I/O.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import __version__
from .core import FilterSpec, check_assignment
from .errors import (
    AllZeroResponse,
    BadAssignment,
    GridTooFine,
    Infeasible,
    NoConvergence,
    ParseError,
    SpecInfeasible,
    TooManyVariables,
    Unbounded,
    UnknownPreset,
)
from .optimizer import SolveOptions, grid_sweep, optimize
from .response import DEFAULT_G, psl, response_curve, synthesize
from .tables import PRESETS, comparison_report, run_preset

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_IO = 0, 2, 3, 4
DEFAULT_GRIDS = (0.01, 0.001, 0.0001, 0.00001)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from None


def _range(text: str) -> tuple[float, float]:
    vals = _float_list(text)
    if len(vals) != 2 or not vals[0] <= vals[1]:
        raise argparse.ArgumentTypeError(f"expected LO,HI with LO <= HI, got {text!r}")
    return vals[0], vals[1]


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return v


def _spec_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_argument_group("filter")
    g.add_argument("--n", type=int, required=required, help="filter length")
    g.add_argument("--type", dest="kind", choices=("lowpass", "bandpass"), default="lowpass")
    g.add_argument("--expansion", choices=("cosine", "sine"), default="cosine")
    g.add_argument("--bw", type=int, required=required, help="unity samples in the passband")
    g.add_argument("--m1", type=int, default=None,
                   help="bandpass: index of the last zero sample below the lower transition")
    g.add_argument("--ntrans", type=int, default=1, help="transition samples per band edge")
    g.add_argument("--binding", choices=("symmetric", "independent"), default="symmetric")


def _io_flags(p: argparse.ArgumentParser, formats=("json", "text")) -> None:
    p.add_argument("--out", help="write here instead of standard output")
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--units", choices=("rad", "cycles"), default="rad",
                   help="frequency units in the output")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fsfdesign", description="Frequency sampling FIR filter design by linear programming.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("design", help="optimal transition coefficients for one filter")
    _spec_flags(d)
    d.add_argument("--grid", type=_positive, default=DEFAULT_G, help="grid density N*dw")
    _io_flags(d)

    v = sub.add_parser("verify", help="PSL of a given coefficient set")
    _spec_flags(v)
    v.add_argument("--coeffs", type=float, nargs="+", required=True)
    v.add_argument("--grid", type=_positive, default=DEFAULT_G)
    _io_flags(v)

    t = sub.add_parser("table", help="regenerate an embedded coefficient table")
    t.add_argument("preset", choices=sorted(PRESETS))
    t.add_argument("--n", type=int)
    t.add_argument("--bw", type=int)
    t.add_argument("--m1", type=int)
    t.add_argument("--ntrans", type=int)
    t.add_argument("--grid", type=_positive, default=DEFAULT_G)
    t.add_argument("--workers", type=int, default=1)
    t.add_argument("--out")
    t.add_argument("--format", choices=("md", "csv"), default="md")

    s = sub.add_parser("sweep-grid", help="optimum versus grid density")
    _spec_flags(s)
    s.add_argument("--grids", type=_float_list, default=list(DEFAULT_GRIDS))
    s.add_argument("--out")
    s.add_argument("--format", choices=("json", "csv", "md"), default="json")

    r = sub.add_parser("response", help="export the unnormalised amplitude response")
    _spec_flags(r)
    r.add_argument("--coeffs", type=float, nargs="*", default=[])
    r.add_argument("--step", type=_positive, default=1e-3, help="frequency step in radians")
    r.add_argument("--range", dest="omega_range", type=_range, default=(0.0, math.pi))
    r.add_argument("--out")
    r.add_argument("--units", choices=("rad", "cycles"), default="rad")

    e = sub.add_parser("export-taps", help="write the impulse response")
    _spec_flags(e)
    e.add_argument("--coeffs", type=float, nargs="*", default=[])
    e.add_argument("--out")
    return p


def _spec(a) -> FilterSpec:
    if a.kind == "lowpass" and a.m1 not in (None, 0):
        raise SpecInfeasible("--m1 applies to bandpass filters only")
    if a.kind == "bandpass" and a.m1 is None:
        raise SpecInfeasible("bandpass filters need --m1")
    if a.kind == "lowpass" and a.binding != "symmetric":
        raise SpecInfeasible("--binding applies to bandpass filters only")
    return FilterSpec(n=a.n, bw=a.bw, t=a.ntrans, kind=a.kind, expansion=a.expansion,
                      m1=a.m1 or 0, binding=a.binding)


def _scale(units: str) -> float:
    return 1.0 if units == "rad" else 1.0 / (2.0 * math.pi)


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _write(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_design(a) -> int:
    spec = _spec(a)
    res = optimize(spec, SolveOptions(g=a.grid))
    k = _scale(a.units)
    doc = res.to_dict()
    doc["extremal_omegas"] = [w * k for w in res.extremal_omegas]
    if a.format == "json":
        _write(_dumps(doc), a.out)
    else:
        lines = [spec.describe(),
                 "coefficients: " + " ".join(f"{c:.8f}" for c in res.coefficients),
                 f"psl_db: {res.psl_db:.4f}",
                 f"delta: {res.delta:.6e}",
                 f"iterations: {res.iterations}"]
        _write("\n".join(lines) + "\n", a.out)
    return EXIT_OK


def cmd_verify(a) -> int:
    spec = _spec(a)
    rep = psl(spec, check_assignment(spec, a.coeffs), a.grid)
    k = _scale(a.units)
    doc = {"spec": spec.to_dict(), "coefficients": list(a.coeffs), **rep.to_dict()}
    doc["peak_omega"] = rep.peak_omega * k
    doc["local_maxima"] = [[w * k, db] for w, db in rep.all_local_maxima]
    if a.format == "json":
        _write(_dumps(doc), a.out)
    else:
        _write(f"{spec.describe()}\npsl_db: {rep.psl_db:.4f}\npeak_omega: {doc['peak_omega']:.6f}\n", a.out)
    return EXIT_OK


def cmd_table(a) -> int:
    results = run_preset(a.preset, n=a.n, g=a.grid, bw=a.bw, t=a.ntrans, m1=a.m1,
                         workers=max(1, a.workers))
    if not results:
        raise SpecInfeasible(f"no rows of table {a.preset!r} match the filters")
    _write(comparison_report(results, a.format), a.out)
    return EXIT_OK


def cmd_sweep_grid(a) -> int:
    spec = _spec(a)
    if not a.grids or any(not (g > 0) for g in a.grids):
        raise ValueError("--grids needs positive densities")
    rows = grid_sweep(spec, a.grids)
    if a.format == "json":
        doc = {"spec": spec.to_dict(),
               "rows": [{"g": g, "coefficients": list(c), "psl_db": p} for g, c, p in rows]}
        _write(_dumps(doc), a.out)
    elif a.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["g", "coefficients", "psl_db"])
        for g, c, p in rows:
            w.writerow([repr(g), " ".join(repr(x) for x in c), repr(p)])
        _write(buf.getvalue(), a.out)
    else:
        out = ["| N*dw | coefficients | PSL (dB) |", "|---|---|---|"]
        for g, c, p in rows:
            out.append(f"| {g:g} | {' '.join(f'{x:.15f}' for x in c)} | {p:.12f} |")
        _write("\n".join(out) + "\n", a.out)
    return EXIT_OK


def cmd_response(a) -> int:
    spec = _spec(a)
    curve = response_curve(spec, check_assignment(spec, a.coeffs), a.step, a.omega_range)
    text = curve.to_csv(units=a.units)
    _write(text, a.out)
    return EXIT_OK


def cmd_export_taps(a) -> int:
    spec = _spec(a)
    _write(synthesize(spec, check_assignment(spec, a.coeffs)).to_csv(), a.out)
    return EXIT_OK


COMMANDS = {
    "design": cmd_design,
    "verify": cmd_verify,
    "table": cmd_table,
    "sweep-grid": cmd_sweep_grid,
    "response": cmd_response,
    "export-taps": cmd_export_taps,
}

_INPUT_ERRORS = (SpecInfeasible, BadAssignment, ParseError, UnknownPreset, TooManyVariables,
                 GridTooFine, AllZeroResponse, ValueError)
_SOLVER_ERRORS = (NoConvergence, Infeasible, Unbounded)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        return COMMANDS[args.command](args)
    except _SOLVER_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except _INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
