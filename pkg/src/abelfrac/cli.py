"""Command-line front end: ``abelfrac <subcommand> [options]``.

Results go to stdout (or ``--out``) as CSV with 17 significant digits, or
as JSON.  Exit codes: 0 success, 1 failed verification, 2 invalid input,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import abel, fracops, tautochrone
from .dynamics import SimConfig, natural_time, simulate
from .fracops import SampledFunction
from .quadrature import Grid
from .tables import Table, format_table, read_function_file

EXIT_FAILED_CHECK = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

BUILTINS = {
    "one": np.ones_like,
    "x": lambda x: x,
    "x2": lambda x: x**2,
    "sinx": np.sin,
}


class ValidationError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class NumericalFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError("E_ARGS", message)


def _positive(name, value):
    if value is None or not math.isfinite(value) or value <= 0:
        raise ValidationError("E_DOMAIN", f"{name} must be > 0, got {value}")
    return value


def _grid(args) -> Grid:
    if args.grid_n < 5:
        raise ValidationError("E_DOMAIN", f"--grid-n must be >= 5, got {args.grid_n}")
    return Grid(_positive("--x-max", args.x_max), args.grid_n)


def _operand(args) -> SampledFunction:
    if args.input and args.fn:
        raise ValidationError("E_ARGS", "give either --input or --fn, not both")
    if args.input:
        try:
            return read_function_file(args.input)
        except OSError as exc:
            raise ValidationError("E_INPUT", str(exc)) from None
        except ValueError as exc:
            raise ValidationError("E_INPUT", str(exc)) from None
    name = args.fn or "one"
    if name not in BUILTINS:
        raise ValidationError(
            "E_ARGS", f"unknown function {name!r}; choose from {', '.join(BUILTINS)}"
        )
    return SampledFunction.from_callable(BUILTINS[name], _grid(args))


def _psi(args) -> SampledFunction:
    if args.psi is None:
        return _operand(args)
    kind, _, arg = args.psi.partition(":")
    if kind in BUILTINS and not arg:
        args.fn = kind
        return _operand(args)
    try:
        c = float(arg) if arg else 1.0
    except ValueError:
        raise ValidationError("E_ARGS", f"bad --psi coefficient {arg!r}") from None
    shapes = {
        "const": lambda x: np.full_like(x, c),
        "sqrt": lambda x: c * np.sqrt(x),
        "linear": lambda x: c * x,
    }
    if kind not in shapes:
        raise ValidationError(
            "E_ARGS", f"unknown --psi {args.psi!r}; use const:K, sqrt:C, linear:C"
        )
    return SampledFunction.from_callable(shapes[kind], _grid(args))


def _parse_params(text):
    params = {}
    for item in filter(None, text.split(",")):
        key, sep, val = item.partition("=")
        if not sep:
            raise ValidationError("E_ARGS", f"expected key=value, got {item!r}")
        try:
            params[key.strip()] = float(val)
        except ValueError:
            raise ValidationError("E_ARGS", f"bad number in {item!r}") from None
    return params


def parse_curve(spec: str, g: float) -> tautochrone.Curve:
    """Build a curve from ``kind:key=value,...``."""
    kind, _, rest = spec.partition(":")
    p = _parse_params(rest)
    builders = {
        "cycloid": (tautochrone.cycloid, ("r",)),
        "line": (tautochrone.line, ("h", "L")),
        "circle": (tautochrone.circle, ("R",)),
        "parabola": (tautochrone.parabola, ("a", "xmax")),
    }
    if kind not in builders:
        raise ValidationError("E_ARGS", f"unknown curve kind {kind!r}")
    build, keys = builders[kind]
    missing = [k for k in keys if k not in p]
    if missing or set(p) - set(keys):
        raise ValidationError(
            "E_ARGS", f"curve {kind} takes {','.join(k + '=' for k in keys)}"
        )
    try:
        return build(*(p[k] for k in keys), g=g)
    except ValueError as exc:
        raise ValidationError("E_DOMAIN", str(exc)) from None


def _floats(text, name):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValidationError("E_ARGS", f"bad number list for {name}: {text!r}") from None


def _meta(args, **extra):
    meta = {"command": args.command}
    for key in ("alpha", "n", "grid_n", "x_max", "g"):
        if getattr(args, key, None) is not None:
            meta[key] = getattr(args, key)
    meta.update(extra)
    return meta


def cmd_fractional(args) -> Table:
    f = _operand(args)
    try:
        if args.command == "fracint":
            out = fracops.rl_integral(f, args.alpha)
        elif args.command == "fracdiff":
            out = fracops.rl_derivative(f, args.alpha)
        else:
            out = fracops.caputo_derivative(f, args.alpha)
    except ValueError as exc:
        raise ValidationError("E_DOMAIN", str(exc)) from None
    args.grid_n = f.grid.n
    args.x_max = f.grid.x_max
    return Table.from_function(out, _meta(args))


def cmd_abel(args) -> Table:
    try:
        kernel = abel.AbelKernel(args.n)
    except ValueError as exc:
        raise ValidationError("E_DOMAIN", str(exc)) from None
    if args.mode == "forward":
        f = _operand(args)
        return Table.from_function(abel.forward(f, kernel), _meta(args, mode=args.mode))
    psi = _psi(args)
    problem = abel.AbelProblem(kernel, psi)
    try:
        if args.mode == "invert-remarkable":
            s = abel.invert_remarkable(problem, output="cumulative")
            f = s.with_values(np.gradient(s.values, s.grid.h, edge_order=2))
        else:
            s = abel.invert_fractional(problem, output="cumulative")
            f = abel.invert_fractional(problem, output="density")
    except ValueError as exc:
        raise ValidationError("E_DOMAIN", str(exc)) from None
    return Table.from_function(f, _meta(args, mode=args.mode), s=s)


def cmd_tautochrone(args) -> Table:
    g = _positive("--g", args.g)
    action = args.action
    if action == "time-table":
        curve = parse_curve(args.curve, g)
        heights = _floats(args.heights, "--heights")
        try:
            times = [tautochrone.descent_time(curve, h) for h in heights]
        except ValueError as exc:
            raise ValidationError("E_DOMAIN", str(exc)) from None
        return Table({"y0": heights, "T": times}, _meta(args, curve=args.curve))
    if action == "reconstruct":
        T0 = _positive("--T0", args.T0)
        rec = tautochrone.reconstruct_tautochrone(T0, g, grid_n=args.grid_n)
        dens = np.gradient(rec.s.values, rec.s.grid.h, edge_order=2)
        return Table(
            {"y": rec.s.x, "s": rec.s.values, "ds_dy": dens},
            _meta(args, T0=T0, radius=rec.radius),
        )
    if action == "prop26":
        curve = parse_curve(args.curve, g)
        if not isinstance(curve, tautochrone.Cycloid):
            raise ValidationError("E_ARGS", "prop26 needs a cycloid curve")
        try:
            tr, ar = tautochrone.huygens_prop26_ratio(curve, args.ystart, args.ymid)
        except ValueError as exc:
            raise ValidationError("E_DOMAIN", str(exc)) from None
        return Table(
            {"y_start": [args.ystart], "y_mid": [args.ymid], "time_ratio": [tr], "arc_ratio": [ar]},
            _meta(args, curve=args.curve),
        )
    # brachistochrone
    a = _floats(args.a, "--a")
    b = _floats(args.b, "--b")
    if len(a) != 2 or len(b) != 2:
        raise ValidationError("E_ARGS", "--a and --b take x,y")
    try:
        table = tautochrone.brachistochrone_compare(a, b, g)
    except ValueError as exc:
        raise ValidationError("E_DOMAIN", str(exc)) from None
    return Table(
        {
            "candidate": ["chord", "circle", "cycloid"],
            "time": [table.chord, table.circle, table.cycloid],
        },
        _meta(args, fastest=table.fastest),
    )


def cmd_simulate(args) -> Table:
    g = _positive("--g", args.g)
    curve = parse_curve(args.curve, g)
    dt = args.dt if args.dt is not None else 1e-3 * natural_time(curve)
    if args.y0 is not None and args.heights:
        raise ValidationError("E_ARGS", "give either --y0 or --heights")
    if args.y0 is not None:
        heights = [args.y0]
    elif args.heights:
        heights = _floats(args.heights, "--heights")
    else:
        heights = list(np.round(np.linspace(0.05, 0.95, 19) * curve.max_height, 12))
    results = []
    for y0 in heights:
        try:
            config = SimConfig(curve, y0, dt, max_time=args.max_time, record_every=args.stride)
        except ValueError as exc:
            raise ValidationError("E_DOMAIN", str(exc)) from None
        result = simulate(config)
        if result.arrival_time is None:
            raise NumericalFailure(f"no arrival at the vertex from y0={y0} within max_time")
        results.append(result)
    if args.y0 is not None:
        r = results[0]
        return Table(
            {"t": r.t, "s": r.s, "v": r.v, "y": r.y, "energy": r.energy},
            _meta(args, curve=args.curve, y0=args.y0, dt=dt,
                  arrival_time=r.arrival_time, energy_drift=r.energy_drift),
        )
    arrivals = [r.arrival_time for r in results]
    return Table(
        {"y0": heights, "arrival_time": arrivals, "energy_drift": [r.energy_drift for r in results]},
        _meta(args, curve=args.curve, dt=dt,
              spread=float(np.ptp(arrivals) / np.mean(arrivals))),
    )


def cmd_verify(args, out) -> int:
    from . import verify

    def run():
        return verify.run_all(quick=args.quick)

    if args.inject_fault:
        with verify.inject_fault(args.inject_fault):
            checks = run()
    else:
        checks = run()
    for c in checks:
        out.write(verify.format_check(c) + "\n")
    failed = [c for c in checks if not c.passed]
    out.write(f"{len(checks) - len(failed)}/{len(checks)} checks passed\n")
    return EXIT_FAILED_CHECK if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="abelfrac", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def io_opts(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    def grid_opts(p):
        p.add_argument("--grid-n", type=int, default=513)
        p.add_argument("--x-max", type=float, default=1.0)
        p.add_argument("--fn", default=None, help=f"builtin: {', '.join(BUILTINS)}")
        p.add_argument("--input", default=None, help="function file with header x,f")

    for name in ("fracint", "fracdiff", "caputo"):
        p = sub.add_parser(name)
        p.add_argument("--alpha", type=float, required=True)
        grid_opts(p)
        io_opts(p)

    p = sub.add_parser("abel")
    p.add_argument("mode", choices=("forward", "invert-remarkable", "invert-fractional"))
    p.add_argument("--n", type=float, default=0.5)
    p.add_argument("--psi", default=None, help="const:K, sqrt:C, linear:C or a builtin")
    grid_opts(p)
    io_opts(p)

    p = sub.add_parser("tautochrone")
    p.add_argument("action", choices=("time-table", "reconstruct", "prop26", "brachistochrone"))
    p.add_argument("--curve", default="cycloid:r=1")
    p.add_argument("--g", type=float, default=9.81)
    p.add_argument("--heights", default="0.1,0.5,1.0,1.5,1.9")
    p.add_argument("--T0", type=float, default=None)
    p.add_argument("--grid-n", type=int, default=513)
    p.add_argument("--ystart", type=float, default=1.0)
    p.add_argument("--ymid", type=float, default=0.5)
    p.add_argument("--a", default="0,2")
    p.add_argument("--b", default=f"{math.pi!r},0")
    io_opts(p)

    p = sub.add_parser("simulate")
    p.add_argument("--curve", default="cycloid:r=1")
    p.add_argument("--g", type=float, default=9.81)
    p.add_argument("--y0", type=float, default=None)
    p.add_argument("--heights", default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--max-time", type=float, default=None)
    p.add_argument("--stride", type=int, default=1, help="record every k-th step")
    io_opts(p)

    p = sub.add_parser("verify")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--inject-fault", choices=("weights",), default=None, help=argparse.SUPPRESS)
    return parser


def _emit(table: Table, args) -> None:
    text = format_table(table, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "verify":
            return cmd_verify(args, sys.stdout)
        handler = {
            "fracint": cmd_fractional,
            "fracdiff": cmd_fractional,
            "caputo": cmd_fractional,
            "abel": cmd_abel,
            "tautochrone": cmd_tautochrone,
            "simulate": cmd_simulate,
        }[args.command]
        _emit(handler(args), args)
    except ValidationError as exc:
        sys.stderr.write(f"ERROR {exc.code}: {exc}\n")
        return EXIT_VALIDATION
    except NumericalFailure as exc:
        sys.stderr.write(f"ERROR E_NUMERIC: {exc}\n")
        return EXIT_NUMERICAL
    except BrokenPipeError:
        # reader went away (e.g. piped into head); nothing left to report
        sys.stdout = open(os.devnull, "w")
        return 0
    except OSError as exc:
        sys.stderr.write(f"ERROR E_IO: {exc}\n")
        return EXIT_VALIDATION
    return 0


if __name__ == "__main__":
    sys.exit(main())
