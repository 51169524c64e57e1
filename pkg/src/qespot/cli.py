"""Command-line front end.

Exit codes: 0 ok/pass, 1 verification failed, 2 parameter error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .algebra import AlgebraClass, AlgebraParams
from .errors import ParameterError, QESError
from .potentials import RationalParams, classify, eval_potential, params_from_algebra
from .verify import full_pipeline_check
from .wavefn import is_normalizable, norm_closed_form, norm_quadrature, wavefunction

EXIT_OK, EXIT_FAIL, EXIT_PARAM, EXIT_IO = 0, 1, 2, 3

PRESETS = {
    "fig1": dict(cls=AlgebraClass.III, k=2, b=8, n=0, A=399, B=64, C=2),
    "fig2": dict(cls=AlgebraClass.III, k=1, b=3, n=0, A=63, B=12, C=0),
}


def fmt(value: float) -> str:
    """17 significant digits: parses back to the identical double."""
    return format(float(value), ".17g")


def make_grid(xmin: float, xmax: float, points: int, spacing: str) -> np.ndarray:
    if not (xmin > 0 and xmax > xmin):
        raise ParameterError(f"grid needs 0 < xmin < xmax, got [{xmin}, {xmax}]")
    if points < 2:
        raise ParameterError(f"grid needs at least 2 points, got {points}")
    if spacing == "log":
        return np.geomspace(xmin, xmax, points)
    return np.linspace(xmin, xmax, points)


def _add_grid(p):
    p.add_argument("--xmin", type=float, default=0.01)
    p.add_argument("--xmax", type=float, default=5.0)
    p.add_argument("--points", type=int, default=500)
    p.add_argument("--spacing", choices=("linear", "log"), default="log")


def _add_output(p, default_format="csv"):
    p.add_argument("--format", choices=("csv", "json"), default=default_format)
    p.add_argument("--output", default="-", help="output path (default: stdout)")


def _add_algebra(p):
    p.add_argument("--class", dest="cls", type=AlgebraClass.parse, default=None,
                   help="algebra class: I, II+ (or II), II-, III (default III)")
    p.add_argument("--k", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--n", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qespot", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qespot {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="zero-pattern type, zeros and signs of a class III potential")
    for name in ("A", "B", "C"):
        p.add_argument(f"--{name}", type=float, required=True)
    _add_output(p, "json")

    p = sub.add_parser("sample", help="tabulate V(x)")
    p.add_argument("--preset", choices=sorted(PRESETS))
    _add_algebra(p)
    for name in ("A", "B", "C"):
        p.add_argument(f"--{name}", type=float)
    _add_grid(p)
    _add_output(p)

    p = sub.add_parser("wavefn", help="tabulate the zero-energy wave function")
    p.add_argument("--preset", choices=sorted(PRESETS))
    _add_algebra(p)
    _add_grid(p)
    _add_output(p)

    p = sub.add_parser("verify", help="run the numerical verification for one parameter set")
    _add_algebra(p)
    p.add_argument("--output", default="-")
    p.add_argument("--include-grid", action="store_true", help="keep the per-point residuals")

    p = sub.add_parser("norm", help="closed-form and quadrature normalization (class III, n = 0)")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--output", default="-")
    return parser


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _table(columns, rows, comment, fmt_name):
    rows = list(rows)
    if fmt_name == "json":
        data = {"comment": comment}
        for i, name in enumerate(columns):
            data[name] = [float(r[i]) for r in rows]
        return json.dumps(data, allow_nan=False) + "\n"
    buf = io.StringIO()
    buf.write(f"# {comment}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _algebra_from_args(args, require_class=True):
    if getattr(args, "preset", None):
        if args.k is not None or args.b is not None:
            raise ParameterError("--preset cannot be combined with --k/--b")
        pre = PRESETS[args.preset]
        return pre["cls"], AlgebraParams(pre["k"], pre["b"], pre["n"])
    if args.k is None or args.b is None:
        raise ParameterError("--k and --b are required")
    cls = args.cls
    if cls is None:
        if require_class:
            raise ParameterError("--class is required")
        cls = AlgebraClass.III
    return cls, AlgebraParams(args.k, args.b, args.n)


def _describe(cls, ap=None, rp=None):
    parts = [f"class={cls.value}"]
    if ap is not None:
        parts += [f"k={fmt(ap.k)}", f"b={fmt(ap.b)}", f"n={ap.n}"]
    if rp is not None:
        parts += [f"A={fmt(rp.A)}", f"B={fmt(rp.B)}", f"C={fmt(rp.C)}"]
    return " ".join(parts)


def cmd_classify(args) -> int:
    rp = RationalParams(args.A, args.B, args.C)
    ptype, zs = classify(rp)
    out = {
        "type": ptype.value,
        "zeros": list(zs.zeros),
        "sign_pattern": list(zs.sign_pattern),
        "delta": zs.delta,
        "X_plus": zs.x_plus,
        "X_minus": zs.x_minus,
        "Y": zs.y,
    }
    if args.format == "csv":
        text = _table(("x0",), [(z,) for z in zs.zeros], f"qespot {__version__} classify type={ptype.value}", "csv")
    else:
        text = json.dumps(out, allow_nan=False) + "\n"
    _write(args.output, text)
    return EXIT_OK


def cmd_sample(args) -> int:
    rational = [getattr(args, name) for name in ("A", "B", "C")]
    algebra = args.k is not None or args.b is not None
    if args.preset:
        if algebra or any(v is not None for v in rational):
            raise ParameterError("--preset cannot be combined with explicit parameters")
        pre = PRESETS[args.preset]
        cls, ap, rp = pre["cls"], None, RationalParams(pre["A"], pre["B"], pre["C"])
    elif all(v is not None for v in rational):
        if algebra:
            raise ParameterError("give either --A/--B/--C or --k/--b, not both")
        cls, ap, rp = args.cls or AlgebraClass.III, None, RationalParams(*rational)
    elif any(v is not None for v in rational):
        raise ParameterError("--A, --B and --C must be given together")
    else:
        cls, ap = _algebra_from_args(args, require_class=False)
        rp = params_from_algebra(cls, ap)
    grid = make_grid(args.xmin, args.xmax, args.points, args.spacing)
    v = np.asarray(eval_potential(cls, rp, grid))
    label = f"preset={args.preset} " if args.preset else ""
    comment = f"qespot {__version__} sample {label}{_describe(cls, ap, rp)}"
    _write(args.output, _table(("x", "V"), zip(grid, v), comment, args.format))
    return EXIT_OK


def cmd_wavefn(args) -> int:
    cls, ap = _algebra_from_args(args, require_class=False)
    grid = make_grid(args.xmin, args.xmax, args.points, args.spacing)
    psi = np.asarray(wavefunction(cls, ap.k, ap.b, ap.n, grid))
    comment = f"qespot {__version__} wavefn {_describe(cls, ap)}"
    _write(args.output, _table(("x", "psi"), zip(grid, psi), comment, args.format))
    return EXIT_OK


def cmd_verify(args) -> int:
    cls, ap = _algebra_from_args(args, require_class=False)
    report = full_pipeline_check(ap.k, ap.b, ap.n, cls=cls)
    data = report.to_dict()
    if not args.include_grid:
        data.pop("residual_grid")
    _write(args.output, json.dumps(data, allow_nan=False) + "\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_norm(args) -> int:
    k, b = args.k, args.b
    if not is_normalizable(k, b):
        raise ParameterError(f"not normalizable: b={b} <= k+1={k + 1}")
    quad = norm_quadrature(AlgebraClass.III, k, b, 0)
    closed = norm_closed_form(k, b) if float(2 * k).is_integer() else None
    rel = None if closed is None else abs(quad.value - closed) / abs(closed)
    out = {"k": k, "b": b, "closed_form": closed, "quadrature": quad.value, "relative_diff": rel}
    _write(args.output, json.dumps(out, allow_nan=False) + "\n")
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "sample": cmd_sample,
    "wavefn": cmd_wavefn,
    "verify": cmd_verify,
    "norm": cmd_norm,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except QESError as exc:
        print(f"qespot: error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except OSError as exc:
        print(f"qespot: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
