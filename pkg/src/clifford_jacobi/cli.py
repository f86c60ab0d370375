"""Command-line front end.

Exit codes
----------
0  success
1  ``verify`` ran and at least one check failed
2  invalid parameters, malformed input or config
3  derivation routes disagree, or an integral diverges / does not converge
4  requested scales cannot be resolved on the signal grid

Options may also come from a JSON ``--config`` file whose keys are the long
option names with dashes replaced by underscores.  Flags beat the config file,
which beats the built-in defaults.  ``CJW_THREADS`` sets the worker count for
spectrum tabulation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import verify as verify_mod
from .cwt import (
    CwtField,
    GridSignal,
    ScaleRangeError,
    check_scales,
    cwt_forward,
    gaussian_bump,
    geometric_scales,
    reconstruct,
    saved_wavelet,
)
from .families import (
    FAMILIES,
    MAX_ORDER,
    DivergentIntegralError,
    WaveletSpec,
    family_poly,
    family_poly_rodrigues,
    moment_integral,
)
from .quadrature import QuadratureError, RadialQuadrature
from .spectral import admissibility, spectrum_table
from .vecpoly import as_number

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_DIVERGENT = 3
EXIT_SCALES = 4

THREADS_ENV = "CJW_THREADS"


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# formatting -----------------------------------------------------------------------


def fmt(x) -> str:
    return format(float(x) + 0.0, ".17g")


def render_json(obj, indent=0) -> str:
    """JSON text with every float printed to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {render_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [render_json(v, indent + 1) for v in obj]
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(items) + "]"
        return "[\n" + ",\n".join(pad + i for i in items) + "\n" + end + "]"
    raise TypeError(f"cannot render {type(obj).__name__}")


def write_text(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# parameters -------------------------------------------------------------------------


def exact(value, name):
    try:
        return as_number(str(value))
    except (ValueError, ZeroDivisionError):
        try:
            return float(value)
        except (TypeError, ValueError):
            raise CliError(EXIT_INVALID, f"--{name.replace('_', '-')}: not a number: {value!r}") from None


def wavelet_from(args) -> WaveletSpec:
    if args.ell < 0 or args.ell > MAX_ORDER:
        raise CliError(EXIT_INVALID, f"-l must lie in [0, {MAX_ORDER}], got {args.ell}")
    if not 2 <= args.m <= 8:
        raise CliError(EXIT_INVALID, f"-m must lie in [2, 8], got {args.m}")
    return WaveletSpec(args.ell, args.m, exact(args.alpha, "alpha"), exact(args.beta, "beta"))


def quadrature_from(args) -> RadialQuadrature:
    return RadialQuadrature(epsabs=args.epsabs, epsrel=args.epsrel, nodes_per_unit=args.nodes_per_unit)


def thread_count() -> int:
    text = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(text)
    except ValueError:
        raise CliError(EXIT_INVALID, f"{THREADS_ENV} must be an integer, got {text!r}") from None
    if n < 1:
        raise CliError(EXIT_INVALID, f"{THREADS_ENV} must be at least 1")
    return n


# subcommands ---------------------------------------------------------------------------


def cmd_gen_poly(args) -> int:
    if args.family not in FAMILIES:
        raise CliError(EXIT_INVALID, f"unknown family {args.family!r}; expected one of {', '.join(FAMILIES)}")
    if not 0 <= args.ell <= MAX_ORDER:
        raise CliError(EXIT_INVALID, f"-l must lie in [0, {MAX_ORDER}], got {args.ell}")
    if not 1 <= args.m <= 8:
        raise CliError(EXIT_INVALID, f"-m must lie in [1, 8], got {args.m}")
    alpha, beta = exact(args.alpha, "alpha"), exact(args.beta, "beta")
    rows, all_agree = [], True
    for ell in range(args.ell + 1):
        rec = family_poly(args.family, ell, args.m, alpha, beta)
        rod = family_poly_rodrigues(args.family, ell, args.m, alpha, beta)
        agree = None if rod is None else bool(rec == rod)
        all_agree = all_agree and agree is not False
        rows.append(
            {
                "ell": ell,
                "recurrence": rec.to_dict()["coeffs"],
                "rodrigues": None if rod is None else rod.to_dict()["coeffs"],
                "agree": agree,
            }
        )
    table = {"family": args.family, "m": args.m, "alpha": str(alpha), "beta": str(beta), "polynomials": rows}
    write_text(args.output, render_json(table) + "\n")
    if not all_agree:
        bad = [r["ell"] for r in rows if r["agree"] is False]
        raise CliError(EXIT_DIVERGENT, f"recurrence and Rodrigues routes disagree at ell = {bad}")
    return EXIT_OK


def cmd_eval_wavelet(args) -> int:
    spec = wavelet_from(args)
    if args.count < 1 or args.r_max < args.r_min or args.r_min < 0:
        raise CliError(EXIT_INVALID, "need 0 <= r-min <= r-max and count >= 1")
    if args.moments is not None:
        return _moments(spec, args)
    r = np.linspace(args.r_min, args.r_max, args.count)
    # at r = 1 a negative alpha makes the weight infinite; report it as invalid input
    if float(spec.alpha) < 0 and np.any(r == 1.0):
        raise CliError(EXIT_INVALID, "alpha < 0 makes psi infinite at r = 1; move r = 1 off the sample grid")
    s, v = spec.radial_parts(r)
    lines = ["r,scalar,vector_radial"] + [f"{fmt(a)},{fmt(b)},{fmt(c)}" for a, b, c in zip(r, s, v)]
    write_text(args.output, "\n".join(lines) + "\n")
    return EXIT_OK


def _moments(spec: WaveletSpec, args) -> int:
    # the moment of x^k psi vanishes for k < ell once it converges; the upper
    # end of the classical window 0 < k < -m - ell - 2(alpha + beta) is reported alongside
    bound = -spec.m - spec.ell - 2 * float(spec.alpha + spec.beta)
    rows = []
    for k in range(args.moments + 1):
        try:
            mv = moment_integral(k, spec, quadrature_from(args))
        except DivergentIntegralError as exc:
            raise CliError(EXIT_INVALID, f"moment k={k} outside the integrability window: {exc}") from None
        rows.append({"k": k, "norm": mv.norm(), "scalar": mv.scalar_part(), "vanishing_expected": k < spec.ell})
    report = {"ell": spec.ell, "m": spec.m, "alpha": str(spec.alpha), "beta": str(spec.beta), "window_upper": bound, "moments": rows}
    write_text(args.output, render_json(report) + "\n")
    return EXIT_OK


def _rho_grid(args):
    if not 0 < args.rho_min <= args.rho_max or args.count < 1:
        raise CliError(EXIT_INVALID, "need 0 < rho-min <= rho-max and count >= 1")
    if args.log_spacing:
        return np.geomspace(args.rho_min, args.rho_max, args.count)
    return np.linspace(args.rho_min, args.rho_max, args.count)


def cmd_spectrum(args) -> int:
    spec = wavelet_from(args)
    quad = quadrature_from(args)
    rhos = _rho_grid(args)
    adm = admissibility(spec, quad) if args.admissibility else None
    samples = spectrum_table(spec, rhos, quad, workers=thread_count())
    if args.format == "json":
        payload = {
            "rho": [s.rho for s in samples],
            "h": [s.h for s in samples],
            "hat_abs": [s.magnitude for s in samples],
        }
        if adm is not None:
            payload["admissibility"] = adm
        write_text(args.output, render_json(payload) + "\n")
    else:
        lines = ["rho,hat_abs"] + [f"{fmt(s.rho)},{fmt(s.magnitude)}" for s in samples]
        write_text(args.output, "\n".join(lines) + "\n")
        if adm is not None:
            sys.stderr.write(f"admissibility {fmt(adm)}\n")
    return EXIT_OK


def cmd_admissibility(args) -> int:
    spec = wavelet_from(args)
    value = admissibility(spec, quadrature_from(args))
    report = {"ell": spec.ell, "m": spec.m, "alpha": str(spec.alpha), "beta": str(spec.beta), "admissibility": value}
    write_text(args.output, render_json(report) + "\n")
    return EXIT_OK


def _load_signal(args) -> GridSignal:
    if args.input is None:
        extents = (args.grid,) * args.m
        if args.m == 2:
            return gaussian_bump(extents, args.spacing, args.gaussian_width)
        raise CliError(EXIT_INVALID, "the built-in Gaussian test signal is two-dimensional; pass --input for m = 3")
    try:
        return GridSignal.load(args.input)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_INVALID, f"cannot read signal {args.input}: {exc}") from None


def cmd_cwt(args) -> int:
    spec = wavelet_from(args)
    signal = _load_signal(args)
    if signal.m != spec.m:
        raise CliError(EXIT_INVALID, f"signal is {signal.m}-dimensional but -m is {spec.m}")
    if args.scales < 1:
        raise CliError(EXIT_INVALID, "--scales must be at least 1")
    scales, step = geometric_scales(args.a_min, args.a_max, args.scales)
    check_scales(signal, scales)
    field = cwt_forward(signal, spec, scales, step)
    field.save(args.output, spec)
    if args.signal_out:
        signal.save(args.signal_out)
    norm = math.sqrt(max(field.inner(field), 0.0))
    sys.stdout.write(f"scales {len(scales)} coefficient_norm {fmt(norm)}\n")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    try:
        field = CwtField.load(args.input)
        spec = saved_wavelet(args.input)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_INVALID, f"cannot read coefficient field {args.input}: {exc}") from None
    adm = admissibility(spec, quadrature_from(args))
    out = reconstruct(field, spec, adm)
    out.save(args.output)
    if args.reference:
        try:
            ref = GridSignal.load(args.reference)
        except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
            raise CliError(EXIT_INVALID, f"cannot read reference {args.reference}: {exc}") from None
        try:
            diff = (out - ref).norm()
        except ValueError as exc:
            raise CliError(EXIT_INVALID, f"reference does not match the field grid: {exc}") from None
        ref_norm = ref.norm()
        error = diff / ref_norm if ref_norm > 0 else diff
        sys.stdout.write(f"relative_l2_error {fmt(error)}\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    names = args.only or None
    for name in names or []:
        if name not in verify_mod.CHECKS:
            raise CliError(EXIT_INVALID, f"unknown check {name!r}; expected one of {', '.join(verify_mod.CHECKS)}")
    try:
        overrides = verify_mod.tolerance_overrides()
    except ValueError as exc:
        raise CliError(EXIT_INVALID, str(exc)) from None
    results = verify_mod.run_checks(names, overrides, progress=lambda r: sys.stderr.write(r.summary() + "\n"))
    report = {name: res.as_dict() for name, res in results.items()}
    write_text(args.output, render_json(report) + "\n")
    return EXIT_OK if all(r.passed for r in results.values()) else EXIT_VERIFY_FAILED


# parser -----------------------------------------------------------------------------------


def _wavelet_options(p, ell=1, alpha="0", beta="-6"):
    p.add_argument("-l", "--ell", type=int, default=ell, help="wavelet order")
    p.add_argument("-m", type=int, default=2, help="dimension")
    p.add_argument("--alpha", default=alpha, help="weight parameter; integers, decimals or p/q stay exact")
    p.add_argument("--beta", default=beta)


def _quad_options(p):
    p.add_argument("--epsabs", type=float, default=1e-14)
    p.add_argument("--epsrel", type=float, default=1e-12)
    p.add_argument("--nodes-per-unit", type=int, default=8)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cjw", description="Clifford-Jacobi polynomials and monogenic wavelets")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="JSON file of option defaults")
        p.add_argument("-o", "--output", default="-", help="output path ('-' for stdout)")
        p.set_defaults(func=func)
        return p

    p = add("gen-poly", cmd_gen_poly, "coefficient tables for a polynomial family")
    p.add_argument("--family", default="jacobi2", help=f"one of {', '.join(FAMILIES)}")
    p.add_argument("-l", "--ell", type=int, default=3, help="highest order L")
    p.add_argument("-m", type=int, default=2)
    p.add_argument("--alpha", default="1")
    p.add_argument("--beta", default="-6")

    p = add("eval-wavelet", cmd_eval_wavelet, "radial samples psi(x) = scalar(r) + x vector_radial(r), or moments")
    _wavelet_options(p)
    _quad_options(p)
    p.add_argument("--r-min", type=float, default=0.0)
    p.add_argument("--r-max", type=float, default=4.0)
    p.add_argument("--count", type=int, default=81)
    p.add_argument("--moments", type=int, help="report moments of x^k psi for k = 0..K instead")

    p = add("spectrum", cmd_spectrum, "radial Fourier magnitude table")
    _wavelet_options(p)
    _quad_options(p)
    p.add_argument("--rho-min", type=float, default=0.01)
    p.add_argument("--rho-max", type=float, default=20.0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--log-spacing", action="store_true")
    p.add_argument("--admissibility", action="store_true", help="also compute the admissibility constant")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = add("admissibility", cmd_admissibility, "admissibility constant")
    _wavelet_options(p)
    _quad_options(p)

    p = add("cwt", cmd_cwt, "wavelet coefficients of a grid signal")
    _wavelet_options(p)
    p.add_argument("--input", help="signal CSV with a JSON sidecar; default is a Gaussian test bump")
    p.add_argument("--grid", type=int, default=64, help="points per axis of the Gaussian test bump")
    p.add_argument("--spacing", type=float, default=0.0625)
    p.add_argument("--gaussian-width", type=float, default=0.25)
    p.add_argument("--a-min", type=float, default=0.25)
    p.add_argument("--a-max", type=float, default=4.0)
    p.add_argument("--scales", type=int, default=16)
    p.add_argument("--signal-out", help="also write the analysed signal here (CSV + sidecar)")

    p = add("reconstruct", cmd_reconstruct, "invert a coefficient field")
    p.add_argument("--input", required=True, help="coefficient file (.npy) written by cwt")
    p.add_argument("--reference", help="original signal; prints the relative L2 error")
    _quad_options(p)

    p = add("verify", cmd_verify, "run the acceptance checks and write a JSON report")
    p.add_argument("--only", action="append", help="run only this check (repeatable)")
    return parser


def _apply_config(parser, argv):
    """Reparse with config-file values installed as subparser defaults."""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        config = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_INVALID, f"cannot read config {args.config}: {exc}") from None
    if not isinstance(config, dict):
        raise CliError(EXIT_INVALID, "config file must hold a JSON object")
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in subparser._actions}
    unknown = sorted(set(config) - known - {"command"})
    if unknown:
        raise CliError(EXIT_INVALID, f"unknown config keys for {args.command}: {unknown}")
    config.pop("command", None)
    subparser.set_defaults(**config)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code not in (0, None) else EXIT_OK
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except ScaleRangeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_SCALES
    except (DivergentIntegralError, QuadratureError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DIVERGENT
    except (ValueError, TypeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
