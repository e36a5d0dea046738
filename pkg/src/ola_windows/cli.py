"""Command-line front end.

Exit status: 0 success, 2 invalid arguments, 3 solver or calibration
failure (any partial trace is still written), 4 I/O failure.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .catalog import DEFAULT_ALPHA, FAMILIES, build_window, check_params, parse_spec
from .exceptions import CalibrationError, InvalidArgumentError, SolverError
from .io import read_window, write_report
from .kernel import build_toeplitz, concentration_ratio
from .ola import verify_reconstruction
from .optimizer import SolveOptions
from .spectrum import magnitude_response, match_main_lobe_alpha
from .windows import validate_princen_bradley

log = logging.getLogger("ola_windows")

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_IO = 0, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _add_window_args(p, family=True):
    if family:
        p.add_argument("--family", choices=FAMILIES, default="half-sine")
    p.add_argument("--length", "-L", type=int, default=128)
    p.add_argument("--overlap", "-T", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None,
                   help="shape parameter of the window family (Kaiser alpha or kernel alpha of the design)")


def _add_solver_args(p):
    p.add_argument("--grad-tol", type=float, default=1e-10)
    p.add_argument("--max-iters", type=int, default=10_000)
    p.add_argument("--multistart", type=int, default=1)
    p.add_argument("--no-symmetry", action="store_true", help="let the design break left/right symmetry")


def _add_output_args(p):
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", default=None)


def build_parser():
    parser = _Parser(prog="ola-windows", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write a window file")
    _add_window_args(p)
    _add_solver_args(p)
    _add_output_args(p)
    p.add_argument("--trace", default=None, help="also write the solver trace (JSON) here")

    p = sub.add_parser("analyze", help="spectrum and concentration of one window")
    _add_window_args(p)
    _add_solver_args(p)
    _add_output_args(p)
    p.add_argument("--input", default=None, help="window file instead of --family")
    p.add_argument("--kernel-alpha", type=float, default=2.75)
    p.add_argument("--pad-factor", type=int, default=16)

    p = sub.add_parser("compare", help="concentration and lobe table for several windows")
    p.add_argument("specs", nargs="+", metavar="FAMILY[:ALPHA]")
    _add_window_args(p, family=False)
    _add_solver_args(p)
    _add_output_args(p)
    p.add_argument("--kernel-alpha", type=float, required=True)
    p.add_argument("--pad-factor", type=int, default=16)
    p.add_argument("--data-dir", default=None,
                   help="also write each window and its spectrum here (figure data)")

    p = sub.add_parser("calibrate", help="match a family's main lobe to a reference window")
    p.add_argument("--family", choices=("kbd", "ola-dpss"), required=True)
    p.add_argument("--reference", default="half-sine", metavar="FAMILY[:ALPHA]")
    _add_window_args(p, family=False)
    _add_solver_args(p)
    _add_output_args(p)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--pad-factor", type=int, default=16)

    p = sub.add_parser("ola-verify", help="round-trip a signal through overlap-add")
    _add_window_args(p)
    _add_solver_args(p)
    _add_output_args(p)
    p.add_argument("--signal", default=None, help="text file with one sample per line")
    p.add_argument("--signal-length", type=int, default=None, help="default 10 L")
    p.add_argument("--seed", type=int, default=0,
                   help="seed of the PCG64 generator drawing the standard-normal test signal")

    p = sub.add_parser("sweep", help="design and analyse over a range of alpha")
    _add_window_args(p)
    _add_solver_args(p)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--alpha-start", type=float, required=True)
    p.add_argument("--alpha-stop", type=float, required=True)
    p.add_argument("--alpha-step", type=float, required=True)
    p.add_argument("--kernel-alpha", type=float, default=None,
                   help="fixed kernel alpha; defaults to each point's alpha")
    p.add_argument("--pad-factor", type=int, default=16)
    p.add_argument("--jobs", type=int, default=1)
    return parser


def _solve_options(args):
    return SolveOptions(grad_tol=args.grad_tol, max_iters=args.max_iters,
                        multistart=args.multistart, enforce_symmetry=not args.no_symmetry)


def _emit(report, out, fmt):
    text = write_report(report, out, fmt)
    if out is None or out == "-":
        sys.stdout.write(text)


def _spectrum_summary(spec, n=5):
    return {
        "main_lobe_width": spec.main_lobe_width,
        "side_lobes_db": [lvl for _, lvl in spec.side_lobes[:n]],
    }


def cmd_generate(args):
    check_params(args.family, args.length, args.overlap, args.alpha)
    w, trace = build_window(args.family, args.length, args.alpha, args.overlap, _solve_options(args))
    _emit(w, args.out, args.format)
    if trace is not None and args.trace:
        write_report(trace, args.trace, "json")
    if trace is not None and not trace.converged:
        log.error("solver stopped after %d iterations without converging", trace.iterations)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_analyze(args):
    if args.input:
        w = read_window(args.input)
    else:
        check_params(args.family, args.length, args.overlap, args.alpha)
        w, _ = build_window(args.family, args.length, args.alpha, args.overlap, _solve_options(args))
    kernel = build_toeplitz(w.length, args.kernel_alpha)
    spec = magnitude_response(w, args.pad_factor)
    conc = concentration_ratio(w, kernel)
    if args.out is None:
        _emit({"concentration": conc.to_dict(), "spectrum": spec.to_dict(include_curve=False)}, None, "json")
        return EXIT_OK
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_report(spec, out / f"spectrum.{args.format}", args.format)
    write_report(conc, out / f"concentration.{args.format}", args.format)
    return EXIT_OK


def compare_windows(specs, L, kernel_alpha, overlap=None, pad_factor=16, opts=None):
    """Concentration and lobe metrics of several windows under one kernel.

    Returns ``(table, windows, spectra)`` where ``table`` is the JSON-ready
    comparison record.
    """
    parsed = [parse_spec(s) if isinstance(s, str) else s for s in specs]
    for family, alpha in parsed:
        check_params(family, L, overlap, alpha)
    kernel = build_toeplitz(L, kernel_alpha)
    rows, windows, spectra = [], [], []
    for family, alpha in parsed:
        w, trace = build_window(family, L, alpha, overlap, opts)
        if trace is not None and not trace.converged:
            raise SolverError(f"{w.label}: solver did not converge", residual=trace.final_grad_norm)
        conc = concentration_ratio(w, kernel)
        spec = magnitude_response(w, pad_factor)
        rows.append({
            "label": w.label,
            "family": family,
            "alpha": None if family == "half-sine" else (DEFAULT_ALPHA[family] if alpha is None else alpha),
            "tau_linear": conc.tau_linear,
            "tau_db": conc.tau_db,
            "tau_db_normalized": conc.tau_db_normalized,
            "pb_residual": validate_princen_bradley(w).max_abs,
            **_spectrum_summary(spec),
        })
        windows.append(w)
        spectra.append(spec)
    table = {
        "length": L,
        "overlap": L // 2 if overlap is None else overlap,
        "kernel_alpha": float(kernel_alpha),
        "pad_factor": pad_factor,
        "windows": rows,
    }
    return table, windows, spectra


def _csv_rows(table):
    rows = []
    for r in table["windows"]:
        row = {k: r[k] for k in ("label", "family", "tau_linear", "tau_db", "tau_db_normalized",
                                  "pb_residual", "main_lobe_width")}
        for i in range(5):
            lobes = r["side_lobes_db"]
            row[f"side_lobe_{i + 1}_db"] = lobes[i] if i < len(lobes) else ""
        rows.append(row)
    return {"rows": rows}


def cmd_compare(args):
    table, windows, spectra = compare_windows(args.specs, args.length, args.kernel_alpha, args.overlap,
                                              args.pad_factor, _solve_options(args))
    _emit(table if args.format == "json" else _csv_rows(table), args.out, args.format)
    if args.data_dir:
        d = Path(args.data_dir)
        d.mkdir(parents=True, exist_ok=True)
        for i, (w, s) in enumerate(zip(windows, spectra)):
            stem = f"{i:02d}_{table['windows'][i]['family']}"
            write_report(w, d / f"{stem}_window.csv", "csv")
            write_report(s, d / f"{stem}_spectrum.csv", "csv")
    return EXIT_OK


def cmd_calibrate(args):
    ref_family, ref_alpha = parse_spec(args.reference)
    check_params(ref_family, args.length, args.overlap, ref_alpha)
    check_params(args.family, args.length, args.overlap, None)
    opts = _solve_options(args)
    reference, _ = build_window(ref_family, args.length, ref_alpha, args.overlap, opts)
    alpha = match_main_lobe_alpha(reference, args.family, args.length, args.tol, args.overlap, opts,
                                  pad_factor=args.pad_factor)
    _emit({"family": args.family, "reference": reference.label, "length": args.length,
           "overlap": reference.overlap, "alpha": alpha, "tol": args.tol}, args.out, args.format)
    return EXIT_OK


def cmd_ola_verify(args):
    check_params(args.family, args.length, args.overlap, args.alpha)
    w, _ = build_window(args.family, args.length, args.alpha, args.overlap, _solve_options(args))
    if args.signal:
        try:
            x = np.loadtxt(args.signal, dtype=float, ndmin=1)
        except ValueError as exc:
            raise InvalidArgumentError(f"{args.signal}: {exc}") from None
    else:
        n = args.signal_length or 10 * args.length
        x = np.random.Generator(np.random.PCG64(args.seed)).standard_normal(n)
    report = verify_reconstruction(x, w)
    _emit(report, args.out, args.format)
    return EXIT_OK


def _sweep_point(job):
    family, L, T, alpha, kernel_alpha, pad, opts = job
    w, trace = build_window(family, L, alpha, T, opts)
    kernel = build_toeplitz(L, kernel_alpha if kernel_alpha is not None else alpha)
    spec = magnitude_response(w, pad)
    rec = {
        "alpha": alpha,
        "window": w.to_dict(),
        "concentration": concentration_ratio(w, kernel).to_dict(),
        "spectrum": _spectrum_summary(spec),
        "pb_residual": validate_princen_bradley(w).max_abs,
    }
    if trace is not None:
        rec["trace"] = trace.to_dict()
    return rec


def cmd_sweep(args):
    if args.family == "half-sine":
        raise InvalidArgumentError("half-sine has no alpha to sweep")
    if args.alpha_step <= 0 or args.alpha_stop < args.alpha_start:
        raise InvalidArgumentError("need alpha-step > 0 and alpha-stop >= alpha-start")
    n = int(np.floor((args.alpha_stop - args.alpha_start) / args.alpha_step + 1e-9)) + 1
    alphas = [args.alpha_start + i * args.alpha_step for i in range(n)]
    for a in alphas:
        check_params(args.family, args.length, args.overlap, a)
        build_toeplitz(args.length, args.kernel_alpha if args.kernel_alpha is not None else a)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    opts = _solve_options(args)
    jobs = [(args.family, args.length, args.overlap, a, args.kernel_alpha, args.pad_factor, opts) for a in alphas]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_sweep_point, jobs))
    else:
        records = [_sweep_point(j) for j in jobs]
    status = EXIT_OK
    for i, rec in enumerate(records):
        write_report(rec, out / f"point_{i:03d}.{args.format}", args.format)
        if "trace" in rec and not rec["trace"]["converged"]:
            status = EXIT_SOLVER
    return status


COMMANDS = {
    "generate": cmd_generate,
    "analyze": cmd_analyze,
    "compare": cmd_compare,
    "calibrate": cmd_calibrate,
    "ola-verify": cmd_ola_verify,
    "sweep": cmd_sweep,
}


def _configure_logging():
    level = os.environ.get("OLA_WINDOWS_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None):
    _configure_logging()
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except InvalidArgumentError as exc:
        print(f"ola-windows: invalid argument: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, CalibrationError) as exc:
        print(f"ola-windows: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"ola-windows: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
