"""Command-line interface: every pipeline as a subcommand writing
self-describing CSV/JSON artifacts.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 insufficient data, 4 escalated warnings (--strict).  Outputs embed the
full configuration (defaults included) so any run is reproducible from its
own header; identical seed and config give byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings

import numpy as np

from . import __version__, correlations, ensembles, stats, zeta
from .kernel import KernelParams, kernel_value

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_INSUFFICIENT = 3
EXIT_ESCALATED = 4


def _fmt(x) -> str:
    # repr round-trips floats exactly and prints >= 12 significant digits
    return repr(float(x))


def _meta_lines(command: str, config: dict) -> list[str]:
    lines = [f"fermicorr {__version__}", f"command: {command}"]
    lines += [f"{k} = {v}" for k, v in config.items()]
    return lines


def _write_table(path: str, command: str, config: dict, columns: list[str], rows) -> None:
    fmt = config.get("format", "csv")
    if fmt == "json":
        doc = {"tool": f"fermicorr {__version__}", "command": command, "config": config,
               "columns": columns, "rows": [[float(v) for v in row] for row in rows]}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        out = [f"# {line}" for line in _meta_lines(command, config)]
        out.append(",".join(columns))
        out += [",".join(_fmt(v) for v in row) for row in rows]
        text = "\n".join(out) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_report(path: str, command: str, config: dict, body: dict) -> None:
    doc = {"tool": f"fermicorr {__version__}", "command": command, "config": config}
    doc.update(body)
    text = json.dumps(doc, indent=2) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _auto_bin_width(n_points: int) -> float:
    # variance/bias defaults: fine bins for >= 1e4 points, coarse otherwise
    return 0.05 if n_points >= 10_000 else 0.25


def cmd_kernel(args) -> int:
    params = KernelParams(nu=args.nu, k_f=args.kf)
    if args.n < 1 or args.rmax < args.rmin or args.rmin < 0.0:
        raise ValueError("need n >= 1 and 0 <= rmin <= rmax")
    config = {"nu": args.nu, "kf": args.kf, "rmin": args.rmin, "rmax": args.rmax,
              "n": args.n, "format": args.format}
    r = np.linspace(args.rmin, args.rmax, args.n)
    k = kernel_value(params, r)
    _write_table(args.output, "kernel", config, ["r", "K"], zip(r, np.atleast_1d(k)))
    return EXIT_OK


def cmd_paircorr_theory(args) -> int:
    if args.nu < 0.5:
        raise ValueError("nu must be >= 1/2")
    if args.n < 1 or args.wmax <= 0.0:
        raise ValueError("need n >= 1 and wmax > 0")
    config = {"nu": args.nu, "wmax": args.wmax, "n": args.n, "format": args.format,
              "separation": "unit-rescaled (k_F r = pi w)"}
    w = np.linspace(0.0, args.wmax, args.n)
    r2 = correlations.pair_correlation_theory(args.nu, w)
    _write_table(args.output, "paircorr-theory", config, ["w", "R2"], zip(w, np.atleast_1d(r2)))
    return EXIT_OK


def cmd_gue(args) -> int:
    cfg = ensembles.GueConfig(matrix_size=args.n, sample_count=args.samples, seed=args.seed)
    if not 0.0 < args.bulk_fraction <= 1.0:
        raise ValueError("bulk-fraction must be in (0, 1]")
    spectra = ensembles.sample_gue_spectrum(cfg, threads=args.threads)
    seqs = [ensembles.unfold_semicircle(s, args.bulk_fraction) for s in spectra]
    total_points = sum(len(s) for s in seqs)
    bin_width = args.bin_width if args.bin_width is not None else _auto_bin_width(total_points)
    config = {"n": args.n, "samples": args.samples, "seed": args.seed,
              "bulk_fraction": args.bulk_fraction, "wmax": args.wmax,
              "bin_width": bin_width, "w_low": args.w_low, "threads": args.threads,
              "format": "csv"}
    est = stats.estimate_pair_correlation_pooled(seqs, w_max=args.wmax, bin_width=bin_width)
    theory = correlations.pair_correlation_theory(0.5, est.bin_centers)
    dist = stats.curve_distance(est, theory, w_low=args.w_low)
    rows = zip(est.bin_centers, est.values, theory, est.pair_counts)
    _write_table(f"{args.output}_estimate.csv", "gue", config,
                 ["w", "R2_estimate", "R2_theory_nu_half", "pair_count"], rows)
    _write_report(f"{args.output}_report.json", "gue", config,
                  {"l_inf": dist["l_inf"], "l2": dist["l2"],
                   "n_points_used": est.n_points_used, "m_eff": est.m_eff})
    return EXIT_OK


def cmd_zeta(args) -> int:
    escalate = False
    if args.zeros_file:
        zero_seq = zeta.load_zeros_file(args.zeros_file)
        if len(zero_seq) == 0:
            raise stats.InsufficientDataError("zero table is empty")
        zeros_source = {"zeros_file": args.zeros_file}
    else:
        if not 1.0 <= args.tmin < args.tmax <= zeta.T_MAX:
            raise ValueError(f"need 1 <= tmin < tmax <= {zeta.T_MAX}")
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            zero_seq = zeta.find_zeros(args.tmin, args.tmax, grid_step=args.grid_step,
                                       threads=args.threads)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
            escalate = True
        zeros_source = {"tmin": args.tmin, "tmax": args.tmax, "grid_step": args.grid_step}
    unfold = zeta.unfold_by_counting if args.unfolding == "counting" else zeta.unfold_zeros
    seq = unfold(zero_seq)
    bin_width = args.bin_width if args.bin_width is not None else _auto_bin_width(len(seq))
    config = {**zeros_source, "unfolding": args.unfolding, "wmax": args.wmax,
              "bin_width": bin_width, "w_low": args.w_low, "threads": args.threads,
              "strict": args.strict, "format": "csv"}
    if not args.zeros_file:
        # persist the computed zeros before estimation so they survive an
        # insufficient-data exit; bare table, matching published zero tables
        zeta.write_zeros_file(f"{args.output}_zeros.txt", zero_seq)
    est = stats.estimate_pair_correlation(seq, w_max=args.wmax, bin_width=bin_width)
    theory = correlations.pair_correlation_theory(0.5, est.bin_centers)
    dist = stats.curve_distance(est, theory, w_low=args.w_low)
    rows = zip(est.bin_centers, est.values, theory, est.pair_counts)
    _write_table(f"{args.output}_estimate.csv", "zeta", config,
                 ["w", "R2_estimate", "R2_theory_nu_half", "pair_count"], rows)
    _write_report(f"{args.output}_report.json", "zeta", config,
                  {"n_zeros": len(zero_seq), "l_inf": dist["l_inf"], "l2": dist["l2"],
                   "n_points_used": est.n_points_used, "m_eff": est.m_eff,
                   "mean_spacing": seq.mean_spacing})
    if escalate and args.strict:
        return EXIT_ESCALATED
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import SUITES, run_suites

    names = list(SUITES) if args.suite == "all" else [args.suite]
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite {unknown[0]!r}; choose from {list(SUITES) + ['all']}")
    ok, results = run_suites(names, threads=args.threads)
    for r in results:
        status = "PASS" if r["passed"] else "FAIL"
        detail = f"  ({r['detail']})" if r["detail"] else ""
        print(f"{status} {r['suite']}.{r['check']}{detail}")
    if args.report:
        _write_report(args.report, "verify", {"suite": args.suite},
                      {"passed": ok, "checks": results})
    print(f"{'OK' if ok else 'FAILED'}: {sum(r['passed'] for r in results)}/{len(results)} checks")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fermicorr",
                                 description="Fermi-gas correlation kernels, GUE spectra and "
                                             "Riemann zeros: determinantal statistics toolkit")
    ap.add_argument("--version", action="version", version=f"fermicorr {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel", help="tabulate the correlation kernel K(r; nu)")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--kf", type=float, default=math.pi)
    p.add_argument("--rmin", type=float, default=0.0)
    p.add_argument("--rmax", type=float, default=3.0)
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("paircorr-theory", help="tabulate the pair-correlation curve R2(w; nu)")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--wmax", type=float, default=3.0)
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_paircorr_theory)

    p = sub.add_parser("gue", help="GUE spectra -> unfold -> pair correlation vs nu=1/2 theory")
    p.add_argument("--n", type=int, default=200, help="matrix size")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--bulk-fraction", type=float, default=0.5)
    p.add_argument("--wmax", type=float, default=3.0)
    p.add_argument("--bin-width", type=float, default=None,
                   help="default 0.05 for >= 1e4 points else 0.25")
    p.add_argument("--w-low", type=float, default=0.25)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--output", "-o", default="gue")
    p.set_defaults(func=cmd_gue)

    p = sub.add_parser("zeta", help="compute/load zeta zeros -> unfold -> pair correlation")
    p.add_argument("--tmin", type=float, default=10.0)
    p.add_argument("--tmax", type=float, default=500.0)
    p.add_argument("--grid-step", type=float, default=0.05)
    p.add_argument("--zeros-file", default=None)
    p.add_argument("--unfolding", choices=("counting", "asymptotic"), default="counting",
                   help="counting: theta(t)/pi+1 (unit density); asymptotic: (t/2pi)log(t/2pi)")
    p.add_argument("--wmax", type=float, default=1.5)
    p.add_argument("--bin-width", type=float, default=None)
    p.add_argument("--w-low", type=float, default=0.25)
    p.add_argument("--strict", action="store_true",
                   help="escalate counting-consistency warnings to exit 4")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--output", "-o", default="zeta")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("verify", help="run module invariant suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--report", default=None, help="optional JSON report path")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except stats.InsufficientDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
