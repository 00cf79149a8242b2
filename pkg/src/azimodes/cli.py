"""Command-line entry point: ``azimodes {modes,scan,intensity,verify,plot}``."""

import argparse
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import __version__
from .coupling import normalize_variant
from .decomp import check_grid, default_grid, schmidt_number
from .output import CSVFormatError, RunMetadata, fmt, write_columns
from .physics import ExperimentConfig, ValidityError, check_frequency, gain_of_frequency, load_config
from .scan import THZ, decompose_at, mode_gallery, scan_k
from .scatter import bogolyubov_gains, effective_mode_number, intensity

EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_VALIDITY = 3


class UsageError(Exception):
    """Bad flag value; the message names the flag."""


def _positive_int(flag):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects an integer, got {text!r}") from None
        if value <= 0:
            raise argparse.ArgumentTypeError(f"{flag} must be positive, got {value}")
        return value

    return parse


def _float(flag):
    def parse(text):
        try:
            return float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects a number, got {text!r}") from None

    return parse


def _gain_list(text):
    try:
        gains = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--gains expects a comma-separated list of numbers, got {text!r}") from None
    if not gains or any(g <= 0 for g in gains):
        raise argparse.ArgumentTypeError("--gains values must be positive")
    return gains


def build_parser():
    parser = argparse.ArgumentParser(
        prog="azimodes",
        description="Azimuthal eigenmodes, intensities and mode counts of optical-terahertz PDC.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--chi", choices=("1", "2"), default="1", help="susceptibility variant")
    common.add_argument("--config", help="JSON or key=value configuration file")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--plot", action="store_true", help="also render an SVG figure")

    single = argparse.ArgumentParser(add_help=False)
    single.add_argument("--freq", type=_float("--freq"), required=True, help="idler frequency, THz")
    single.add_argument("--gain", type=_float("--gain"), help="gainLG (default: from config)")
    single.add_argument("--modes", type=_positive_int("--modes"), default=8, help="number of modes to emit")
    single.add_argument("--grid", type=_positive_int("--grid"), help="azimuthal grid size N")

    sub.add_parser("modes", parents=[common, single], help="eigenvalues and shifted mode curves")

    p = sub.add_parser("intensity", parents=[common, single], help="angular intensity profile")
    p.add_argument("--side", choices=("idler", "signal", "both"), default="both")

    p = sub.add_parser("scan", parents=[common], help="effective mode number over frequency and gain")
    p.add_argument("--freq-min", type=_float("--freq-min"), default=0.01, help="THz")
    p.add_argument("--freq-max", type=_float("--freq-max"), default=2.0, help="THz")
    p.add_argument("--steps", type=_positive_int("--steps"), default=50)
    p.add_argument("--gains", type=_gain_list, help="comma-separated gain_ref values")
    p.add_argument("--gain-model", choices=("fixed", "pump-scaled"), help="gain convention")
    p.add_argument("--gain-ref-freq", type=_float("--gain-ref-freq"), help="THz, pump-scaled reference")

    p = sub.add_parser("verify", help="run the oracle suite")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--json", help="write the JSON report here")
    p.add_argument("--inject-fault", type=float, default=0.0, help=argparse.SUPPRESS)

    p = sub.add_parser("plot", help="render a CSV written by another command as SVG")
    p.add_argument("--in", dest="inp", required=True, help="input CSV")
    p.add_argument("--kind", choices=("modes", "kscan", "intensity"), required=True)
    p.add_argument("--out", required=True, help="output SVG path")
    return parser


def _config(args):
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    return cfg


def _frequency(args):
    f_i = args.freq * THZ
    if not f_i > 0:
        raise UsageError(f"--freq must be positive, got {args.freq}")
    check_frequency(f_i)
    return f_i


def _grid(args, n_max):
    N = args.grid or default_grid(n_max)
    try:
        check_grid(N, n_max)
    except ValueError as exc:
        raise UsageError(f"--grid: {exc}") from None
    return N


def _gain(args, f_i, cfg):
    gainLG = args.gain if args.gain is not None else gain_of_frequency(f_i, cfg)
    if gainLG < 0:
        raise UsageError(f"--gain must be nonnegative, got {gainLG}")
    return gainLG


def _finish(meta, out, start):
    meta.wall_time = time.perf_counter() - start
    meta.write(os.path.join(out, "meta.json"))


def cmd_modes(args):
    start = time.perf_counter()
    cfg = _config(args)
    chi = normalize_variant(args.chi)
    f_i = _frequency(args)
    dec = decompose_at(cfg, chi, f_i)
    N = _grid(args, dec.n_max)
    gallery = mode_gallery(cfg, chi, f_i, J=args.modes, N=N)
    J = len(gallery.idler)
    gainLG = _gain(args, f_i, cfg)
    gains = bogolyubov_gains(dec, gainLG)
    os.makedirs(args.out, exist_ok=True)

    files = ["eigenvalues.csv", "modes_idler.csv", "modes_signal.csv", "coefficients.csv"]
    with open(os.path.join(args.out, "eigenvalues.csv"), "w", encoding="utf-8") as fh:
        fh.write("j,R,parity,g\n")
        for j in range(J):
            fh.write(f"{j},{fmt(dec.values[j])},{dec.parity[j]},{fmt(gains.g[j])}\n")
    header = ["phi_rad"] + [f"curve_{j}" for j in range(J)]
    write_columns(os.path.join(args.out, "modes_idler.csv"), header, [gallery.phi, *gallery.idler])
    write_columns(os.path.join(args.out, "modes_signal.csv"), header, [gallery.phi, *gallery.signal])
    dec.to_csv(os.path.join(args.out, "modes_table.csv"), os.path.join(args.out, "coefficients.csv"))
    files.append("modes_table.csv")
    if args.plot:
        from .plotting import plot_mode_curves, save

        fig, _ = plot_mode_curves(
            gallery.phi,
            gallery.idler,
            [f"R={r:+.3g}" for r in gallery.values],
            title=f"{chi}, f = {args.freq:g} THz",
            levels=gallery.values,
        )
        save(fig, os.path.join(args.out, "modes.svg"))
        files.append("modes.svg")

    K = effective_mode_number(gains) if np.any(gains.g != 0) else None
    run = {"f_THz": args.freq, "tau": dec.tau, "n_max": dec.n_max, "grid": N, "gainLG": gainLG,
           "K": K, "schmidt_K": schmidt_number(dec)}
    _finish(RunMetadata("modes", cfg.to_dict(), chi, [run], files), args.out, start)
    print(f"{chi} f={args.freq:g} THz tau={dec.tau:.6g} n_max={dec.n_max}: wrote {len(files)} files to {args.out}")
    return 0


def cmd_intensity(args):
    start = time.perf_counter()
    cfg = _config(args)
    chi = normalize_variant(args.chi)
    f_i = _frequency(args)
    dec = decompose_at(cfg, chi, f_i)
    N = _grid(args, dec.n_max)
    gainLG = _gain(args, f_i, cfg)
    gains = bogolyubov_gains(dec, gainLG)
    J = min(args.modes, len(dec))
    os.makedirs(args.out, exist_ok=True)
    sides = ("idler", "signal") if args.side == "both" else (args.side,)
    files = []
    for side in sides:
        prof = intensity(dec, gains, side, N, per_mode=J)
        name = f"intensity_{side}.csv"
        header = ["phi_rad", "total"] + [f"mode_{j}" for j in range(J)]
        write_columns(os.path.join(args.out, name), header, [prof.phi, prof.total, *prof.per_mode])
        files.append(name)
        if args.plot:
            from .plotting import plot_intensity, save

            fig, _ = plot_intensity(prof.phi, prof.total, prof.per_mode)
            save(fig, os.path.join(args.out, f"intensity_{side}.svg"))
            files.append(f"intensity_{side}.svg")
    run = {"f_THz": args.freq, "tau": dec.tau, "n_max": dec.n_max, "grid": N, "gainLG": gainLG,
           "photons": float(gains.occupations.sum())}
    _finish(RunMetadata("intensity", cfg.to_dict(), chi, [run], files), args.out, start)
    print(f"{chi} f={args.freq:g} THz gainLG={gainLG:g}: wrote {', '.join(files)}")
    return 0


def cmd_scan(args):
    start = time.perf_counter()
    cfg = _config(args)
    chi = normalize_variant(args.chi)
    overrides = {}
    if args.gain_model:
        overrides["gain_model"] = args.gain_model.replace("-", "_")
    if args.gain_ref_freq is not None:
        if args.gain_ref_freq <= 0:
            raise UsageError("--gain-ref-freq must be positive")
        overrides["gain_ref_frequency"] = args.gain_ref_freq * THZ
    cfg = replace(cfg, **overrides)
    if not 0 < args.freq_min <= args.freq_max:
        raise UsageError(f"--freq-min/--freq-max must satisfy 0 < min <= max, got {args.freq_min}, {args.freq_max}")
    check_frequency(args.freq_max * THZ)
    freqs = np.linspace(args.freq_min, args.freq_max, args.steps) * THZ
    gains = args.gains or [cfg.gain_ref]
    result = scan_k(cfg, chi, freqs, gains)
    os.makedirs(args.out, exist_ok=True)
    result.to_csv(os.path.join(args.out, "k_scan.csv"))
    files = ["k_scan.csv"]
    if args.plot:
        from .plotting import plot_kscan, save

        fig, _ = plot_kscan(result.column("f_THz"), result.column("K"), result.column("gain_ref"),
                            title=f"{chi}, {cfg.gain_model} gain")
        save(fig, os.path.join(args.out, "k_scan.svg"))
        files.append("k_scan.svg")
    runs = [{"f_THz": r.f_THz, "tau": r.tau, "n_max": r.n_max} for r in result.select(gains[0])]
    _finish(RunMetadata("scan", cfg.to_dict(), chi, runs, files), args.out, start)
    print(f"{chi}: {len(result.rows)} scan rows written to {os.path.join(args.out, 'k_scan.csv')}")
    return 0


def cmd_verify(args):
    from .verify import report_json, report_text, timed_run

    checks, elapsed = timed_run(args.level, args.inject_fault)
    print(report_text(checks))
    print(f"elapsed {elapsed:.1f} s")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(report_json(checks, args.level, elapsed) + "\n")
    return 0 if all(c.passed for c in checks) else EXIT_VERIFY_FAILED


def cmd_plot(args):
    from .plotting import render_csv

    render_csv(args.inp, args.kind, args.out)
    print(f"wrote {args.out}")
    return 0


COMMANDS = {
    "modes": cmd_modes,
    "intensity": cmd_intensity,
    "scan": cmd_scan,
    "verify": cmd_verify,
    "plot": cmd_plot,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ValidityError as exc:
        print(f"azimodes {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_VALIDITY
    except (UsageError, CSVFormatError) as exc:
        print(f"azimodes {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"azimodes {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
