"""Command-line front end: ``gaborpr <command> [options]``.

Files chain by default: ``gen`` writes ``signal.json``, ``measure`` reads
it and writes ``measurements.csv``, ``reconstruct`` reads that and writes
``report.json``.

Exit codes
----------
0  every contract on the invoked path holds
1  contract violation (failed check, non-convergence, hypothesis failure)
2  command-line or parameter error
3  guarded exponent overflow
4  missing, unreadable or malformed input file, or unwritable output
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from fractions import Fraction

import numpy as np

from .analysis import (
    Strip,
    counterexample_pair,
    find_zeros,
    hadamard_phase_check,
    zalik_report,
)
from .errors import ExponentOverflowError, GaborPRError
from .retrieval import ReconstructionConfig, loss, reconstruct
from .sampling import (
    MagnitudeSamples,
    MeasurementGrid,
    bandlimit_diagnostic,
    choose_truncation,
    rational_bandwidth,
    sample_magnitudes,
    shannon_interpolate,
)
from .signal_model import BandlimitedSignal, phase_align, random_signal, zero_signal
from .transforms import (
    bargmann_derivative,
    bargmann_fourier_symmetry_residual,
    bargmann_relation_residual,
    bargmann_transform,
    gabor_quadrature_oracle,
    gabor_transform,
)

EXIT_OK = 0
EXIT_CONTRACT = 1
EXIT_USAGE = 2
EXIT_OVERFLOW = 3
EXIT_FILE = 4

CSV_VERSION = "gaborpr-measurements v1"


class FileFormatError(Exception):
    """Input file is missing, unreadable or malformed."""


# -- numeric parsing -------------------------------------------------------

def _real(text: str) -> float:
    """Float or exact fraction such as ``1/3``."""
    try:
        value = float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return value


def _complex(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return value


# -- file I/O --------------------------------------------------------------

def _write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".gaborpr-")
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise FileFormatError(f"cannot write {path}: {exc}") from exc


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc


def read_signal(path: str) -> BandlimitedSignal:
    try:
        return BandlimitedSignal.loads(_read_text(path))
    except FileFormatError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise FileFormatError(f"malformed signal file {path}: {exc}") from exc


def _dump_json(data) -> str:
    return json.dumps(data, indent=1) + "\n"


def format_measurements(samples: MagnitudeSamples) -> str:
    """CSV text: versioned header, then ``n,x,omega,value`` sorted by (omega, n)."""
    grid = samples.grid
    B = rational_bandwidth(grid.bandwidth)
    K = "" if samples.K is None else str(samples.K)
    header = (f"# {CSV_VERSION} B={B} step={grid.step} K={K} N={grid.N} "
              f"omega0={grid.omegas[0]!r} omega1={grid.omegas[1]!r}")
    lines = [header, "n,x,omega,value"]
    x = grid.points
    for j, w in enumerate(grid.omegas):
        for i, n in enumerate(grid.indices):
            lines.append(f"{n},{float(x[i])!r},{w!r},{float(samples.values[j, i])!r}")
    return "\n".join(lines) + "\n"


def parse_measurements(text: str) -> MagnitudeSamples:
    """Inverse of :func:`format_measurements`; validates the lattice."""
    lines = text.splitlines()
    if len(lines) < 2 or not lines[0].startswith("# " + CSV_VERSION):
        raise ValueError("missing or unsupported header line")
    meta = dict(tok.split("=", 1) for tok in lines[0][len("# " + CSV_VERSION):].split())
    B = float(Fraction(meta["B"]))
    grid = MeasurementGrid(B, (float(meta["omega0"]), float(meta["omega1"])), int(meta["N"]))
    if Fraction(meta["step"]) != grid.step:
        raise ValueError(f"step {meta['step']} does not match B={meta['B']}")
    K = int(meta["K"]) if meta.get("K") else None
    if lines[1].strip() != "n,x,omega,value":
        raise ValueError("missing column header")
    rows = [ln.split(",") for ln in lines[2:] if ln.strip()]
    size = 2 * grid.N + 1
    if len(rows) != 2 * size:
        raise ValueError(f"expected {2 * size} rows, found {len(rows)}")
    values = np.empty((2, size))
    x = grid.points
    for r, row in enumerate(rows):
        j, i = divmod(r, size)
        n, xv, w, v = int(row[0]), float(row[1]), float(row[2]), float(row[3])
        if n != grid.indices[i] or xv != x[i] or w != grid.omegas[j]:
            raise ValueError(f"row {r + 3} is off the lattice or out of order")
        values[j, i] = v
    return MagnitudeSamples(grid, values, K=K)


def read_measurements(path: str) -> MagnitudeSamples:
    try:
        return parse_measurements(_read_text(path))
    except FileFormatError:
        raise
    except (ValueError, KeyError, IndexError) as exc:
        raise FileFormatError(f"malformed measurement file {path}: {exc}") from exc


def _table(header, rows) -> str:
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(out) + "\n"


# -- commands --------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.zero:
        signal = zero_signal(args.K, args.B)
    else:
        signal = random_signal(args.K, args.B, args.seed, real_only=args.real)
    _write_text(args.out, _dump_json(signal.to_dict()))
    return EXIT_OK


def _default_N(K: int) -> int:
    # lattice index 2K carries the outermost coefficient node K/(2B)
    return 2 * K + 18


def cmd_measure(args) -> int:
    signal = read_signal(args.signal)
    omegas = (args.omega0, args.omega1)
    if args.N is not None:
        N = args.N
    elif args.tail_tolerance is not None:
        N = choose_truncation(signal, omegas, args.tail_tolerance)
    else:
        N = _default_N(signal.K)
    samples = sample_magnitudes(signal, MeasurementGrid(signal.bandwidth, omegas, N))
    _write_text(args.out, format_measurements(samples))
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    samples = read_measurements(args.measurements)
    config = ReconstructionConfig(starts=args.starts, max_iterations=args.max_iterations,
                                  gradient_tolerance=args.gradient_tolerance,
                                  loss_tolerance=args.loss_tolerance, seed=args.seed)
    K = args.K if args.K is not None else samples.K
    if K is None:
        raise ValueError("K is not recorded in the measurements; pass --K")
    result = reconstruct(samples, K, config)
    _write_text(args.out, _dump_json(result.to_dict()))
    status = EXIT_OK if result.converged else EXIT_CONTRACT
    if not result.converged:
        print(f"not converged: loss {result.loss:.3e}, gradient {result.gradient_norm:.3e}",
              file=sys.stderr)
    if args.truth is not None:
        truth = read_signal(args.truth)
        error = phase_align(result.signal, truth).distance / max(truth.norm(), np.finfo(float).tiny)
        print(f"phase-aligned relative error {error:.3e}")
        if not error <= args.error_tolerance:
            status = EXIT_CONTRACT
    return status


def verification_rows(signal: BandlimitedSignal, omegas, seed: int = 0):
    """``(check, value, threshold, passed)`` for the invariant suite on one signal."""
    rng = np.random.default_rng(seed)
    rows = []

    def add(name, value, threshold):
        rows.append((name, float(value), float(threshold), bool(value <= threshold)))

    scale = max(signal.norm(), np.finfo(float).tiny)
    xs = rng.uniform(-2, 2, 5)
    ws = rng.uniform(-2, 2, 5)
    fidelity = max(abs(complex(gabor_transform(signal, x, w)) - gabor_quadrature_oracle(signal, x, w))
                   for x, w in zip(xs, ws)) / scale
    add("gabor_vs_quadrature", fidelity, 1e-9)
    add("bargmann_relation", float(np.max(bargmann_relation_residual(signal, xs, ws))) / scale, 1e-10)
    zs = rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3)
    add("fourier_symmetry", max(bargmann_fourier_symmetry_residual(signal, z) for z in zs) / scale, 1e-8)
    for w in omegas:
        add(f"leakage_omega={w!r}", bandlimit_diagnostic(signal, w), 1e-6)
    grid = MeasurementGrid(signal.bandwidth, tuple(omegas), choose_truncation(signal, omegas, 1e-7))
    samples = sample_magnitudes(signal, grid)
    x_off = rng.uniform(-4, 4, 20)
    for j, w in enumerate(grid.omegas):
        exact = np.abs(gabor_transform(signal, x_off, w)) ** 2
        add(f"shannon_omega={w!r}", float(np.max(np.abs(shannon_interpolate(samples, j, x_off) - exact))), 1e-6)
    small = sample_magnitudes(signal, MeasurementGrid(signal.bandwidth, tuple(omegas), _default_N(signal.K)))
    value, _ = loss(signal.coeffs, small)
    add("loss_at_truth", value, 1e-18)
    rotated, _ = loss(np.exp(1j * rng.uniform(-np.pi, np.pi)) * signal.coeffs, small)
    add("gauge_invariance", abs(rotated - value), 1e-14)
    if np.any(signal.coeffs):
        alpha = float(rng.uniform(-3, 3))
        check = hadamard_phase_check(signal, signal.scaled(np.exp(-1j * alpha)), 0.5,
                                     np.linspace(-2, 2, 41))
        add("hadamard_alpha", abs(math.remainder(check.alpha - alpha, 2 * math.pi)), 1e-9)
        add("hadamard_lambda", max(abs(check.lambda1), abs(check.lambda2)), 1e-8)
    return rows


def cmd_verify(args) -> int:
    signal = read_signal(args.signal)
    rows = verification_rows(signal, (args.omega0, args.omega1), args.seed)
    _write_text(args.out, _table(("check", "value", "threshold", "pass"), rows))
    failed = [r[0] for r in rows if not r[3]]
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_CONTRACT
    return EXIT_OK


def cmd_counterexample(args) -> int:
    h1 = random_signal(args.K, args.B, args.seed1, real_only=True)
    h2 = random_signal(args.K, args.B, args.seed2, real_only=True)
    u, v = counterexample_pair(h1, h2)
    x = np.linspace(-args.half_width, args.half_width, args.points)
    rows = []
    for w, want_equal in ((0.0, True), (args.omega1, False)):
        diff = float(np.max(np.abs(np.abs(gabor_transform(u, x, w)) - np.abs(gabor_transform(v, x, w)))))
        ok = diff <= 1e-12 if want_equal else diff > 1e-4
        rows.append((w, diff, "<=1e-12" if want_equal else ">1e-4", ok))
    distance = phase_align(u, v).distance
    _write_text(os.path.join(args.out_dir, "u.json"), _dump_json(u.to_dict()))
    _write_text(os.path.join(args.out_dir, "v.json"), _dump_json(v.to_dict()))
    _write_text(os.path.join(args.out_dir, "discrepancy.csv"),
                _table(("omega", "max_abs_difference", "criterion", "pass"), rows))
    print(f"phase-aligned distance between u and v: {distance:.6g}")
    if not all(r[3] for r in rows):
        return EXIT_CONTRACT
    return EXIT_OK


def cmd_zeros(args) -> int:
    signal = read_signal(args.signal)
    strip = Strip(args.im_low, args.im_high, args.re_low, args.re_high)
    zs = find_zeros(lambda z: bargmann_transform(signal, z), strip, args.tolerance,
                    derivative=lambda z: bargmann_derivative(signal, z))
    _write_text(args.out, zs.to_csv())
    return EXIT_OK


def cmd_zalik(args) -> int:
    report = zalik_report(args.z0, args.omega0, args.tau, args.N)
    _write_text(args.out, report.dumps() + "\n")
    return EXIT_OK if report.divergence_verdict and report.N0 is not None else EXIT_CONTRACT


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaborpr", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random (or zero) model signal as JSON")
    p.add_argument("--B", type=_real, default=1.0)
    p.add_argument("--K", type=_nonnegative_int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--real", action="store_true", help="real coefficients")
    p.add_argument("--zero", action="store_true", help="the zero signal")
    p.add_argument("--out", default="signal.json")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("measure", help="sample |Gf|^2 on the two-bin lattice")
    p.add_argument("--signal", default="signal.json")
    p.add_argument("--omega0", type=_real, default=0.0)
    p.add_argument("--omega1", type=_real, default=0.5)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--N", type=_positive_int, help="lattice half-width (default 2K+18)")
    group.add_argument("--tail-tolerance", type=_real, help="choose N from this tail bound")
    p.add_argument("--out", default="measurements.csv")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("reconstruct", help="multi-start least-squares phase retrieval")
    p.add_argument("--measurements", default="measurements.csv")
    p.add_argument("--K", type=_nonnegative_int)
    p.add_argument("--starts", type=_positive_int, default=16)
    p.add_argument("--max-iterations", type=_positive_int, default=500)
    p.add_argument("--gradient-tolerance", type=_real, default=1e-10)
    p.add_argument("--loss-tolerance", type=_real, default=1e-14)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--truth", help="signal JSON to compare against up to global phase")
    p.add_argument("--error-tolerance", type=_real, default=1e-6)
    p.add_argument("--out", default="report.json")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("verify", help="run the invariant suite on one signal")
    p.add_argument("--signal", default="signal.json")
    p.add_argument("--omega0", type=_real, default=0.0)
    p.add_argument("--omega1", type=_real, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="verify.csv")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("counterexample", help="single-bin non-uniqueness witness")
    p.add_argument("--seed1", type=int, required=True)
    p.add_argument("--seed2", type=int, required=True)
    p.add_argument("--B", type=_real, default=1.0)
    p.add_argument("--K", type=_nonnegative_int, default=3)
    p.add_argument("--omega1", type=_real, default=0.5)
    p.add_argument("--points", type=_positive_int, default=101)
    p.add_argument("--half-width", type=_real, default=5.0)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("zeros", help="zeros of the Bargmann transform in a window")
    p.add_argument("--signal", default="signal.json")
    p.add_argument("--re-low", type=_real, default=-3.0)
    p.add_argument("--re-high", type=_real, default=3.0)
    p.add_argument("--im-low", type=_real, default=-1.0)
    p.add_argument("--im-high", type=_real, default=1.0)
    p.add_argument("--tolerance", type=_real, default=1e-12)
    p.add_argument("--out", default="zeros.csv")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("zalik", help="completeness-hypothesis diagnostics")
    p.add_argument("--z0", type=_complex, default=1j)
    p.add_argument("--omega0", type=_real, default=0.0)
    p.add_argument("--tau", type=_real, default=0.5)
    p.add_argument("--N", type=_positive_int, default=10000)
    p.add_argument("--out", default="zalik.json")
    p.set_defaults(func=cmd_zalik)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ExponentOverflowError as exc:
        print(f"overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except FileFormatError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except GaborPRError as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except ValueError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
