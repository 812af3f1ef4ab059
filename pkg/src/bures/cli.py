"""Command-line front end: sampling runs, volume tables, and numeric checks.

Exit codes: 0 success (and passing checks), 1 failed statistical or numeric
check, 2 invalid input, 3 I/O failure.
"""

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .coset import BallPoint, EULER_ANGLE_RANGES, coset_jacobian_det, euler_coset_volume
from .errors import BuresError, DegenerateSpectrumError
from .measures import (
    DensityMatrix,
    Spectrum,
    ball_volume,
    eigenvalue_density,
    flag_volume,
    flag_volume_sz,
)
from .sampling import RngStream, SampleRecord, batch_sample, sample_interior_point
from .stats import cumulative_pairs, ks_two_sample

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

#: Maximum |det J - 1| accepted by check-jacobian.
JACOBIAN_BOUND = 1e-4

#: Maximum relative quadrature error accepted by check-euler.
EULER_BOUND = 1e-9

THREADS_ENV = "BURES_THREADS"


class UsageError(BuresError):
    """Invalid command-line input (maps to exit code 2)."""


@dataclass
class RunConfig:
    """Resolved options for a sampling run."""

    command: str
    n_levels: int
    spectrum: Spectrum | None
    method: str
    count: int
    seed: int
    output_path: str
    format: str
    zero_layers: bool = False


def _parse_spectrum(text: str) -> Spectrum:
    try:
        values = [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"could not parse spectrum {text!r}: {exc}") from exc
    if not values:
        raise UsageError("spectrum must contain at least one eigenvalue")
    if any(v < 0 for v in values):
        raise UsageError("spectrum eigenvalues must be nonnegative")
    total = sum(values)
    if abs(total - 1.0) >= 1e-9:
        raise UsageError(f"spectrum sums to {total:.12g}; must be within 1e-9 of 1")
    try:
        return Spectrum(np.array(values) / total)
    except BuresError as exc:
        raise UsageError(str(exc)) from exc


def _max_workers() -> int | None:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        workers = int(raw)
    except ValueError:
        return None
    return workers if workers >= 2 else None


def _diag_labels(n: int) -> list:
    return [f"rho_{j}{j}" for j in range(1, n + 1)]


def _entry_labels(prefix: str, n: int) -> list:
    return [f"{prefix}_{j}_{k}" for j in range(1, n + 1) for k in range(1, n + 1)]


def _csv_header(n: int) -> list:
    return ["method", "index"] + _entry_labels("re", n) + _entry_labels("im", n) + _diag_labels(n)


def _record_row(record: SampleRecord) -> list:
    n = record.rho.n_levels
    m = record.rho.matrix
    cells = [record.method, str(record.index)]
    cells += [f"{v:.17g}" for v in m.real.reshape(-1)]
    cells += [f"{v:.17g}" for v in m.imag.reshape(-1)]
    cells += [f"{record.observables[label]:.17g}" for label in _diag_labels(n)]
    return cells


def write_records_csv(records, path) -> None:
    n = records[0].rho.n_levels
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(_csv_header(n))
        for record in records:
            writer.writerow(_record_row(record))


def write_records_jsonl(records, path) -> None:
    with open(path, "w") as handle:
        for record in records:
            payload = {
                "method": record.method,
                "index": record.index,
                "re": record.rho.matrix.real.tolist(),
                "im": record.rho.matrix.imag.tolist(),
                "observables": record.observables,
            }
            handle.write(json.dumps(payload, separators=(",", ":")) + "\n")


def write_records(records, path, fmt: str) -> None:
    if fmt == "csv":
        write_records_csv(records, path)
    elif fmt == "jsonl":
        write_records_jsonl(records, path)
    else:
        raise UsageError(f"unknown format {fmt!r}")


def _record_from_parts(method, index, re, im, observables) -> SampleRecord:
    matrix = np.asarray(re, dtype=float) + 1j * np.asarray(im, dtype=float)
    rho = DensityMatrix.from_matrix(matrix)
    obs = {str(k): float(v) for k, v in observables.items()}
    return SampleRecord(str(method), int(index), rho, obs)


def read_records(path):
    """Load a CSV or JSONL record file back into SampleRecord objects."""
    if _looks_like_jsonl(path):
        records = []
        with open(path) as handle:
            for line in handle:
                if not line.strip():
                    continue
                payload = json.loads(line)
                records.append(
                    _record_from_parts(
                        payload["method"],
                        payload["index"],
                        payload["re"],
                        payload["im"],
                        payload["observables"],
                    )
                )
        return records
    records = []
    for row in _csv_rows(path):
        labels = [k for k in row if k.startswith("re_")]
        n = int(round(len(labels) ** 0.5))
        re = [[float(row[f"re_{j}_{k}"]) for k in range(1, n + 1)] for j in range(1, n + 1)]
        im = [[float(row[f"im_{j}_{k}"]) for k in range(1, n + 1)] for j in range(1, n + 1)]
        obs = {label: float(row[label]) for label in _diag_labels(n)}
        records.append(_record_from_parts(row["method"], row["index"], re, im, obs))
    return records


def _looks_like_jsonl(path) -> bool:
    if str(path).endswith((".jsonl", ".ndjson")):
        return True
    with open(path) as handle:
        head = handle.read(1)
    return head == "{"


def _csv_rows(path):
    with open(path, newline="") as handle:
        yield from csv.DictReader(handle)


def read_column(path, column: str) -> np.ndarray:
    """Extract one named column without validating whole records."""
    values = []
    if _looks_like_jsonl(path):
        with open(path) as handle:
            for line in handle:
                if not line.strip():
                    continue
                payload = json.loads(line)
                try:
                    values.append(float(payload["observables"][column]))
                except KeyError as exc:
                    raise UsageError(f"column {column!r} not present in {path}") from exc
        return np.array(values)
    for row in _csv_rows(path):
        if column not in row or row[column] is None:
            raise UsageError(f"column {column!r} not present in {path}")
        values.append(float(row[column]))
    if not values:
        raise UsageError(f"no data rows in {path}")
    return np.array(values)


def cmd_sample(cfg: RunConfig) -> int:
    records = batch_sample(
        cfg.method,
        cfg.spectrum,
        None,
        cfg.count,
        cfg.seed,
        max_workers=_max_workers(),
        zero_layers=cfg.zero_layers,
    )
    write_records(records, cfg.output_path, cfg.format)
    print(f"wrote {len(records)} {cfg.method} records to {cfg.output_path}")
    return EXIT_OK


def cmd_volume(cfg: RunConfig) -> int:
    n = cfg.n_levels
    if n < 2:
        raise UsageError("volume tables need at least 2 levels")
    product = 1.0
    for k in range(1, n):
        vol = ball_volume(2 * k)
        product *= vol
        print(f"Vol(B^{2 * k}) = {vol:.15g}")
    flag = flag_volume(n)
    print(f"flag_volume({n}) = {flag:.15g}")
    print(f"flag_volume_sz({n}) = {flag_volume_sz(n):.15g}")
    print(f"ratio = {flag_volume_sz(n) / flag:.15g}")
    print(f"ball product = {product:.15g}")
    return EXIT_OK


def cmd_compare(a_path, b_path, column: str, pairs_out=None) -> int:
    a = read_column(a_path, column)
    b = read_column(b_path, column)
    result = ks_two_sample(a, b)
    print(f"samples: n = {result.n}, m = {result.m}")
    print(f"KS statistic = {result.statistic:.9g}")
    print(f"critical(1%) = {result.critical_001:.9g}")
    if pairs_out is None:
        stem_a = Path(a_path).stem
        stem_b = Path(b_path).stem
        pairs_out = Path(a_path).with_name(f"{stem_a}_vs_{stem_b}_pairs.csv")
    if a.size == b.size:
        pairs = cumulative_pairs(a, b)
        with open(pairs_out, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["a", "b"])
            for left, right in pairs:
                writer.writerow([f"{left:.17g}", f"{right:.17g}"])
        print(f"pairs written to {pairs_out}")
    else:
        print("pairs skipped (sample sizes differ)")
    verdict = "PASS" if result.passed else "FAIL"
    print(f"compare: {verdict}")
    return EXIT_OK if result.passed else EXIT_CHECK_FAILED


def cmd_check_jacobian(n: int, points: int, step: float, seed: int) -> int:
    if n < 1:
        raise UsageError("n must be at least 1")
    if points < 1:
        raise UsageError("points must be at least 1")
    if not 1e-8 <= step <= 1e-4:
        raise UsageError("step must lie in [1e-8, 1e-4]")
    origin_dev = abs(coset_jacobian_det(BallPoint.zero(2 * n), step) - 1.0)
    print(f"origin: |det J - 1| = {origin_dev:.3g}")
    rng = RngStream(seed)
    worst = origin_dev
    total = 0.0
    for _ in range(points):
        point = sample_interior_point(2 * n, rng)
        dev = abs(coset_jacobian_det(point, step) - 1.0)
        worst = max(worst, dev)
        total += dev
    print(
        f"n={n}: max |det J - 1| = {worst:.3g}, mean = {total / points:.3g} "
        f"over {points} interior points (step={step:g}, seed={seed})"
    )
    ok = worst < JACOBIAN_BOUND
    print(f"check-jacobian: {'PASS' if ok else 'FAIL'} (bound {JACOBIAN_BOUND:g})")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_check_euler(nodes: int = 64, halve_phi6: bool = False) -> int:
    if nodes < 2:
        raise UsageError("need at least 2 quadrature nodes")
    ranges = list(EULER_ANGLE_RANGES)
    if halve_phi6:
        lo, hi = ranges[3]
        ranges[3] = (lo, lo + (hi - lo) / 2)
    volume = euler_coset_volume(nodes, ranges)
    target = ball_volume(4)
    rel = abs(volume - target) / target
    print(f"euler volume ({nodes} nodes) = {volume:.15g}")
    print(f"target Vol(B^4) = {target:.15g}")
    print(f"relative error = {rel:.3g}")
    ok = rel < EULER_BOUND
    print(f"check-euler: {'PASS' if ok else 'FAIL'} (bound {EULER_BOUND:g})")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_density(spectrum: Spectrum) -> int:
    try:
        value = eigenvalue_density(spectrum)
    except DegenerateSpectrumError as exc:
        print(f"density undefined: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"eigenvalue density = {value:.17g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bures",
        description="Sample fixed-spectrum density matrices and check coset-coordinate identities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sample = sub.add_parser("sample", help="draw states and write them to CSV or JSONL")
    p_sample.add_argument("--spectrum", required=True, help="comma-separated eigenvalues summing to 1")
    p_sample.add_argument("--method", choices=("haar", "coset"), required=True)
    p_sample.add_argument("--count", type=int, default=1000)
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("-o", "--output", required=True)
    p_sample.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p_sample.add_argument("--zero-layers", action="store_true", help=argparse.SUPPRESS)

    p_volume = sub.add_parser("volume", help="print ball and flag volumes for N levels")
    p_volume.add_argument("-n", "--levels", type=int, required=True)

    p_compare = sub.add_parser("compare", help="two-sample KS test between record files")
    p_compare.add_argument("file_a")
    p_compare.add_argument("file_b")
    p_compare.add_argument("--column", default="rho_33")
    p_compare.add_argument("--pairs-out", default=None)

    p_jac = sub.add_parser("check-jacobian", help="verify unit Jacobian of ball coordinates")
    p_jac.add_argument("-n", type=int, default=2, help="half the ball dimension")
    p_jac.add_argument("--points", type=int, default=100)
    p_jac.add_argument("--step", type=float, default=1e-5)
    p_jac.add_argument("--seed", type=int, default=0)

    p_euler = sub.add_parser("check-euler", help="verify the Euler-angle volume quadrature")
    p_euler.add_argument("--nodes", type=int, default=64)
    p_euler.add_argument("--halve-phi6", action="store_true", help=argparse.SUPPRESS)

    p_density = sub.add_parser("density", help="eigenvalue density of the volume element")
    p_density.add_argument("--spectrum", required=True)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sample":
            spectrum = _parse_spectrum(args.spectrum)
            if args.count < 1:
                raise UsageError("count must be at least 1")
            cfg = RunConfig(
                command="sample",
                n_levels=spectrum.n_levels,
                spectrum=spectrum,
                method=args.method,
                count=args.count,
                seed=args.seed,
                output_path=args.output,
                format=args.format,
                zero_layers=args.zero_layers,
            )
            return cmd_sample(cfg)
        if args.command == "volume":
            cfg = RunConfig(
                command="volume",
                n_levels=args.levels,
                spectrum=None,
                method="",
                count=0,
                seed=0,
                output_path="",
                format="",
            )
            return cmd_volume(cfg)
        if args.command == "compare":
            return cmd_compare(args.file_a, args.file_b, args.column, args.pairs_out)
        if args.command == "check-jacobian":
            return cmd_check_jacobian(args.n, args.points, args.step, args.seed)
        if args.command == "check-euler":
            return cmd_check_euler(args.nodes, args.halve_phi6)
        if args.command == "density":
            return cmd_density(_parse_spectrum(args.spectrum))
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BuresError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry() -> None:
    raise SystemExit(main(sys.argv[1:]))
