"""Command-line front end: tables, coding-gain curves, single-image
compression and corpus sweeps.  All output is CSV."""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .catalog import PAPER_8POINT, TRANSFORM_NAMES, UnknownTransformError, get_transform
from .codec import ImagePlane, compress_plane, corpus_sweep, load_corpus
from .jam import jam_transform
from .metrics import coding_gain_sweep, total_error_energy
from .orthogonalization import deviation_from_diagonality
from .transforms import ChenParams, TransformKind, baseline_fast, build_t8, chen_stages, op_count

__all__ = ["RunConfig", "main"]

TABLE4_NAMES = ("chen-round-16", "chen-sign-16", "chen-round-32", "chen-sign-32")


class CLIError(Exception):
    pass


def fmt(x: float, places: int = 4) -> str:
    """Fixed-point text; infinity becomes ``INF``."""
    if math.isinf(x):
        return "INF" if x > 0 else "-INF"
    s = f"{x:.{places}f}"
    # avoid "-0.0000"
    return s[1:] if s.startswith("-") and float(s) == 0 else s


def parse_range(text: str, kind=float):
    """``a:b:step`` (inclusive) or ``a:b`` with unit step for integers."""
    parts = text.split(":")
    try:
        if kind is int:
            if len(parts) not in (1, 2, 3):
                raise ValueError
            a = int(parts[0])
            b = int(parts[1]) if len(parts) > 1 else a
            step = int(parts[2]) if len(parts) > 2 else 1
        else:
            if len(parts) != 3:
                raise ValueError
            a, b, step = (float(p) for p in parts)
    except ValueError:
        raise CLIError(f"malformed range {text!r}; expected a:b:step") from None
    if step <= 0 or b < a:
        raise CLIError(f"empty or descending range {text!r}")
    if kind is int:
        return list(range(a, b + 1, step))
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    return [round(a + k * step, 10) for k in range(count)]


@dataclass
class RunConfig:
    command: str
    transforms: list[str] = field(default_factory=list)
    rho_grid: list[float] = field(default_factory=list)
    r_values: list[int] = field(default_factory=list)
    input: Path | None = None
    output: Path | None = None
    corpus: Path | None = None
    delimiter: str = ","

    def __post_init__(self):
        for name in self.transforms:
            if name not in TRANSFORM_NAMES:
                raise UnknownTransformError(name)
        for rho in self.rho_grid:
            if not 0.0 <= rho < 1.0:
                raise CLIError(f"correlation {rho} outside [0, 1)")
        for r in self.r_values:
            if not 1 <= r <= 64:
                raise CLIError(f"retained count {r} outside 1..64")
        if len(self.delimiter) != 1:
            raise CLIError("delimiter must be a single character")

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> RunConfig:
        cfg = cls(command=ns.command, delimiter=ns.delimiter)
        if ns.command == "coding-gain":
            cfg.transforms = ns.transform or list(PAPER_8POINT)
            if ns.rho is not None:
                cfg.rho_grid = [ns.rho]
            else:
                cfg.rho_grid = parse_range(ns.rho_grid)
            cfg.output = ns.out
        elif ns.command == "compress":
            cfg.transforms = [ns.transform]
            cfg.r_values = [ns.r]
            cfg.input, cfg.output = ns.input, ns.out
        elif ns.command == "sweep":
            cfg.transforms = ns.transform or list(PAPER_8POINT)
            if "dct" not in cfg.transforms:
                cfg.transforms.insert(0, "dct")
            cfg.r_values = parse_range(ns.r, int)
            cfg.corpus, cfg.output = ns.corpus, ns.out
        else:
            cfg.output = ns.out
        cfg.__post_init__()
        return cfg


def _write_csv(path: Path | None, header, rows, delimiter: str) -> None:
    if path is None:
        out = sys.stdout
        w = csv.writer(out, delimiter=delimiter, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _ops_row(name, ops):
    return [name, ops.multiplications, ops.additions, ops.shifts, ops.total]


def cmd_tables(cfg: RunConfig) -> int:
    out = cfg.output or Path(".")
    rows = []
    for name in PAPER_8POINT:
        t = get_transform(name)
        delta = deviation_from_diagonality(t.low_complexity @ t.low_complexity.T)
        rows.append([name, fmt(total_error_energy(t.approx), 2), fmt(float(delta))])
    _write_csv(out / "table1.csv", ["transform", "total_error_energy", "orthogonality_deviation"], rows, cfg.delimiter)

    rows = [_ops_row("dct", op_count(chen_stages(ChenParams.exact())))]
    rows.append(_ops_row("chen-round", op_count(build_t8(TransformKind.CHEN_ROUND)[0])))
    rows.append(_ops_row("chen-sign", op_count(build_t8(TransformKind.CHEN_SIGN)[0])))
    for kind in (TransformKind.SDCT, TransformKind.BAS2008, TransformKind.WHT, TransformKind.HT):
        rows.append(_ops_row(kind.value, op_count(baseline_fast(kind))))
    header = ["transform", "mult", "add", "shift", "total"]
    _write_csv(out / "table2.csv", header, rows, cfg.delimiter)

    rows = []
    for name in TABLE4_NAMES:
        base, n = name.rsplit("-", 1)
        rows.append(_ops_row(name, op_count(jam_transform(TransformKind(base), int(n)))))
    _write_csv(out / "table4.csv", header, rows, cfg.delimiter)
    return 0


def cmd_coding_gain(cfg: RunConfig) -> int:
    transforms = {name: get_transform(name) for name in cfg.transforms}
    reports = coding_gain_sweep(transforms, cfg.rho_grid)
    rows = []
    for rho in cfg.rho_grid:
        chunk = [r for r in reports if r.rho == rho]
        rows.append([fmt(rho), "klt", fmt(chunk[0].cg_klt), fmt(0.0)])
        rows.extend([fmt(rho), r.transform, fmt(r.cg), fmt(r.relative)] for r in chunk)
    _write_csv(cfg.output, ["rho", "transform", "coding_gain", "relative_to_klt"], rows, cfg.delimiter)
    return 0


def cmd_compress(cfg: RunConfig) -> int:
    try:
        plane = ImagePlane.read(cfg.input)
    except (OSError, ValueError) as exc:
        raise CLIError(str(exc)) from None
    name, r = cfg.transforms[0], cfg.r_values[0]
    try:
        recon, report = compress_plane(plane, get_transform(name), r)
    except ValueError as exc:
        raise CLIError(str(exc)) from None
    if cfg.output is not None:
        recon.write(cfg.output)
    w = csv.writer(sys.stdout, delimiter=cfg.delimiter, lineterminator="\n")
    w.writerow([report.transform, report.r, fmt(report.psnr), fmt(report.ssim)])
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    if cfg.corpus is None or not cfg.corpus.is_dir():
        raise CLIError(f"corpus directory {cfg.corpus} does not exist")
    images = load_corpus(cfg.corpus)
    if not images:
        raise CLIError(f"no readable PGM images in {cfg.corpus}")
    transforms = {name: get_transform(name) for name in cfg.transforms}
    try:
        rows = corpus_sweep(images, transforms, cfg.r_values)
    except ValueError as exc:
        raise CLIError(str(exc)) from None
    by_key = {(row.transform, row.r): row for row in rows}
    out = cfg.output or Path(".")
    names = cfg.transforms
    for fname, attr in (("fig3.csv", "psnr"), ("fig4.csv", "ssim")):
        header = ["r", *(f"{attr}_{n}" for n in names), *(f"ape_{n}" for n in names)]
        table = []
        for r in cfg.r_values:
            line = [r]
            line += [fmt(getattr(by_key[n, r], attr)) for n in names]
            line += [fmt(getattr(by_key[n, r], f"ape_{attr}")) for n in names]
            table.append(line)
        _write_csv(out / fname, header, table, cfg.delimiter)
    return 0


COMMANDS = {
    "tables": cmd_tables,
    "coding-gain": cmd_coding_gain,
    "compress": cmd_compress,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="approxdct", description=__doc__)
    parser.add_argument("--delimiter", default=",", help="CSV field separator (default ',')")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tables", help="error energy and operation-count tables")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")

    p = sub.add_parser("coding-gain", help="coding gain relative to the KLT over a rho grid")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--rho", type=float)
    g.add_argument("--rho-grid", default="0.01:0.99:0.01", help="a:b:step, inclusive")
    p.add_argument("--transform", action="append", help="repeatable; default: all 8-point transforms")
    p.add_argument("--out", type=Path, help="CSV file (default: standard output)")

    p = sub.add_parser("compress", help="compress one PGM image")
    p.add_argument("input", type=Path)
    p.add_argument("--transform", default="chen-round")
    p.add_argument("--r", type=int, default=6, help="retained coefficients per block")
    p.add_argument("--out", type=Path, help="reconstructed PGM")

    p = sub.add_parser("sweep", help="average PSNR/SSIM over a corpus of PGM images")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--r", default="1:45", help="a:b retained-coefficient range")
    p.add_argument("--transform", action="append", help="repeatable; default: all 8-point transforms")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    return parser


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if ns.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = RunConfig.from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except (CLIError, UnknownTransformError) as exc:
        print(f"approxdct: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"approxdct: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
