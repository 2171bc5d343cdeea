"""Command-line front end: ``stagsearch <mode> [options]``."""

from __future__ import annotations

import argparse
import logging
import math
import re
import sys
from pathlib import Path

from . import experiments as ex
from .asymptotics import AsymptoticsRecord
from .lattice import LABELS
from .records import emit, render
from .spectral import SpectrumRow, enumerate_spectrum
from .walk import DEFAULT_ORDERING

_THETA = re.compile(r"^\s*([+-]?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d*\.?\d+))?\s*$")


def parse_theta(text: str) -> float:
    """Radians as a float, or a multiple of pi such as ``pi/4``, ``3pi/8``, ``-pi``."""
    m = _THETA.match(text.lower())
    if m:
        coef = m.group(1)
        num = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
        den = float(m.group(2)) if m.group(2) else 1.0
        if den == 0:
            raise argparse.ArgumentTypeError(f"zero denominator in angle {text!r}")
        return num * math.pi / den
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"angle must be finite, got {text!r}")
    return value


def parse_ordering(text: str) -> tuple[str, ...]:
    labels = tuple(s.strip() for s in text.split(","))
    if sorted(labels) != sorted(LABELS):
        raise argparse.ArgumentTypeError(f"ordering must be a permutation of {','.join(LABELS)}")
    return labels


def _int_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _theta_list(text: str) -> list[float]:
    return [parse_theta(s) for s in text.split(",") if s.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stagsearch", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="mode", required=True)

    def common(sp, n_list=False, theta=True):
        if n_list:
            sp.add_argument("--n-list", type=_int_list, required=True, help="e.g. 8,16,32")
        if theta:
            sp.add_argument("--theta", type=parse_theta, default=math.pi / 4, help="radians or e.g. pi/4")
        sp.add_argument("--ordering", type=parse_ordering, default=DEFAULT_ORDERING, help="e.g. 00,01,10,11")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", type=Path, help="output file (default stdout)")

    s = sub.add_parser("search", help="single search run")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--max-steps", type=int)
    s.add_argument("--trace", type=Path, help="also write t,p columns to this file")
    s.add_argument("--timing", action="store_true", help="fill wall_time_s (breaks byte-identical output)")
    common(s)

    s = sub.add_parser("scaling", help="runs over several n with power-law fits")
    s.add_argument("--max-steps", type=int)
    s.add_argument("--fit-out", type=Path, help="write the fits here (default stderr)")
    s.add_argument("--timing", action="store_true")
    common(s, n_list=True)

    s = sub.add_parser("theta-scan", help="runs over several angles at one n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--theta-list", type=_theta_list, required=True, help="e.g. pi/8,pi/6,pi/4")
    s.add_argument("--max-steps", type=int)
    s.add_argument("--timing", action="store_true")
    common(s, theta=False)

    s = sub.add_parser("eigen-trend", help="lambda and phi_min against n")
    common(s, n_list=True)

    s = sub.add_parser("spectrum", help="closed-form eigenbasis table")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--out", type=Path)

    s = sub.add_parser("appendix", help="lambda, C^2 and lattice sums per n")
    s.add_argument("--n-list", type=_int_list, required=True)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--out", type=Path)
    return p


def _config(args) -> ex.ExperimentConfig:
    n_values = tuple(args.n_list) if hasattr(args, "n_list") else (args.n,)
    return ex.ExperimentConfig(
        mode=args.mode,
        n_values=n_values,
        theta=getattr(args, "theta", math.pi / 4),
        ordering=getattr(args, "ordering", DEFAULT_ORDERING),
        max_steps=getattr(args, "max_steps", None),
        output=str(args.out) if args.out else None,
        format=args.format,
    )


def _write(records, fmt, out, columns) -> None:
    if out is None:
        sys.stdout.write(render(records, fmt, columns))
    else:
        emit(records, fmt, out, columns)


def run(args) -> None:
    cfg = _config(args)
    mode = cfg.mode
    if mode == "search":
        n = cfg.n_values[0]
        rec = ex.run_search(n, cfg.theta, cfg.ordering, cfg.max_steps, timed=args.timing)
        _write([rec], cfg.format, args.out, ex.RunRecord.COLUMNS)
        if args.trace:
            steps = rec.t_opt if rec.amplified else (cfg.max_steps or ex.default_max_steps(n))
            probs = ex.search_trace(n, cfg.theta, cfg.ordering, steps)
            rows = [ex.TraceRow(t, float(p)) for t, p in enumerate(probs)]
            emit(rows, "csv", args.trace, ex.TraceRow.COLUMNS)
    elif mode == "scaling":
        records, fits = ex.scaling_sweep(cfg.n_values, cfg.theta, cfg.ordering, cfg.max_steps, args.timing)
        _write(records, cfg.format, args.out, ex.RunRecord.COLUMNS)
        if args.fit_out:
            emit(fits, cfg.format, args.fit_out, ex.FitResult.COLUMNS)
        else:
            sys.stderr.write(render(fits, "csv", ex.FitResult.COLUMNS))
    elif mode == "theta-scan":
        for th in args.theta_list:
            ex.ExperimentConfig(mode, cfg.n_values, th, cfg.ordering, cfg.max_steps)
        rows = ex.theta_scan(cfg.n_values[0], args.theta_list, cfg.ordering, cfg.max_steps, args.timing)
        _write(rows, cfg.format, args.out, ex.ThetaRunRecord.COLUMNS)
    elif mode == "eigen-trend":
        rows = ex.eigen_trend(cfg.theta, cfg.n_values, cfg.ordering)
        _write(rows, cfg.format, args.out, ex.TrendRecord.COLUMNS)
    elif mode == "spectrum":
        rows = [SpectrumRow.from_entry(e) for e in enumerate_spectrum(cfg.n_values[0])]
        _write(rows, cfg.format, args.out, SpectrumRow.COLUMNS)
    elif mode == "appendix":
        rows = [AsymptoticsRecord.compute(n) for n in cfg.n_values]
        _write(rows, cfg.format, args.out, AsymptoticsRecord.COLUMNS)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        run(args)
    except ValueError as exc:
        print(f"stagsearch: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"stagsearch: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
