"""Command-line front end.

Subcommands::

    meanbound mean --p 1 --values 2,4
    meanbound mean --exponential --p 0 --values 1,3
    meanbound bound --p 1 --q -1 --gamma 4
    meanbound sweep --p 1 --q -1 --gamma-min 1 --gamma-max 4 --steps 4
    meanbound extremal --p 2 --q -1 --probe 1e-1,1e-2,1e-3
    meanbound verify --seed 42 --samples 1000

Exit status: 0 success, 1 domain error, 2 usage error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np

from . import bounds, extremal, means_core, verify
from .errors import DomainError

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_VIOLATION = 3

SEED_ENV = "MEANBOUND_SEED"
DEFAULT_SEED = 0

# options taking a value that may legitimately start with '-'
_VALUE_OPTIONS = {"--p", "--q", "--gamma", "--values", "--probe", "--gamma-min", "--gamma-max", "--tol"}


class UsageError(Exception):
    pass


def format_number(x) -> str:
    """Shortest round-trip decimal; integral values drop the trailing ``.0``."""
    if x is None:
        return ""
    if isinstance(x, (bool, int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"
    text = repr(x)
    if text.endswith(".0"):
        text = text[:-2]
    return text


def _format_value(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return json.dumps(value, separators=(",", ":"), sort_keys=True)
    return format_number(value)


def write_records(records: Sequence[dict], fmt: str, out) -> None:
    if fmt == "records":
        for rec in records:
            out.write(" ".join(f"{k}={_format_value(v)}" for k, v in rec.items()) + "\n")
    elif fmt == "json-lines":
        for rec in records:
            out.write(json.dumps(rec) + "\n")
    elif fmt == "csv":
        if not records:
            return
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(records[0]))
        for rec in records:
            writer.writerow([_format_value(v) for v in rec.values()])
        out.write(buf.getvalue())
    else:
        raise UsageError(f"unknown format {fmt!r}")


def parse_number_list(text: str) -> List[float]:
    items = [t.strip() for t in text.split(",")]
    if not items or any(not t for t in items):
        raise UsageError(f"malformed number list {text!r}")
    try:
        return [float(t) for t in items]
    except ValueError:
        raise UsageError(f"malformed number list {text!r}") from None


def read_values_file(path: str) -> List[float]:
    """One decimal per line; blank lines and ``#`` comment lines are skipped."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    values = []
    for lineno, line in enumerate(lines, start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            values.append(float(s))
        except ValueError:
            raise UsageError(f"{path}:{lineno}: not a number: {s!r}") from None
    return values


@dataclass(frozen=True)
class SweepSpec:
    p: float
    q: float
    gamma_min: float
    gamma_max: float
    steps: int
    scale: str = "linear"

    def __post_init__(self):
        if not all(math.isfinite(x) for x in (self.p, self.q, self.gamma_min, self.gamma_max)):
            raise UsageError("sweep parameters must be finite")
        if self.q > self.p:
            raise UsageError("sweep needs q <= p")
        if self.gamma_min < 1 or self.gamma_min > self.gamma_max:
            raise UsageError("sweep needs 1 <= gamma_min <= gamma_max")
        if self.steps < 2:
            raise UsageError("sweep needs steps >= 2")
        if self.scale not in ("linear", "log"):
            raise UsageError("scale must be 'linear' or 'log'")

    def gammas(self) -> List[float]:
        if self.scale == "log":
            grid = np.geomspace(self.gamma_min, self.gamma_max, self.steps)
        else:
            grid = np.linspace(self.gamma_min, self.gamma_max, self.steps)
        grid[0], grid[-1] = self.gamma_min, self.gamma_max
        return [float(g) for g in grid]


def sweep_rows(spec: SweepSpec) -> List[dict]:
    rows = []
    for g in spec.gammas():
        rep = extremal.gap_report(spec.p, spec.q, g)
        rows.append(
            {
                "gamma": g,
                "sup_estimate": rep.sup_estimate,
                "K": rep.cargo_shisha,
                "B": rep.new_bound,
                "slack_K_over_sup": rep.slack_K_over_sup,
                "slack_B_over_K": rep.slack_B_over_K,
            }
        )
    return rows


# ----------------------------------------------------------------- commands


def cmd_mean(args, out) -> int:
    if args.values is not None:
        values = parse_number_list(args.values)
    else:
        values = read_values_file(args.input)
    if args.exponential:
        value = means_core.exponential_mean(args.p, values)
    else:
        value = means_core.power_mean(args.p, values)
    out.write(format_number(value) + "\n")
    return EXIT_OK


def cmd_bound(args, out) -> int:
    p, q, gamma = args.p, args.q, args.gamma
    k = bounds.cargo_shisha(p, q, gamma)
    b = bounds.new_bound(p, q, gamma)
    record = {"p": p, "q": q, "gamma": gamma, "K": k, "B": b}
    if p == 1.0 and q == -1.0:
        record["kantorovich"] = bounds.kantorovich_bound(gamma)
    record["B_over_K"] = b / k
    write_records([record], args.format, out)
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    spec = SweepSpec(args.p, args.q, args.gamma_min, args.gamma_max, args.steps, args.scale)
    write_records(sweep_rows(spec), args.format, out)
    return EXIT_OK


def cmd_extremal(args, out) -> int:
    if args.probe is not None:
        records = []
        for t in parse_number_list(args.probe):
            res = extremal.sharpness_probe(args.p, args.q, t)
            records.append({"t": res.t, "normalized_ratio": res.normalized_ratio})
    else:
        records = [extremal.gap_report(args.p, args.q, args.gamma).as_record()]
    write_records(records, args.format, out)
    return EXIT_OK


def _resolve_seed(seed: Optional[int]) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is None or env.strip() == "":
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def cmd_verify(args, out) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    try:
        cfg = verify.CampaignConfig(
            seed=_resolve_seed(args.seed),
            samples=args.samples,
            gamma_max=args.gamma_max,
            n_max=args.n_max,
            tolerance=args.tol,
        )
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    if args.property is not None:
        try:
            names = [verify.resolve(args.property).name]
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    else:
        names = list(verify.PROPERTIES)
    reports = [verify.run_property(name, cfg) for name in names]
    write_records(
        [
            {
                "property": r.property_name,
                "samples_run": r.samples_run,
                "violations": r.violations,
                "worst_margin": r.worst_margin,
                "worst_witness": r.worst_witness,
            }
            for r in reports
        ],
        args.format,
        out,
    )
    return EXIT_VIOLATION if any(r.violations for r in reports) else EXIT_OK


# ------------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="meanbound", description="Power means and sharp bounds for their ratios.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    formats = ["csv", "records", "json-lines"]

    p_mean = sub.add_parser("mean", help="evaluate a power mean or an exponential mean")
    p_mean.add_argument("--p", type=float, required=True, help="order of the mean; 'inf' and '-inf' allowed")
    src = p_mean.add_mutually_exclusive_group(required=True)
    src.add_argument("--values", help="comma-separated numbers")
    src.add_argument("--input", metavar="PATH", help="file with one number per line")
    p_mean.add_argument("--exponential", action="store_true", help="exponential mean instead of power mean")
    p_mean.set_defaults(func=cmd_mean)

    p_bound = sub.add_parser("bound", help="Cargo-Shisha bound K and the new bound B")
    p_bound.add_argument("--p", type=float, required=True)
    p_bound.add_argument("--q", type=float, required=True)
    p_bound.add_argument("--gamma", type=float, required=True)
    p_bound.add_argument("--format", choices=formats, default="records")
    p_bound.set_defaults(func=cmd_bound)

    p_sweep = sub.add_parser("sweep", help="tabulate sup ratio, K and B over a range of gamma")
    p_sweep.add_argument("--p", type=float, required=True)
    p_sweep.add_argument("--q", type=float, required=True)
    p_sweep.add_argument("--gamma-min", type=float, required=True)
    p_sweep.add_argument("--gamma-max", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, default=20)
    p_sweep.add_argument("--scale", choices=["linear", "log"], default="linear")
    p_sweep.add_argument("--format", choices=formats, default="csv")
    p_sweep.set_defaults(func=cmd_sweep)

    p_ext = sub.add_parser("extremal", help="gap report at one gamma, or the sharpness probe")
    p_ext.add_argument("--p", type=float, required=True)
    p_ext.add_argument("--q", type=float, required=True)
    mode = p_ext.add_mutually_exclusive_group(required=True)
    mode.add_argument("--gamma", type=float)
    mode.add_argument("--probe", metavar="T1,T2,...", help="comma-separated t values")
    p_ext.add_argument("--format", choices=formats, default="records")
    p_ext.set_defaults(func=cmd_extremal)

    p_ver = sub.add_parser("verify", help="run seeded property campaigns")
    p_ver.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or {DEFAULT_SEED}")
    p_ver.add_argument("--samples", type=int, default=1000)
    p_ver.add_argument("--property", default=None, help="property name or P1..P11; default: all")
    p_ver.add_argument("--tol", type=float, default=1e-9)
    p_ver.add_argument("--gamma-max", type=float, default=1e3)
    p_ver.add_argument("--n-max", type=int, default=16)
    p_ver.add_argument("--format", choices=formats, default="records")
    p_ver.set_defaults(func=cmd_verify)
    return parser


def _glue_negative_values(argv: Iterable[str]) -> List[str]:
    # argparse reads '--p -inf' as two options; rewrite to '--p=-inf'
    argv = list(argv)
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative_values(argv))
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
