"""Command-line front end.

Exit codes: 0 success, 1 bad arguments or domain error, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence, TextIO

from gpiq.errors import ConvergenceError, DomainError, StructuralError

SUBCOMMANDS = ("eval-g", "prob", "table", "mc", "check-identities", "plot")

EXIT_OK, EXIT_DOMAIN, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for numeric failures here
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)

    def validate(self) -> None:
        p = self.params
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        for key in ("j", "k", "n", "nmax", "trials", "workers"):
            if p.get(key) is not None and p[key] < 1:
                raise UsageError(f"--{key} must be a positive integer")
        if self.subcommand == "eval-g" and (p.get("j") is None or p.get("k") is None):
            raise UsageError("eval-g needs --j and --k")
        if self.subcommand in ("prob", "mc") and p.get("n") is None:
            raise UsageError(f"{self.subcommand} needs --n")
        if p.get("tol") is not None and not p["tol"] > 0:
            raise UsageError("--tol must be positive")
        if p.get("format") == "svg" and self.subcommand != "plot":
            raise UsageError("--format svg only applies to plot")


def _build_parser() -> _Parser:
    parser = _Parser(prog="gpiq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--out", help="write output to this file instead of stdout")

    p = sub.add_parser("eval-g", help="exact kernel entry G(j, k)")
    p.add_argument("--j", type=int)
    p.add_argument("--k", type=int)
    common(p)

    p = sub.add_parser("prob", help="one Table-1 row for N")
    p.add_argument("--n", type=int)
    common(p)

    p = sub.add_parser("table", help="CSV table for N = 1..nmax")
    p.add_argument("--nmax", type=int, default=11)
    common(p)

    p = sub.add_parser("mc", help="Monte Carlo estimate for dimension N")
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=lambda s: int(s, 0), help="overrides $GPIQ_SEED")
    p.add_argument("--workers", type=int, default=1)
    common(p)

    p = sub.add_parser("check-identities", help="verify the kernel identities")
    p.add_argument("--j", type=int, default=10, help="largest j")
    p.add_argument("--k", type=int, default=10, help="largest k")
    p.add_argument("--tol", type=float, default=1e-8)
    common(p)

    p = sub.add_parser("plot", help="exact vs asymptotic curve data or SVG")
    p.add_argument("--nmax", type=int, default=100)
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    common(p)
    return parser


def parse_config(argv: Optional[Sequence[str]]) -> RunConfig:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    params = {k: v for k, v in vars(ns).items() if k != "subcommand"}
    cfg = RunConfig(ns.subcommand, params)
    try:
        cfg.validate()
    except UsageError as exc:
        raise UsageError(f"{parser.format_usage()}gpiq {cfg.subcommand}: error: {exc}") from None
    return cfg


def _eval_g(p, out):
    from gpiq.meijer import meijer_g_jk
    from gpiq.realprob import format_sig6

    g = meijer_g_jk(p["j"], p["k"])
    out.write(f"{g.to_text()} = {format_sig6(g.to_decimal())}\n")


def _prob(p, out):
    from gpiq.realprob import TABLE_HEADER, format_sig6, prob_all_real, ratio_statistic

    n = p["n"]
    prob = prob_all_real(n)
    ratio = f"{ratio_statistic(n):.5f}" if n >= 2 else ""
    out.write(",".join(TABLE_HEADER) + "\n")
    out.write(f"{n},{prob.value.to_text(pow2=True)},{format_sig6(prob.decimal_value)},{ratio}\n")


def _table(p, out):
    from gpiq.realprob import probability_table, write_table_csv

    write_table_csv(probability_table(p["nmax"]), out)


def _mc(p, out):
    from gpiq.montecarlo import estimate_prob, write_mc_csv

    est = estimate_prob(p["n"], p["trials"], p.get("seed"), p["workers"])
    write_mc_csv([est], out)


def _check(p, out):
    from gpiq.meijer import run_identity_suite

    results = run_identity_suite(p["j"], p["k"], p["tol"])
    for r in results:
        out.write(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}\n")
    if not all(r.passed for r in results):
        raise ArithmeticError("identity check failed")


def _plot(p, out):
    from gpiq.figure import plot_data, render_svg, write_plot_csv

    points = plot_data(p["nmax"])
    if p["format"] == "svg":
        out.write(render_svg(points))
    else:
        write_plot_csv(points, out)


_HANDLERS = {
    "eval-g": _eval_g,
    "prob": _prob,
    "table": _table,
    "mc": _mc,
    "check-identities": _check,
    "plot": _plot,
}


def run(config: RunConfig, stdout: TextIO = None, stderr: TextIO = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        config.validate()
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_DOMAIN
    handler = _HANDLERS[config.subcommand]
    path = config.params.get("out")
    try:
        if path:
            with open(path, "w", newline="") as fh:
                handler(config.params, fh)
        else:
            handler(config.params, stdout)
    except DomainError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except (ConvergenceError, StructuralError, ArithmeticError) as exc:
        stderr.write(f"numeric failure: {exc}\n")
        return EXIT_NUMERIC
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_config(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_DOMAIN
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
