"""Exact p_{N,N} against the leading large-N form (pi/4)^(N^2/2) on a log scale."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence, TextIO

from gpiq.realprob import asymptotic_log, probability_table

PLOT_HEADER = ("N", "log10_p_exact", "log10_p_asymptotic")


@dataclass(frozen=True)
class PlotPoint:
    n: int
    log10_exact: float
    log10_asymptotic: float


def plot_data(n_max: int) -> list[PlotPoint]:
    rows = probability_table(n_max)
    return [
        PlotPoint(r.n, r.probability.log10, asymptotic_log(r.n) / math.log(10)) for r in rows
    ]


def write_plot_csv(points: Sequence[PlotPoint], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(PLOT_HEADER)
    for p in points:
        writer.writerow([p.n, f"{p.log10_exact:.6f}", f"{p.log10_asymptotic:.6f}"])


def render_svg(points: Sequence[PlotPoint]) -> str:
    """Self-contained SVG (text drawn as paths), byte-identical across runs."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ns = [p.n for p in points]
    with matplotlib.rc_context({"svg.hashsalt": "gpiq", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        # plotted as powers of ten so the axis reads as a log scale down to 1e-500
        ax.plot(ns, [p.log10_exact for p in points], "o", ms=3, label=r"exact $p_{N,N}^{XY}$")
        ax.plot(ns, [p.log10_asymptotic for p in points], "-", lw=1.2,
                label=r"$(\pi/4)^{N^2/2}$")
        ax.set_xlabel("N")
        ax.set_ylabel(r"$\log_{10}$ probability")
        ax.yaxis.set_major_formatter(
            matplotlib.ticker.FuncFormatter(lambda v, _: f"$10^{{{int(round(v))}}}$")
        )
        ax.legend()
        fig.tight_layout()
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()
