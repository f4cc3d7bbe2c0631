"""Matplotlib renderings written next to the delimited reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bench import BenchRow
from .metrics import QualityReport


def render_compare_figure(report: QualityReport, path) -> None:
    """Bar chart of gradient energy per method, PSNR annotated where present."""
    methods = [row.method for row in report.rows]
    energies = [row.gradient_energy for row in report.rows]

    fig, ax = plt.subplots(figsize=(7, 4))
    bars = ax.bar(methods, energies, color="#4878a8")
    ax.set_ylabel("gradient energy")
    ax.set_title("high-frequency content of downscaled outputs")
    for bar, row in zip(bars, report.rows):
        if row.psnr_db is None:
            continue
        label = "PSNR inf" if row.psnr_db == float("inf") else f"{row.psnr_db:.1f} dB"
        ax.annotate(
            label,
            xy=(bar.get_x() + bar.get_width() / 2, bar.get_height()),
            xytext=(0, 3),
            textcoords="offset points",
            ha="center",
            fontsize=8,
        )
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_bench_figure(rows: list[BenchRow], path) -> None:
    """Log-log stage timings against pixel count, with an ideal-linear guide."""
    pixels = [row.pixels for row in rows]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.loglog(pixels, [r.learn_ms for r in rows], "o-", label="learning")
    ax.loglog(pixels, [r.filter_ms for r in rows], "s-", label="filtering")
    ax.loglog(pixels, [r.total_ms for r in rows], "^--", label="total")
    if len(rows) > 1:
        anchor = rows[0]
        ax.loglog(
            pixels,
            [anchor.total_ms * p / anchor.pixels for p in pixels],
            ":",
            color="gray",
            label="ideal linear",
        )
    ax.set_xlabel("pixels")
    ax.set_ylabel("median time (ms)")
    ax.set_title(f"stage timings, d={rows[0].d}, k={rows[0].k}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
