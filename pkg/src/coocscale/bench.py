"""Timing harness for the learning and filtering stages.

Synthesizes random planes at the requested sizes, times co-occurrence
learning and kernel filtering separately, and reports per-stage medians so
scaling in pixel count and window radius can be checked.
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass

import numpy as np

from .cooc import cooc_filter, learn_cooccurrence
from .image import ImagePlane
from .resample import GuideParams, build_guide

_CSV_FIELDS = (
    "width",
    "height",
    "pixels",
    "d",
    "k",
    "repeats",
    "learn_ms",
    "filter_ms",
    "total_ms",
)


@dataclass(frozen=True)
class BenchRow:
    """Median stage timings for one synthesized image size."""

    width: int
    height: int
    d: int
    k: int
    repeats: int
    learn_ms: float
    filter_ms: float

    @property
    def pixels(self) -> int:
        return self.width * self.height

    @property
    def total_ms(self) -> float:
        return self.learn_ms + self.filter_ms


def measure_scaling(
    sizes: list[int],
    d: int = 2,
    k: int | None = None,
    repeats: int = 3,
    seed: int = 1234,
) -> list[BenchRow]:
    """Time learning and filtering on random square planes of the given sizes.

    Each size is a side length and must be divisible by d. Medians over
    `repeats` runs are reported per stage; guide construction is excluded
    from both timers.
    """
    if not sizes:
        raise ValueError("size list must be nonempty")
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    if k is None:
        k = d
    if k < 1 or d < 2:
        raise ValueError(f"invalid bench parameters d={d}, k={k}")

    rng = np.random.default_rng(seed)
    rows = []
    for side in sizes:
        if side < d or side % d:
            raise ValueError(f"bench size {side} is not divisible by factor {d}")
        plane = ImagePlane(rng.integers(0, 256, size=(side, side)).astype(np.float64))
        guide = build_guide(plane, GuideParams(d, 0.5))

        learn_times = []
        filter_times = []
        cooc = learn_cooccurrence(plane, k)
        for _ in range(repeats):
            t0 = time.perf_counter()
            cooc = learn_cooccurrence(plane, k)
            t1 = time.perf_counter()
            cooc_filter(plane, guide, cooc, d)
            t2 = time.perf_counter()
            learn_times.append((t1 - t0) * 1e3)
            filter_times.append((t2 - t1) * 1e3)

        rows.append(
            BenchRow(
                width=side,
                height=side,
                d=d,
                k=k,
                repeats=repeats,
                learn_ms=statistics.median(learn_times),
                filter_ms=statistics.median(filter_times),
            )
        )
    return rows


def write_bench_csv(rows: list[BenchRow], path) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CSV_FIELDS)
        for row in rows:
            writer.writerow(
                [
                    row.width,
                    row.height,
                    row.pixels,
                    row.d,
                    row.k,
                    row.repeats,
                    f"{row.learn_ms:.3f}",
                    f"{row.filter_ms:.3f}",
                    f"{row.total_ms:.3f}",
                ]
            )
