"""Quality metrics, the comparison report, and synthetic test signals."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .image import DimensionMismatchError, ImagePlane, RasterImage


def psnr(a: ImagePlane, b: ImagePlane) -> float:
    """Peak signal-to-noise ratio in dB against a 255 peak; inf if identical."""
    if a.height != b.height or a.width != b.width:
        raise DimensionMismatchError(
            f"psnr needs equal dimensions, got {a.width}x{a.height} "
            f"vs {b.width}x{b.height}"
        )
    mse = float(np.mean((a.values - b.values) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 * 255.0 / mse)


def psnr_image(a: RasterImage, b: RasterImage) -> float:
    """PSNR over all channels (MSE pooled before the log)."""
    if a.channels != b.channels:
        raise DimensionMismatchError(
            f"channel mismatch: {a.channels} vs {b.channels}"
        )
    if a.height != b.height or a.width != b.width:
        raise DimensionMismatchError("psnr needs equal dimensions")
    mse = float(
        np.mean([np.mean((pa.values - pb.values) ** 2) for pa, pb in zip(a.planes, b.planes)])
    )
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 * 255.0 / mse)


def gradient_energy(plane: ImagePlane) -> float:
    """Mean squared forward difference; zero only for a constant plane."""
    if plane.height < 2 and plane.width < 2:
        raise ValueError("gradient energy is undefined for a 1x1 plane")
    v = plane.values
    gx = np.diff(v, axis=1)
    gy = np.diff(v, axis=0)
    return float((np.sum(gx * gx) + np.sum(gy * gy)) / v.size)


def gradient_energy_image(img: RasterImage) -> float:
    """Mean of the per-channel gradient energies."""
    return float(np.mean([gradient_energy(p) for p in img.planes]))


def radial_chirp(width: int, height: int, rate: float) -> ImagePlane:
    """Concentric rings whose spatial frequency grows with radius.

    value(x, y) = 127.5 * (1 + cos(rate * r^2)), r measured from the image
    center ((height-1)/2, (width-1)/2).
    """
    if width < 1 or height < 1:
        raise ValueError("chirp dimensions must be >= 1")
    if not rate > 0:
        raise ValueError(f"chirp rate must be > 0, got {rate}")
    cy, cx = (height - 1) / 2.0, (width - 1) / 2.0
    y = np.arange(height)[:, None] - cy
    x = np.arange(width)[None, :] - cx
    r2 = y * y + x * x
    return ImagePlane(127.5 * (1.0 + np.cos(rate * r2)))


# ---------------------------------------------------------------------------
# Quality report
# ---------------------------------------------------------------------------

_CSV_FIELDS = (
    "method",
    "width",
    "height",
    "time_ms",
    "gradient_energy",
    "psnr_db",
    "psnr_reference",
)


@dataclass
class QualityRow:
    """One method's measurements in a comparison run."""

    method: str
    width: int
    height: int
    time_ms: float
    gradient_energy: float
    psnr_db: float | None = None
    psnr_reference: str | None = None

    def record(self) -> dict:
        psnr_db = self.psnr_db
        if psnr_db is not None and math.isinf(psnr_db):
            psnr_db = "inf"
        return {
            "method": self.method,
            "width": self.width,
            "height": self.height,
            "time_ms": self.time_ms,
            "gradient_energy": self.gradient_energy,
            "psnr_db": psnr_db,
            "psnr_reference": self.psnr_reference,
        }


@dataclass
class QualityReport:
    """Per-method metric rows; serializes to CSV (header row) and JSON (array)."""

    rows: list[QualityRow] = field(default_factory=list)

    def add(self, row: QualityRow) -> None:
        self.rows.append(row)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="ascii") as fh:
            writer = csv.DictWriter(fh, fieldnames=_CSV_FIELDS)
            writer.writeheader()
            for row in self.rows:
                rec = row.record()
                writer.writerow({k: ("" if rec[k] is None else rec[k]) for k in _CSV_FIELDS})

    def write_json(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            json.dump([row.record() for row in self.rows], fh, indent=2)
            fh.write("\n")
