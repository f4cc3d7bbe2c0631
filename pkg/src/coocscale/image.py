"""Core image containers and pixel-level helpers.

Intensities are stored as double precision in the nominal range [0, 255]
(filtering produces non-integer values; quantization to 8-bit levels only
happens where an operation explicitly asks for it). All containers are
immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DimensionMismatchError(ValueError):
    """Two images that must share dimensions do not."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=np.float64, order="C", copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class ImagePlane:
    """A single channel: a 2-D grid of finite double-precision intensities."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"plane values must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"plane must be at least 1x1, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("plane values must all be finite")
        object.__setattr__(self, "values", _freeze(arr))

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @classmethod
    def constant(cls, height: int, width: int, value: float) -> "ImagePlane":
        return cls(np.full((height, width), value, dtype=np.float64))


@dataclass(frozen=True, eq=False)
class RasterImage:
    """A 1-channel (gray) or 3-channel (RGB) image; planes share dimensions."""

    planes: tuple[ImagePlane, ...]

    def __post_init__(self) -> None:
        planes = tuple(self.planes)
        if len(planes) not in (1, 3):
            raise ValueError(f"expected 1 or 3 channels, got {len(planes)}")
        w, h = planes[0].width, planes[0].height
        for p in planes[1:]:
            if p.width != w or p.height != h:
                raise DimensionMismatchError("all channels must share dimensions")
        object.__setattr__(self, "planes", planes)

    @property
    def channels(self) -> int:
        return len(self.planes)

    @property
    def height(self) -> int:
        return self.planes[0].height

    @property
    def width(self) -> int:
        return self.planes[0].width

    @classmethod
    def from_arrays(cls, *arrays: np.ndarray) -> "RasterImage":
        return cls(tuple(ImagePlane(a) for a in arrays))


def clamped_get(plane: ImagePlane, row: int, col: int) -> float:
    """Read a pixel with replicate (clamp-to-edge) boundary handling."""
    r = min(max(row, 0), plane.height - 1)
    c = min(max(col, 0), plane.width - 1)
    return float(plane.values[r, c])


def round_level(v: float) -> int:
    """Round an intensity to the nearest 8-bit level.

    Ties round half away from zero; the result is clamped to [0, 255].
    """
    if not math.isfinite(v):
        raise ValueError(f"cannot quantize non-finite intensity {v!r}")
    r = math.floor(abs(v) + 0.5)
    if v < 0:
        r = -r
    return min(255, max(0, r))


def quantize_levels(values: np.ndarray) -> np.ndarray:
    """Vectorized round_level: float intensities to int32 levels in 0..255."""
    rounded = np.floor(np.abs(values) + 0.5) * np.sign(values)
    return np.clip(rounded, 0, 255).astype(np.int32)
