"""Classic downscalers and the box+Gaussian guide construction.

Bicubic and Lanczos scale their kernel support with the downscale factor
(antialiased downscaling) and renormalize the tap weights of every output
pixel to sum to one. Weighted sums are evaluated in deviation form around a
reference tap, which keeps constant planes constant to the last bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .image import ImagePlane


class DivisibilityError(ValueError):
    """Image dimensions are not a multiple of the downscale factor."""


@dataclass(frozen=True)
class GuideParams:
    """Guide construction parameters: factor d and Gaussian sigma (0 = off)."""

    d: int
    sigma: float = 0.5

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError(f"downscale factor must be >= 2, got {self.d}")
        if not (self.sigma >= 0):
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")


def _check_divisible(plane: ImagePlane, d: int) -> None:
    if d < 2:
        raise ValueError(f"downscale factor must be >= 2, got {d}")
    if plane.height % d or plane.width % d:
        raise DivisibilityError(
            f"{plane.width}x{plane.height} is not divisible by factor {d}"
        )


def box_downscale(plane: ImagePlane, d: int) -> ImagePlane:
    """Average each d x d patch into one output pixel."""
    _check_divisible(plane, d)
    m, n = plane.height // d, plane.width // d
    patches = plane.values.reshape(m, d, n, d)
    return ImagePlane(patches.mean(axis=(1, 3)))


def subsample_downscale(plane: ImagePlane, d: int) -> ImagePlane:
    """Keep the top-left pixel of each d x d patch."""
    _check_divisible(plane, d)
    return ImagePlane(plane.values[::d, ::d])


def catmull_rom(x: float) -> float:
    """Cubic convolution kernel with a = -0.5 (Catmull-Rom)."""
    ax = abs(x)
    if ax <= 1.0:
        return (1.5 * ax - 2.5) * ax * ax + 1.0
    if ax < 2.0:
        return ((-0.5 * ax + 2.5) * ax - 4.0) * ax + 2.0
    return 0.0


def lanczos3(x: float) -> float:
    """Lanczos kernel, 3 lobes: sinc(x) * sinc(x/3) for |x| < 3."""
    ax = abs(x)
    if ax < 1e-12:
        return 1.0
    if ax >= 3.0:
        return 0.0
    px = math.pi * x
    return 3.0 * math.sin(px) * math.sin(px / 3.0) / (px * px)


def _axis_taps(
    length: int, d: int, kernel: Callable[[float], float], support: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Clamped tap indices, normalized weights, and reference tap per output pixel.

    Output pixel r is centered at x = r*d + (d-1)/2 in input coordinates and
    the kernel is stretched by d: weight(j) = kernel((j - x) / d).
    """
    m = length // d
    radius = support * d
    # The fractional center offset is the same for every output pixel, so one
    # weight row serves all of them; only the clamping differs.
    half = (d - 1) / 2.0
    lo = math.ceil(half - radius)
    hi = math.floor(half + radius)
    offsets = np.arange(lo, hi + 1)
    weights = np.array([kernel((o - half) / d) for o in offsets], dtype=np.float64)
    weights /= weights.sum()

    starts = np.arange(m)[:, None] * d
    idx = np.clip(starts + offsets[None, :], 0, length - 1)
    w = np.broadcast_to(weights, idx.shape)
    ref = np.clip(starts[:, 0] + int(round(half)), 0, length - 1)
    return idx, w, ref


def _apply_axis_taps(
    values: np.ndarray, idx: np.ndarray, w: np.ndarray, ref: np.ndarray
) -> np.ndarray:
    """Weighted resampling along axis 0 in deviation form around the ref tap."""
    base = values[ref, :]
    acc = np.zeros_like(base)
    for t in range(idx.shape[1]):
        acc += w[:, t : t + 1] * (values[idx[:, t], :] - base)
    return base + acc


def _separable_downscale(
    plane: ImagePlane, d: int, kernel: Callable[[float], float], support: float
) -> ImagePlane:
    _check_divisible(plane, d)
    rows = _axis_taps(plane.height, d, kernel, support)
    cols = _axis_taps(plane.width, d, kernel, support)
    out = _apply_axis_taps(plane.values, *rows)
    out = _apply_axis_taps(out.T, *cols).T
    return ImagePlane(out)


def bicubic_downscale(plane: ImagePlane, d: int) -> ImagePlane:
    """Separable Catmull-Rom downscaling with kernel support scaled by d."""
    return _separable_downscale(plane, d, catmull_rom, 2.0)


def lanczos_downscale(plane: ImagePlane, d: int) -> ImagePlane:
    """Separable Lanczos-3 downscaling with kernel support scaled by d."""
    return _separable_downscale(plane, d, lanczos3, 3.0)


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian taps truncated at radius ceil(3*sigma)."""
    radius = math.ceil(3.0 * sigma)
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(t * t) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_convolve(plane: ImagePlane, sigma: float) -> ImagePlane:
    """Same-size separable Gaussian smoothing with replicate boundary."""
    if not (sigma >= 0):
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return plane
    kernel = gaussian_kernel(sigma)
    radius = (len(kernel) - 1) // 2

    def one_axis(values: np.ndarray) -> np.ndarray:
        padded = np.pad(values, ((radius, radius), (0, 0)), mode="edge")
        n = values.shape[0]
        acc = np.zeros_like(values)
        for t, wt in enumerate(kernel):
            if t == radius:
                continue
            acc += wt * (padded[t : t + n, :] - values)
        return values + acc

    out = one_axis(plane.values)
    out = one_axis(out.T).T
    return ImagePlane(out)


def build_guide(plane: ImagePlane, params: GuideParams) -> ImagePlane:
    """Box-downscale then Gaussian-smooth: the guide for kernel filtering."""
    return gaussian_convolve(box_downscale(plane, params.d), params.sigma)
