"""Independent reference implementations used to cross-check the library.

Everything here is written as literal, loop-based evaluation of the
defining formulas, trading speed for obviousness. The library must agree
with these within the tolerances asserted by the tests; the two code paths
share no helpers beyond round_level.
"""

from __future__ import annotations

import numpy as np

from coocscale.image import round_level

LEVELS = 256


def cooc_counts_oracle(
    values: np.ndarray, k: int, first_levels: np.ndarray | None = None
) -> np.ndarray:
    """Quadruple-loop co-occurrence counting with border-truncated windows.

    `first_levels`, when given, supplies the first pair entry per pixel
    (the guide-indexed variant); otherwise the pixel's own level is used.
    """
    h, w = values.shape
    own = np.array([[round_level(float(v)) for v in row] for row in values])
    first = own if first_levels is None else first_levels
    counts = np.zeros((LEVELS, LEVELS), dtype=np.int64)
    for r in range(h):
        for c in range(w):
            a = first[r, c]
            for rr in range(max(0, r - k), min(h - 1, r + k) + 1):
                for cc in range(max(0, c - k), min(w - 1, c + k) + 1):
                    counts[a, own[rr, cc]] += 1
    return counts


def expand_guide_levels_oracle(guide_values: np.ndarray, d: int) -> np.ndarray:
    """Per input pixel, the level of the guide cell covering it."""
    gh, gw = guide_values.shape
    out = np.zeros((gh * d, gw * d), dtype=np.int64)
    for r in range(gh * d):
        for c in range(gw * d):
            out[r, c] = round_level(float(guide_values[r // d, c // d]))
    return out


def cooc_filter_oracle(
    values: np.ndarray,
    guide_values: np.ndarray,
    counts: np.ndarray,
    d: int,
    fallback: str = "guide-value",
) -> np.ndarray:
    """Per-pixel weighted aggregation over the truncated window around the
    patch center, with explicit zero-weight fallback handling."""
    h, w = values.shape
    m, n = guide_values.shape
    out = np.zeros((m, n))
    for r in range(m):
        for c in range(n):
            a = round_level(float(guide_values[r, c]))
            cy, cx = r * d + d // 2, c * d + d // 2
            p = 0.0
            q = 0.0
            plain = 0.0
            members = 0
            for rr in range(max(0, cy - d), min(h - 1, cy + d) + 1):
                for cc in range(max(0, cx - d), min(w - 1, cx + d) + 1):
                    v = float(values[rr, cc])
                    wgt = float(counts[a, round_level(v)])
                    p += wgt * v
                    q += wgt
                    plain += v
                    members += 1
            if q > 0.0:
                out[r, c] = p / q
            elif fallback == "guide-value":
                out[r, c] = guide_values[r, c]
            else:
                out[r, c] = plain / members
    return out


def window_bounds_oracle(
    values: np.ndarray, d: int, m: int, n: int
) -> tuple[np.ndarray, np.ndarray]:
    """Min and max of each output pixel's truncated filter window."""
    h, w = values.shape
    lo = np.zeros((m, n))
    hi = np.zeros((m, n))
    for r in range(m):
        for c in range(n):
            cy, cx = r * d + d // 2, c * d + d // 2
            block = values[
                max(0, cy - d) : min(h - 1, cy + d) + 1,
                max(0, cx - d) : min(w - 1, cx + d) + 1,
            ]
            lo[r, c] = block.min()
            hi[r, c] = block.max()
    return lo, hi


def box_oracle(values: np.ndarray, d: int) -> np.ndarray:
    h, w = values.shape
    out = np.zeros((h // d, w // d))
    for r in range(h // d):
        for c in range(w // d):
            out[r, c] = values[r * d : (r + 1) * d, c * d : (c + 1) * d].mean()
    return out


def separable_2d_oracle(values: np.ndarray, d: int, kernel, support: float) -> np.ndarray:
    """Direct 2-D evaluation of a d-scaled kernel with replicate reads.

    The 2-D weight of tap (j_r, j_c) for output (r, c) is the product of the
    two axis kernels; weights are normalized jointly over the whole window,
    which matches per-axis normalization because the window is a product set.
    """
    import math

    h, w = values.shape
    m, n = h // d, w // d
    half = (d - 1) / 2.0
    radius = support * d
    lo = math.ceil(half - radius)
    hi = math.floor(half + radius)
    offsets = list(range(lo, hi + 1))
    out = np.zeros((m, n))
    for r in range(m):
        for c in range(n):
            acc = 0.0
            wsum = 0.0
            for oy in offsets:
                wy = kernel((oy - half) / d)
                ry = min(max(r * d + oy, 0), h - 1)
                for ox in offsets:
                    wgt = wy * kernel((ox - half) / d)
                    cx = min(max(c * d + ox, 0), w - 1)
                    acc += wgt * values[ry, cx]
                    wsum += wgt
            out[r, c] = acc / wsum
    return out


def gaussian_2d_oracle(values: np.ndarray, sigma: float) -> np.ndarray:
    """Direct 2-D Gaussian smoothing with replicate reads, radius ceil(3*sigma)."""
    import math

    if sigma == 0:
        return values.copy()
    radius = math.ceil(3.0 * sigma)
    taps = [math.exp(-(t * t) / (2.0 * sigma * sigma)) for t in range(-radius, radius + 1)]
    norm = sum(taps)
    taps = [t / norm for t in taps]
    h, w = values.shape
    out = np.zeros((h, w))
    for r in range(h):
        for c in range(w):
            acc = 0.0
            for dy in range(-radius, radius + 1):
                wy = taps[dy + radius]
                ry = min(max(r + dy, 0), h - 1)
                for dx in range(-radius, radius + 1):
                    cx = min(max(c + dx, 0), w - 1)
                    acc += wy * taps[dx + radius] * values[ry, cx]
            out[r, c] = acc
    return out


def min_eigenvalue_oracle(counts: np.ndarray) -> float:
    """Smallest eigenvalue of the symmetrized occupied submatrix, via LAPACK."""
    occ = np.flatnonzero(counts.any(axis=1) | counts.any(axis=0))
    sub = counts[np.ix_(occ, occ)].astype(np.float64)
    sym = (sub + sub.T) / 2.0
    return float(np.linalg.eigvalsh(sym)[0])


def cs_violation_oracle(counts: np.ndarray) -> float:
    """Fraction of occupied (a,b) pairs violating C(a,b)^2 <= C(a,a)*C(b,b)."""
    violations = 0
    pairs = 0
    for a in range(LEVELS):
        for b in range(LEVELS):
            cab = int(counts[a, b])
            if cab == 0:
                continue
            pairs += 1
            if cab * cab > int(counts[a, a]) * int(counts[b, b]):
                violations += 1
    return violations / pairs if pairs else 0.0


def total_count_closed_form(h: int, w: int, k: int) -> int:
    """Sum of truncated window sizes: separable row-span and column-span sums."""
    row_span = sum(min(h - 1, r + k) - max(0, r - k) + 1 for r in range(h))
    col_span = sum(min(w - 1, c + k) - max(0, c - k) + 1 for c in range(w))
    return row_span * col_span
