"""Co-occurrence learning, co-occurrence kernel filtering, and diagnostics.

The downscaler works in three stages. A guide image is built by box
averaging and optional Gaussian smoothing. A 256x256 table then counts, for
every pixel of the input, how often each ordered pair of 8-bit levels
appears inside the (2k+1)^2 square window around it (windows are truncated
at the image border, so a border pixel simply has fewer neighbors). Finally
each output pixel is a weighted average of the input pixels in the
(2d+1)^2 window around its source patch center, the weight of a pixel being
the learned count for (guide level, pixel level). Pixels whose level never
co-occurred with the guide level get weight zero; if the whole window is
zero-weighted, a fallback value is used.

Two learning modes exist because the two natural readings of the counting
step differ: "input-pairs" draws both levels of a pair from the input image
(the default), while "guide-indexed" draws the first level from the guide
cell covering the pixel. Both produce exact integer counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import DimensionMismatchError, ImagePlane, RasterImage, quantize_levels
from .resample import DivisibilityError, GuideParams, build_guide

LEVELS = 256

MODES = ("input-pairs", "guide-indexed")
FALLBACKS = ("guide-value", "uniform-mean")


@dataclass(frozen=True, eq=False)
class CoocMatrix:
    """256x256 table of co-occurrence counts, tagged with its k and mode."""

    counts: np.ndarray
    k: int
    mode: str = "input-pairs"

    def __post_init__(self) -> None:
        arr = np.asarray(self.counts)
        if arr.shape != (LEVELS, LEVELS):
            raise ValueError(f"counts must be {LEVELS}x{LEVELS}, got {arr.shape}")
        if arr.dtype != np.uint64:
            if np.any(np.asarray(arr, dtype=np.float64) < 0):
                raise ValueError("counts must be nonnegative")
            arr = arr.astype(np.uint64)
        arr = np.array(arr, dtype=np.uint64, order="C", copy=True)
        arr.flags.writeable = False
        object.__setattr__(self, "counts", arr)
        if self.k < 1:
            raise ValueError(f"neighborhood radius must be >= 1, got {self.k}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def scaled(self, factor: int) -> "CoocMatrix":
        """A copy with every count multiplied by a positive integer."""
        if factor < 1:
            raise ValueError(f"scale factor must be a positive integer, got {factor}")
        return CoocMatrix(self.counts * np.uint64(factor), self.k, self.mode)


@dataclass(frozen=True)
class DownscaleParams:
    """Full pipeline parameters; k defaults to d and must satisfy k >= d."""

    d: int
    k: int | None = None
    sigma: float = 0.5
    mode: str = "input-pairs"
    fallback: str = "guide-value"

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError(f"downscale factor must be >= 2, got {self.d}")
        if self.k is None:
            object.__setattr__(self, "k", self.d)
        if self.k < self.d:
            raise ValueError(
                f"neighborhood radius k={self.k} must be >= downscale factor d={self.d}"
            )
        if not (self.sigma >= 0):
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.fallback not in FALLBACKS:
            raise ValueError(
                f"fallback must be one of {FALLBACKS}, got {self.fallback!r}"
            )

    def guide_params(self) -> GuideParams:
        return GuideParams(self.d, self.sigma)


def learn_cooccurrence(
    plane: ImagePlane,
    k: int,
    mode: str = "input-pairs",
    guide: ImagePlane | None = None,
) -> CoocMatrix:
    """Count level pairs over the truncated (2k+1)^2 window of every pixel.

    In "input-pairs" mode the pair for pixel i and window member j is
    (level(f(i)), level(f(j))). In "guide-indexed" mode the first entry is
    the level of the guide cell covering i; the guide must measure exactly
    (height/d, width/d) for the integer d implied by its shape.

    The counting loop is decomposed by window offset: for each of the
    (2k+1)^2 offsets, one vectorized histogram pass accumulates all pixel
    pairs that keep both ends in bounds. Partial tables merge by integer
    addition, so any work partitioning yields identical counts.
    """
    if k < 1:
        raise ValueError(f"neighborhood radius must be >= 1, got {k}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")

    levels = quantize_levels(plane.values)
    if mode == "guide-indexed":
        first = _expand_guide_levels(plane, guide)
    else:
        first = levels

    h, w = levels.shape
    counts = np.zeros(LEVELS * LEVELS, dtype=np.uint64)
    for dy in range(-k, k + 1):
        r0, r1 = max(0, -dy), h - max(0, dy)
        if r0 >= r1:
            continue
        for dx in range(-k, k + 1):
            c0, c1 = max(0, -dx), w - max(0, dx)
            if c0 >= c1:
                continue
            a = first[r0:r1, c0:c1]
            b = levels[r0 + dy : r1 + dy, c0 + dx : c1 + dx]
            pairs = (a << 8) | b
            counts += np.bincount(
                pairs.ravel(), minlength=LEVELS * LEVELS
            ).astype(np.uint64)
    return CoocMatrix(counts.reshape(LEVELS, LEVELS), k, mode)


def _expand_guide_levels(plane: ImagePlane, guide: ImagePlane | None) -> np.ndarray:
    if guide is None:
        raise ValueError("guide-indexed learning requires a guide image")
    if plane.height % guide.height or plane.width % guide.width:
        raise DimensionMismatchError(
            f"guide {guide.width}x{guide.height} does not tile input "
            f"{plane.width}x{plane.height}"
        )
    d = plane.height // guide.height
    if d < 1 or plane.width // guide.width != d:
        raise DimensionMismatchError(
            f"guide {guide.width}x{guide.height} implies inconsistent factors for "
            f"input {plane.width}x{plane.height}"
        )
    glv = quantize_levels(guide.values)
    return np.repeat(np.repeat(glv, d, axis=0), d, axis=1)


def cooc_filter(
    plane: ImagePlane,
    guide: ImagePlane,
    cooc: CoocMatrix,
    d: int,
    fallback: str = "guide-value",
) -> ImagePlane:
    """Weighted-average each output pixel over the window around its patch center.

    Output pixel (r, c) reads the window of radius d around input position
    (r*d + d//2, c*d + d//2), truncated at the border. Each window pixel j
    contributes weight counts[guide level at (r, c), level(f(j))]. If every
    weight is zero the fallback applies: the guide value itself, or the
    unweighted mean of the window.
    """
    if fallback not in FALLBACKS:
        raise ValueError(f"fallback must be one of {FALLBACKS}, got {fallback!r}")
    if d < 2:
        raise ValueError(f"downscale factor must be >= 2, got {d}")
    h, w = plane.height, plane.width
    if guide.height * d != h or guide.width * d != w:
        raise DimensionMismatchError(
            f"guide {guide.width}x{guide.height} does not match input "
            f"{plane.width}x{plane.height} at factor {d}"
        )

    values = plane.values
    levels = quantize_levels(values)
    guide_values = guide.values
    guide_levels = quantize_levels(guide_values)
    weights_lut = cooc.counts.astype(np.float64)

    m, n = guide.height, guide.width
    center_r = np.arange(m) * d + d // 2
    center_c = np.arange(n) * d + d // 2

    # Deviation-form accumulation around the guide value: the quotient
    # guide + sum(w * (f - guide)) / sum(w) equals the plain weighted mean
    # but returns the guide value exactly when all window pixels equal it.
    dev_sum = np.zeros((m, n))
    weight_sum = np.zeros((m, n))
    plain_sum = np.zeros((m, n))
    member_count = np.zeros((m, n))

    for dy in range(-d, d + 1):
        rows = center_r + dy
        rmask = (rows >= 0) & (rows < h)
        ridx = rows[rmask]
        if ridx.size == 0:
            continue
        for dx in range(-d, d + 1):
            cols = center_c + dx
            cmask = (cols >= 0) & (cols < w)
            cidx = cols[cmask]
            if cidx.size == 0:
                continue
            grid = np.ix_(rmask, cmask)
            vals = values[np.ix_(ridx, cidx)]
            wgt = weights_lut[guide_levels[grid], levels[np.ix_(ridx, cidx)]]
            dev_sum[grid] += wgt * (vals - guide_values[grid])
            weight_sum[grid] += wgt
            plain_sum[grid] += vals
            member_count[grid] += 1.0

    out = np.empty((m, n))
    covered = weight_sum > 0
    np.divide(dev_sum, weight_sum, out=out, where=covered)
    out[covered] += guide_values[covered]
    empty = ~covered
    if fallback == "guide-value":
        out[empty] = guide_values[empty]
    else:
        out[empty] = plain_sum[empty] / member_count[empty]
    return ImagePlane(out)


def downscale_plane(plane: ImagePlane, params: DownscaleParams) -> ImagePlane:
    """Guide construction, co-occurrence learning, and filtering for one channel."""
    guide = build_guide(plane, params.guide_params())
    cooc = learn_cooccurrence(plane, params.k, params.mode, guide)
    return cooc_filter(plane, guide, cooc, params.d, params.fallback)


def downscale_cooc(img: RasterImage, params: DownscaleParams) -> RasterImage:
    """Run the full pipeline on each channel independently."""
    for plane in img.planes:
        if plane.height % params.d or plane.width % params.d:
            raise DivisibilityError(
                f"{img.width}x{img.height} is not divisible by factor {params.d}"
            )
    return RasterImage(tuple(downscale_plane(p, params) for p in img.planes))


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelReport:
    """Summary of the similarity-kernel properties of a count table.

    Positivity holds by construction. Symmetry, positive definiteness, and
    the Cauchy-Schwarz inequality counts(a,b)^2 <= counts(a,a)*counts(b,b)
    are empirical: real count tables can violate the latter two, so they are
    reported, not asserted.
    """

    positivity: bool
    symmetry_deviation: int
    min_eigenvalue: float
    cauchy_schwarz_violation_fraction: float
    occupied_levels: int


def kernel_diagnostics(cooc: CoocMatrix) -> KernelReport:
    """Measure symmetry, extremal eigenvalue, and Cauchy-Schwarz violations.

    The eigenvalue is the smallest of the symmetric part of the table
    restricted to occupied levels, estimated iteratively to 1e-6 relative
    tolerance.
    """
    counts = cooc.counts
    signed = counts.astype(np.int64)
    symmetry_deviation = int(np.abs(signed - signed.T).max())

    row_occ = counts.any(axis=1)
    col_occ = counts.any(axis=0)
    occupied = np.flatnonzero(row_occ | col_occ)
    if occupied.size == 0:
        return KernelReport(True, symmetry_deviation, 0.0, 0.0, 0)

    sub = counts[np.ix_(occupied, occupied)].astype(np.float64)
    sym = (sub + sub.T) / 2.0
    min_eig = _min_eigenvalue_estimate(sym)

    violations = 0
    pairs = 0
    rows, cols = np.nonzero(counts)
    for a, b in zip(rows.tolist(), cols.tolist()):
        pairs += 1
        cab = int(counts[a, b])
        if cab * cab > int(counts[a, a]) * int(counts[b, b]):
            violations += 1
    fraction = violations / pairs if pairs else 0.0

    return KernelReport(True, symmetry_deviation, min_eig, fraction, occupied.size)


def _min_eigenvalue_estimate(
    sym: np.ndarray, rel_tol: float = 1e-6, max_iter: int = 20000
) -> float:
    """Smallest eigenvalue of a symmetric matrix by shifted power iteration.

    A Gershgorin bound gives a shift s with s*I - A positive semidefinite;
    power iteration then finds the dominant eigenvalue of the shifted matrix,
    which maps back to the smallest of A.
    """
    n = sym.shape[0]
    if n == 1:
        return float(sym[0, 0])
    shift = float(np.abs(sym).sum(axis=1).max())
    shifted = shift * np.eye(n) - sym

    rng = np.random.default_rng(0)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    mu = shift
    for _ in range(max_iter):
        bv = shifted @ v
        norm = np.linalg.norm(bv)
        if norm == 0.0:
            # shifted matrix annihilates v: v is an exact null vector, so the
            # dominant eigenvalue estimate below would stall at 0. The shift
            # itself is then an eigenvalue of sym attained at v.
            return shift
        v = bv / norm
        bv = shifted @ v
        mu = float(v @ bv)
        # For symmetric matrices the residual norm bounds the distance from
        # mu to the true spectrum, which makes this a real error criterion
        # rather than a stagnation test.
        if float(np.linalg.norm(bv - mu * v)) <= rel_tol * max(shift, 1e-300):
            break
    return shift - mu


# ---------------------------------------------------------------------------
# Count-table serialization
# ---------------------------------------------------------------------------


def write_counts_text(cooc: CoocMatrix, path) -> None:
    """Dump the table as 256 lines of 256 space-separated decimal counts."""
    with open(path, "w", encoding="ascii") as fh:
        for row in cooc.counts:
            fh.write(" ".join(str(int(c)) for c in row))
            fh.write("\n")


def counts_heatmap(cooc: CoocMatrix) -> ImagePlane:
    """Log-scaled 8-bit rendering: level = round(255 * ln(1+c) / ln(1+max))."""
    counts = cooc.counts.astype(np.float64)
    peak = counts.max()
    if peak <= 0:
        return ImagePlane(np.zeros((LEVELS, LEVELS)))
    scaled = 255.0 * np.log1p(counts) / np.log1p(peak)
    return ImagePlane(np.floor(scaled + 0.5))
