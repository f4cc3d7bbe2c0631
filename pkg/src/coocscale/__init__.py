"""Content-adaptive image downscaling built on pixel co-occurrence statistics.

The headline operation learns how often pairs of intensity levels appear
near each other in the input, then uses those counts as filter weights so
that frequently co-occurring (i.e. perceptually dominant) structures
survive the resolution drop. Classic box, subsample, bicubic, and Lanczos
reducers are included for comparison, along with quality metrics, count
table diagnostics, and a timing harness.
"""

from .bench import BenchRow, measure_scaling, write_bench_csv
from .cooc import (
    CoocMatrix,
    DownscaleParams,
    FALLBACKS,
    KernelReport,
    LEVELS,
    MODES,
    cooc_filter,
    counts_heatmap,
    downscale_cooc,
    downscale_plane,
    kernel_diagnostics,
    learn_cooccurrence,
    write_counts_text,
)
from .image import (
    DimensionMismatchError,
    ImagePlane,
    RasterImage,
    clamped_get,
    quantize_levels,
    round_level,
)
from .io import (
    DimensionOverflowError,
    FormatMismatchError,
    ImageIOError,
    TruncatedStreamError,
    UnsupportedFormatError,
    load_image,
    save_image,
)
from .metrics import (
    QualityReport,
    QualityRow,
    gradient_energy,
    gradient_energy_image,
    psnr,
    psnr_image,
    radial_chirp,
)
from .resample import (
    DivisibilityError,
    GuideParams,
    bicubic_downscale,
    box_downscale,
    build_guide,
    gaussian_convolve,
    gaussian_kernel,
    lanczos_downscale,
    subsample_downscale,
)

__version__ = "0.1.0"

__all__ = [
    "BenchRow",
    "CoocMatrix",
    "DimensionMismatchError",
    "DimensionOverflowError",
    "DivisibilityError",
    "DownscaleParams",
    "FALLBACKS",
    "FormatMismatchError",
    "GuideParams",
    "ImageIOError",
    "ImagePlane",
    "KernelReport",
    "LEVELS",
    "MODES",
    "QualityReport",
    "QualityRow",
    "RasterImage",
    "TruncatedStreamError",
    "UnsupportedFormatError",
    "bicubic_downscale",
    "box_downscale",
    "build_guide",
    "clamped_get",
    "cooc_filter",
    "counts_heatmap",
    "downscale_cooc",
    "downscale_plane",
    "gaussian_convolve",
    "gaussian_kernel",
    "gradient_energy",
    "gradient_energy_image",
    "kernel_diagnostics",
    "lanczos_downscale",
    "learn_cooccurrence",
    "load_image",
    "measure_scaling",
    "psnr",
    "psnr_image",
    "quantize_levels",
    "radial_chirp",
    "round_level",
    "save_image",
    "subsample_downscale",
    "write_bench_csv",
    "write_counts_text",
]
