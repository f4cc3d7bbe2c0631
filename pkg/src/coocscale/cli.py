"""Command-line interface: downscale, compare, bench, and diagnose subcommands.

Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 dimension
error. Unless --quiet is given, results are printed as machine-parseable
key=value lines.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path

from .bench import measure_scaling, write_bench_csv
from .cooc import (
    DownscaleParams,
    FALLBACKS,
    MODES,
    counts_heatmap,
    downscale_cooc,
    kernel_diagnostics,
    learn_cooccurrence,
    write_counts_text,
)
from .image import DimensionMismatchError, ImagePlane, RasterImage
from .io import FormatMismatchError, ImageIOError, load_image, save_image
from .metrics import QualityReport, QualityRow, gradient_energy_image, psnr_image
from .resample import (
    DivisibilityError,
    GuideParams,
    bicubic_downscale,
    box_downscale,
    build_guide,
    lanczos_downscale,
    subsample_downscale,
)

CLASSIC_METHODS = {
    "box": box_downscale,
    "subsample": subsample_downscale,
    "bicubic": bicubic_downscale,
    "lanczos": lanczos_downscale,
}
METHODS = ("cooc", "box", "subsample", "bicubic", "lanczos")


class CliConfigError(Exception):
    """Invalid flags or flag combinations."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise CliConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="coocscale",
        description="Detail-preserving image downscaling via co-occurrence "
        "kernel filtering.",
        epilog="exit codes: 0 ok, 1 config error, 2 I/O error, 3 dimension error",
    )
    common = _Parser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="suppress stdout")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("downscale", parents=[common], help="downscale one image")
    p.add_argument("-i", "--input", required=True, help="input image (PNG/PNM)")
    p.add_argument("-o", "--output", required=True, help="output image path")
    p.add_argument("-d", "--factor", type=int, required=True, help="downscale factor")
    p.add_argument("-k", "--radius", type=int, help="co-occurrence radius (default d)")
    p.add_argument("--sigma", type=float, default=0.5, help="guide smoothing sigma")
    p.add_argument("--method", choices=METHODS, default="cooc")
    p.add_argument("--mode", choices=MODES, default="input-pairs")
    p.add_argument("--fallback", choices=FALLBACKS, default="guide-value")
    p.add_argument("--crop", action="store_true", help="center-crop to a multiple of d")
    p.set_defaults(handler=run_downscale)

    p = sub.add_parser("compare", parents=[common], help="run every method at one d")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True, help="output template; method name is appended to the stem")
    p.add_argument("-d", "--factor", type=int, required=True)
    p.add_argument("-k", "--radius", type=int)
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--mode", choices=MODES, default="input-pairs")
    p.add_argument("--fallback", choices=FALLBACKS, default="guide-value")
    p.add_argument("--crop", action="store_true")
    p.add_argument("--report", help="write metrics to this .csv or .json (a .png figure lands beside it)")
    p.set_defaults(handler=run_compare)

    p = sub.add_parser("bench", parents=[common], help="time learning and filtering")
    p.add_argument("--sizes", required=True, help="comma-separated square side lengths, e.g. 256,512")
    p.add_argument("--repeats", type=int, default=3, help="runs per size (median reported)")
    p.add_argument("-d", "--factor", type=int, default=2)
    p.add_argument("-k", "--radius", type=int)
    p.add_argument("--report", help="write timings to this .csv (a .png figure lands beside it)")
    p.set_defaults(handler=run_bench)

    p = sub.add_parser("diagnose", parents=[common], help="dump the count table and its properties")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True, help="output prefix for .counts.txt/.heatmap.pgm/.report.json")
    p.add_argument("-k", "--radius", type=int, help="co-occurrence radius (default d)")
    p.add_argument("-d", "--factor", type=int, help="needed for guide-indexed mode")
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--mode", choices=MODES, default="input-pairs")
    p.add_argument("--crop", action="store_true")
    p.set_defaults(handler=run_diagnose)

    return parser


def _emit(args: argparse.Namespace, **pairs) -> None:
    if not args.quiet:
        print(" ".join(f"{key}={value}" for key, value in pairs.items()))


def _fmt_ms(seconds: float) -> str:
    return f"{seconds * 1e3:.3f}"


def center_crop(img: RasterImage, d: int) -> RasterImage:
    """Crop to the largest centered region whose dimensions d divides."""
    new_h = (img.height // d) * d
    new_w = (img.width // d) * d
    if new_h == 0 or new_w == 0:
        raise DivisibilityError(
            f"{img.width}x{img.height} is smaller than the factor {d}"
        )
    top = (img.height - new_h) // 2
    left = (img.width - new_w) // 2
    return RasterImage.from_arrays(
        *(p.values[top : top + new_h, left : left + new_w] for p in img.planes)
    )


def _prepare_input(args: argparse.Namespace, d: int) -> RasterImage:
    img = load_image(args.input)
    if img.height % d or img.width % d:
        if not args.crop:
            raise DivisibilityError(
                f"{img.width}x{img.height} is not divisible by factor {d} "
                "(pass --crop to center-crop)"
            )
        img = center_crop(img, d)
    return img


def _apply_method(img: RasterImage, method: str, params: DownscaleParams) -> RasterImage:
    if method == "cooc":
        return downscale_cooc(img, params)
    op = CLASSIC_METHODS[method]
    return RasterImage(tuple(op(p, params.d) for p in img.planes))


def run_downscale(args: argparse.Namespace) -> int:
    if args.factor < 2:
        raise CliConfigError(f"--factor must be >= 2, got {args.factor}")
    params = DownscaleParams(
        d=args.factor,
        k=args.radius,
        sigma=args.sigma,
        mode=args.mode,
        fallback=args.fallback,
    )
    img = _prepare_input(args, params.d)
    t0 = time.perf_counter()
    out = _apply_method(img, args.method, params)
    elapsed = time.perf_counter() - t0
    save_image(out, args.output)
    _emit(
        args,
        method=args.method,
        input=args.input,
        output=args.output,
        input_width=img.width,
        input_height=img.height,
        output_width=out.width,
        output_height=out.height,
        elapsed_ms=_fmt_ms(elapsed),
    )
    return 0


def _method_output_path(template: Path, method: str) -> Path:
    if template.suffix:
        return template.with_name(f"{template.stem}.{method}{template.suffix}")
    return template.with_name(f"{template.name}.{method}")


def run_compare(args: argparse.Namespace) -> int:
    if args.factor < 2:
        raise CliConfigError(f"--factor must be >= 2, got {args.factor}")
    params = DownscaleParams(
        d=args.factor,
        k=args.radius,
        sigma=args.sigma,
        mode=args.mode,
        fallback=args.fallback,
    )
    report_path = _validated_report_path(args.report, (".csv", ".json"))
    img = _prepare_input(args, params.d)
    template = Path(args.output)

    outputs: dict[str, RasterImage] = {}
    timings: dict[str, float] = {}
    for method in METHODS:
        t0 = time.perf_counter()
        outputs[method] = _apply_method(img, method, params)
        timings[method] = time.perf_counter() - t0

    reference = outputs["box"]
    report = QualityReport()
    for method in METHODS:
        out = outputs[method]
        path = _method_output_path(template, method)
        save_image(out, path)
        row = QualityRow(
            method=method,
            width=out.width,
            height=out.height,
            time_ms=timings[method] * 1e3,
            gradient_energy=gradient_energy_image(out),
            psnr_db=None if method == "box" else psnr_image(out, reference),
            psnr_reference=None if method == "box" else "box",
        )
        report.add(row)
        _emit(
            args,
            method=method,
            output=path,
            width=out.width,
            height=out.height,
            time_ms=f"{row.time_ms:.3f}",
            gradient_energy=f"{row.gradient_energy:.6g}",
            psnr_db="" if row.psnr_db is None else f"{row.psnr_db:.4f}",
        )

    if report_path is not None:
        if report_path.suffix == ".csv":
            report.write_csv(report_path)
        else:
            report.write_json(report_path)
        figure_path = report_path.with_suffix(".png")
        from .figures import render_compare_figure

        render_compare_figure(report, figure_path)
        _emit(args, report=report_path, figure=figure_path)
    return 0


def _validated_report_path(report: str | None, allowed: tuple[str, ...]) -> Path | None:
    if report is None:
        return None
    path = Path(report)
    if path.suffix not in allowed:
        raise CliConfigError(
            f"--report must end in {' or '.join(allowed)}, got {path.name!r}"
        )
    return path


def run_bench(args: argparse.Namespace) -> int:
    try:
        sizes = [int(token) for token in args.sizes.split(",") if token.strip()]
    except ValueError:
        raise CliConfigError(f"invalid --sizes list {args.sizes!r}") from None
    if not sizes:
        raise CliConfigError("--sizes list is empty")
    if args.repeats < 1:
        raise CliConfigError(f"--repeats must be >= 1, got {args.repeats}")
    report_path = _validated_report_path(args.report, (".csv",))

    try:
        rows = measure_scaling(sizes, d=args.factor, k=args.radius, repeats=args.repeats)
    except ValueError as exc:
        raise CliConfigError(str(exc)) from None

    for row in rows:
        _emit(
            args,
            width=row.width,
            height=row.height,
            pixels=row.pixels,
            d=row.d,
            k=row.k,
            learn_ms=f"{row.learn_ms:.3f}",
            filter_ms=f"{row.filter_ms:.3f}",
            total_ms=f"{row.total_ms:.3f}",
        )
    if report_path is not None:
        write_bench_csv(rows, report_path)
        figure_path = report_path.with_suffix(".png")
        from .figures import render_bench_figure

        render_bench_figure(rows, figure_path)
        _emit(args, report=report_path, figure=figure_path)
    return 0


def _diagnose_plane(
    args: argparse.Namespace, plane: ImagePlane, k: int, prefix: str
) -> None:
    guide = None
    if args.mode == "guide-indexed":
        if args.factor is None:
            raise CliConfigError("guide-indexed mode requires --factor")
        guide = build_guide(plane, GuideParams(args.factor, args.sigma))
    cooc = learn_cooccurrence(plane, k, args.mode, guide)

    counts_path = f"{prefix}.counts.txt"
    heatmap_path = f"{prefix}.heatmap.pgm"
    report_path = f"{prefix}.report.json"
    write_counts_text(cooc, counts_path)
    save_image(RasterImage((counts_heatmap(cooc),)), heatmap_path, format="p5")
    diag = kernel_diagnostics(cooc)
    with open(report_path, "w", encoding="ascii") as fh:
        json.dump(dataclasses.asdict(diag), fh, indent=2)
        fh.write("\n")
    _emit(
        args,
        counts=counts_path,
        heatmap=heatmap_path,
        report=report_path,
        k=k,
        mode=args.mode,
        symmetry_deviation=diag.symmetry_deviation,
        min_eigenvalue=f"{diag.min_eigenvalue:.6g}",
        cs_violation_fraction=f"{diag.cauchy_schwarz_violation_fraction:.6g}",
        occupied_levels=diag.occupied_levels,
    )


def run_diagnose(args: argparse.Namespace) -> int:
    k = args.radius if args.radius is not None else args.factor
    if k is None:
        raise CliConfigError("diagnose needs --radius (or --factor to default from)")
    if k < 1:
        raise CliConfigError(f"--radius must be >= 1, got {k}")
    d = args.factor if args.factor is not None else 1
    if args.mode == "guide-indexed" and args.factor is None:
        raise CliConfigError("guide-indexed mode requires --factor")

    img = load_image(args.input)
    if args.mode == "guide-indexed":
        if img.height % d or img.width % d:
            if not args.crop:
                raise DivisibilityError(
                    f"{img.width}x{img.height} is not divisible by factor {d} "
                    "(pass --crop to center-crop)"
                )
            img = center_crop(img, d)

    if img.channels == 1:
        _diagnose_plane(args, img.planes[0], k, args.output)
    else:
        for ch, plane in enumerate(img.planes):
            _diagnose_plane(args, plane, k, f"{args.output}.ch{ch}")
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.handler(args)
    except CliConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DivisibilityError, DimensionMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FormatMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ImageIOError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
