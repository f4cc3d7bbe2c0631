"""Image file I/O: PNG (8-bit gray/RGB) and PNM (P2/P3 ASCII, P5/P6 binary).

PNM support is restricted to maxval 255. Written PNM files use a canonical
byte layout: magic, a "# coocscale" comment, "width height", "255", each
separated by a single newline, then the payload (binary for P5/P6, one
space-separated row per line for P2/P3). PNG encode/decode is delegated to
Pillow; 16-bit, palette, and alpha-carrying sources are rejected.
"""

from __future__ import annotations

import io as _io
from pathlib import Path

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

from .image import RasterImage, quantize_levels

# Parsing guard against absurd headers, checked before any allocation.
MAX_PIXELS = 1 << 26


class ImageIOError(Exception):
    """Base class for image decode/encode failures."""


class UnsupportedFormatError(ImageIOError):
    """The stream is not a format (or variant) this codec handles."""


class TruncatedStreamError(ImageIOError):
    """The stream ended before the declared payload was complete."""


class DimensionOverflowError(ImageIOError):
    """Declared dimensions exceed the supported pixel budget."""


class FormatMismatchError(ImageIOError):
    """The image's channel count cannot be stored in the requested format."""


_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"
_PNM_MAGICS = {b"P2", b"P3", b"P5", b"P6"}

_FORMAT_ALIASES = {
    "png": "png",
    "pnm": "pnm",
    "pgm": "p5",
    "ppm": "p6",
    "p2": "p2",
    "p3": "p3",
    "p5": "p5",
    "p6": "p6",
}


def load_image(path: str | Path, format_hint: str | None = None) -> RasterImage:
    """Load a PNG or PNM file into a RasterImage with values in [0, 255].

    The format is sniffed from the stream's magic bytes; `format_hint`
    ("png", "pnm", "pgm", "ppm") overrides sniffing.

    Raises:
        UnsupportedFormatError: unknown magic, maxval != 255, or a PNG
            mode other than 8-bit gray/RGB.
        TruncatedStreamError: payload shorter than the header declares.
        DimensionOverflowError: header dimensions exceed MAX_PIXELS.
        OSError: the file cannot be read.
    """
    data = Path(path).read_bytes()
    fmt = _normalize_hint(format_hint) if format_hint else _sniff(data)
    if fmt == "png":
        return _decode_png(data)
    return _decode_pnm(data)


def save_image(img: RasterImage, path: str | Path, format: str | None = None) -> None:
    """Write a RasterImage, quantizing intensities to 8-bit levels.

    The format comes from `format` ("png", "p2", "p3", "p5", "p6", "pgm",
    "ppm", "pnm") or, if omitted, the file extension. Gray images can be
    written to any supported format (color PNM replicates the channel);
    3-channel images only to PNG/P3/P6.
    """
    fmt = _resolve_save_format(img, path, format)
    if fmt == "png":
        _encode_png(img, Path(path))
        return
    Path(path).write_bytes(_encode_pnm(img, fmt))


def _normalize_hint(hint: str) -> str:
    key = hint.lower().lstrip(".")
    if key not in _FORMAT_ALIASES:
        raise UnsupportedFormatError(f"unknown format hint {hint!r}")
    fmt = _FORMAT_ALIASES[key]
    return "png" if fmt == "png" else "pnm"


def _sniff(data: bytes) -> str:
    if data.startswith(_PNG_MAGIC):
        return "png"
    if data[:2] in _PNM_MAGICS:
        return "pnm"
    raise UnsupportedFormatError("stream is neither PNG nor a supported PNM variant")


def _resolve_save_format(img: RasterImage, path: str | Path, format: str | None) -> str:
    if format is not None:
        key = format.lower().lstrip(".")
        if key not in _FORMAT_ALIASES:
            raise UnsupportedFormatError(f"unknown output format {format!r}")
        fmt = _FORMAT_ALIASES[key]
    else:
        ext = Path(path).suffix.lower().lstrip(".")
        if ext not in _FORMAT_ALIASES:
            raise UnsupportedFormatError(
                f"cannot infer output format from extension {ext!r}"
            )
        fmt = _FORMAT_ALIASES[ext]
    if fmt == "pnm":
        fmt = "p5" if img.channels == 1 else "p6"
    if img.channels == 3 and fmt in ("p2", "p5"):
        raise FormatMismatchError("3-channel image cannot be written as PGM (P2/P5)")
    return fmt


# ---------------------------------------------------------------------------
# PNM codec
# ---------------------------------------------------------------------------


class _PnmScanner:
    """Token scanner for PNM headers and ASCII payloads ('#' starts a comment)."""

    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def _skip_separators(self) -> None:
        data, n = self.data, len(self.data)
        while self.pos < n:
            ch = data[self.pos]
            if ch in b" \t\r\n\x0b\x0c":
                self.pos += 1
            elif ch == ord("#"):
                end = data.find(b"\n", self.pos)
                self.pos = n if end < 0 else end + 1
            else:
                return

    def next_token(self) -> bytes:
        self._skip_separators()
        if self.pos >= len(self.data):
            raise TruncatedStreamError("unexpected end of stream in PNM header")
        start = self.pos
        data, n = self.data, len(self.data)
        while self.pos < n and data[self.pos] not in b" \t\r\n\x0b\x0c#":
            self.pos += 1
        return data[start : self.pos]

    def next_int(self) -> int:
        token = self.next_token()
        try:
            return int(token)
        except ValueError:
            raise UnsupportedFormatError(
                f"malformed PNM integer token {token!r}"
            ) from None


def _decode_pnm(data: bytes) -> RasterImage:
    magic = data[:2]
    if magic not in _PNM_MAGICS:
        raise UnsupportedFormatError(f"unsupported PNM magic {magic!r}")
    scanner = _PnmScanner(data)
    scanner.next_token()  # consume magic
    width = scanner.next_int()
    height = scanner.next_int()
    if width < 1 or height < 1:
        raise UnsupportedFormatError(f"invalid PNM dimensions {width}x{height}")
    if width * height > MAX_PIXELS:
        raise DimensionOverflowError(
            f"{width}x{height} exceeds the {MAX_PIXELS}-pixel limit"
        )
    maxval = scanner.next_int()
    if maxval != 255:
        raise UnsupportedFormatError(f"only maxval 255 PNM is supported, got {maxval}")

    channels = 3 if magic in (b"P3", b"P6") else 1
    count = width * height * channels

    if magic in (b"P5", b"P6"):
        # Exactly one whitespace byte separates the maxval from the payload.
        payload = data[scanner.pos + 1 :]
        if len(payload) < count:
            raise TruncatedStreamError(
                f"PNM payload holds {len(payload)} bytes, expected {count}"
            )
        samples = np.frombuffer(payload[:count], dtype=np.uint8).astype(np.float64)
    else:
        samples = np.empty(count, dtype=np.float64)
        for i in range(count):
            v = scanner.next_int()
            if not 0 <= v <= 255:
                raise UnsupportedFormatError(f"PNM sample {v} out of range 0..255")
            samples[i] = v

    if channels == 1:
        return RasterImage.from_arrays(samples.reshape(height, width))
    pixels = samples.reshape(height, width, 3)
    return RasterImage.from_arrays(pixels[:, :, 0], pixels[:, :, 1], pixels[:, :, 2])


def _quantized_channels(img: RasterImage) -> list[np.ndarray]:
    return [quantize_levels(p.values).astype(np.uint8) for p in img.planes]


def _encode_pnm(img: RasterImage, fmt: str) -> bytes:
    chans = _quantized_channels(img)
    if fmt in ("p3", "p6") and len(chans) == 1:
        chans = [chans[0]] * 3
    header = f"{fmt.upper()}\n# coocscale\n{img.width} {img.height}\n255\n".encode()

    if fmt == "p5":
        return header + chans[0].tobytes()
    if fmt == "p6":
        return header + np.stack(chans, axis=-1).tobytes()

    body = _io.StringIO()
    if fmt == "p2":
        for row in chans[0]:
            body.write(" ".join(str(int(v)) for v in row))
            body.write("\n")
    else:  # p3
        interleaved = np.stack(chans, axis=-1)
        for row in interleaved:
            body.write(" ".join(str(int(v)) for v in row.reshape(-1)))
            body.write("\n")
    return header + body.getvalue().encode()


# ---------------------------------------------------------------------------
# PNG via Pillow
# ---------------------------------------------------------------------------


def _decode_png(data: bytes) -> RasterImage:
    try:
        with PILImage.open(_io.BytesIO(data)) as im:
            if im.mode not in ("L", "RGB"):
                raise UnsupportedFormatError(
                    f"PNG mode {im.mode!r} not supported (need 8-bit gray or RGB)"
                )
            if im.width * im.height > MAX_PIXELS:
                raise DimensionOverflowError(
                    f"{im.width}x{im.height} exceeds the {MAX_PIXELS}-pixel limit"
                )
            im.load()
            arr = np.asarray(im, dtype=np.float64)
    except UnidentifiedImageError:
        raise UnsupportedFormatError("stream is not a decodable PNG") from None
    except PILImage.DecompressionBombError:
        raise DimensionOverflowError("PNG dimensions exceed the supported limit") from None
    except OSError as exc:
        raise TruncatedStreamError(f"PNG stream is truncated or corrupt: {exc}") from None

    if arr.ndim == 2:
        return RasterImage.from_arrays(arr)
    return RasterImage.from_arrays(arr[:, :, 0], arr[:, :, 1], arr[:, :, 2])


def _encode_png(img: RasterImage, path: Path) -> None:
    chans = _quantized_channels(img)
    if len(chans) == 1:
        pil = PILImage.fromarray(chans[0], mode="L")
    else:
        pil = PILImage.fromarray(np.stack(chans, axis=-1), mode="RGB")
    with open(path, "wb") as fh:
        pil.save(fh, format="PNG")


__all__ = [
    "MAX_PIXELS",
    "ImageIOError",
    "UnsupportedFormatError",
    "TruncatedStreamError",
    "DimensionOverflowError",
    "FormatMismatchError",
    "load_image",
    "save_image",
]
