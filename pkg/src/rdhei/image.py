"""8-bit grayscale images, binary PGM I/O, and PSNR."""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, MalformedHeader, TruncatedData, UnsupportedMaxval

_WHITESPACE = b" \t\r\n\v\f"


class Role(str, Enum):
    """Where an image sits in the pipeline."""

    PLAIN = "plain"
    ENCRYPTED = "encrypted"
    MARKED = "marked"


@dataclass
class GrayImage:
    """An 8-bit grayscale raster stored as an (height, width) uint8 array."""

    pixels: np.ndarray
    role: Role = Role.PLAIN

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2:
            raise ValueError(f"pixels must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image dimensions must be at least 1x1")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("pixel intensities must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        self.pixels = arr

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def copy(self, role: Role | None = None) -> "GrayImage":
        return GrayImage(self.pixels.copy(), self.role if role is None else role)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return (
            self.role == other.role
            and self.pixels.shape == other.pixels.shape
            and bool(np.array_equal(self.pixels, other.pixels))
        )


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    """Read the next whitespace-delimited header token, skipping # comments."""
    n = len(data)
    while pos < n:
        c = data[pos]
        if c in _WHITESPACE:
            pos += 1
        elif c == 0x23:  # '#'
            while pos < n and data[pos] != 0x0A:
                pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos] not in _WHITESPACE:
        pos += 1
    if start == pos:
        raise MalformedHeader("unexpected end of PGM header")
    return data[start:pos], pos


def read_pgm(data: bytes) -> GrayImage:
    """Parse a binary PGM (magic P5, maxval 255) into a plain GrayImage.

    Header comments are accepted; the raster starts one whitespace byte
    after the maxval token.
    """
    magic, pos = _next_token(data, 0)
    if magic != b"P5":
        raise MalformedHeader(f"expected P5 magic, got {magic!r}")
    fields = []
    for _ in range(3):
        tok, pos = _next_token(data, pos)
        try:
            fields.append(int(tok))
        except ValueError:
            raise MalformedHeader(f"non-numeric header field {tok!r}") from None
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise MalformedHeader(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedMaxval(f"maxval must be 255, got {maxval}")
    raster = data[pos + 1 :]
    if len(raster) < width * height:
        raise TruncatedData(
            f"raster holds {len(raster)} bytes, need {width * height}"
        )
    pixels = np.frombuffer(raster[: width * height], dtype=np.uint8)
    return GrayImage(pixels.reshape(height, width).copy(), Role.PLAIN)


def write_pgm(img: GrayImage) -> bytes:
    """Emit the canonical binary PGM encoding: "P5\\n<w> <h>\\n255\\n" + raster."""
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


def psnr(a: GrayImage, b: GrayImage) -> float:
    """Peak signal-to-noise ratio in dB; math.inf for identical images."""
    if a.pixels.shape != b.pixels.shape:
        raise DimensionMismatch(
            f"image shapes differ: {a.pixels.shape} vs {b.pixels.shape}"
        )
    diff = a.pixels.astype(np.float64) - b.pixels.astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 * 255.0 / mse)
