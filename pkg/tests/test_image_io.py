import math

import numpy as np
import pytest

from rdhei import GrayImage, Role, psnr, read_pgm, write_pgm
from rdhei.errors import (
    DimensionMismatch,
    MalformedHeader,
    TruncatedData,
    UnsupportedMaxval,
)


def test_read_minimal_pgm():
    img = read_pgm(b"P5\n2 2\n255\n" + bytes([0, 255, 7, 9]))
    assert img.width == 2 and img.height == 2
    assert img.role == Role.PLAIN
    assert img.pixels.tolist() == [[0, 255], [7, 9]]


def test_write_one_pixel():
    img = GrayImage(np.array([[42]], dtype=np.uint8))
    assert write_pgm(img) == b"P5\n1 1\n255\n" + bytes([42])


def test_write_length_is_header_plus_raster():
    img = GrayImage(np.zeros((5, 7), dtype=np.uint8))
    data = write_pgm(img)
    header = b"P5\n7 5\n255\n"
    assert data.startswith(header)
    assert len(data) == len(header) + 5 * 7


def test_round_trip_random_images():
    rng = np.random.default_rng(1)
    for _ in range(20):
        h, w = int(rng.integers(1, 40)), int(rng.integers(1, 40))
        img = GrayImage(rng.integers(0, 256, (h, w), dtype=np.uint8))
        again = read_pgm(write_pgm(img))
        assert again == img


def test_read_canonicalizes_any_valid_pgm():
    # comments and exotic whitespace are accepted on read, never emitted
    messy = b"P5 # magic\n# a comment line\n 2\t3 #dims\n255\n" + bytes(range(6))
    img = read_pgm(messy)
    assert (img.width, img.height) == (2, 3)
    canonical = write_pgm(img)
    assert read_pgm(canonical) == img
    assert write_pgm(read_pgm(canonical)) == canonical


def test_bad_magic():
    with pytest.raises(MalformedHeader):
        read_pgm(b"P6\n2 2\n255\n" + bytes(4))


def test_non_numeric_dimensions():
    with pytest.raises(MalformedHeader):
        read_pgm(b"P5\ntwo 2\n255\n" + bytes(4))


def test_wrong_maxval():
    with pytest.raises(UnsupportedMaxval):
        read_pgm(b"P5\n2 2\n65535\n" + bytes(8))


def test_truncated_raster():
    with pytest.raises(TruncatedData):
        read_pgm(b"P5\n2 2\n255\n" + bytes(3))


def test_psnr_identical_is_infinite():
    rng = np.random.default_rng(2)
    img = GrayImage(rng.integers(0, 256, (16, 16), dtype=np.uint8))
    assert math.isinf(psnr(img, img))


def test_psnr_extremes():
    a = GrayImage(np.zeros((8, 8), dtype=np.uint8))
    b = GrayImage(np.full((8, 8), 255, dtype=np.uint8))
    assert psnr(a, b) == pytest.approx(0.0)


def test_psnr_single_pixel_difference():
    # 100x100, one pixel off by 255: MSE = 255^2/10000 -> 40 dB
    a = GrayImage(np.zeros((100, 100), dtype=np.uint8))
    px = np.zeros((100, 100), dtype=np.uint8)
    px[3, 4] = 255
    b = GrayImage(px)
    assert psnr(a, b) == pytest.approx(40.0)


def test_psnr_symmetric():
    rng = np.random.default_rng(3)
    a = GrayImage(rng.integers(0, 256, (12, 9), dtype=np.uint8))
    b = GrayImage(rng.integers(0, 256, (12, 9), dtype=np.uint8))
    assert psnr(a, b) == psnr(b, a)


def test_psnr_dimension_mismatch():
    a = GrayImage(np.zeros((4, 4), dtype=np.uint8))
    b = GrayImage(np.zeros((4, 5), dtype=np.uint8))
    with pytest.raises(DimensionMismatch):
        psnr(a, b)
