import numpy as np
import pytest

from rdhei import GrayImage, KeyMaterial


def synth_image(rng: np.random.Generator, height: int, width: int) -> GrayImage:
    """Synthetic test image: constant patches, gradients, and mild noise."""
    base = np.full((height, width), int(rng.integers(40, 200)), dtype=np.int64)
    # a couple of gradient / constant rectangles
    for _ in range(int(rng.integers(1, 4))):
        r0 = int(rng.integers(0, height))
        c0 = int(rng.integers(0, width))
        r1 = int(rng.integers(r0 + 1, height + 1))
        c1 = int(rng.integers(c0 + 1, width + 1))
        kind = rng.integers(0, 3)
        if kind == 0:
            base[r0:r1, c0:c1] = int(rng.integers(0, 256))
        elif kind == 1:
            ramp = np.add.outer(np.arange(r1 - r0), np.arange(c1 - c0))
            base[r0:r1, c0:c1] = int(rng.integers(0, 160)) + ramp % 64
        else:
            base[r0:r1, c0:c1] += rng.integers(-60, 61, size=(r1 - r0, c1 - c0))
    base += rng.integers(-2, 3, size=(height, width))
    return GrayImage(np.clip(base, 0, 255).astype(np.uint8))


def random_keys(rng: np.random.Generator, with_ks: bool = True) -> KeyMaterial:
    def key() -> bytes:
        return bytes(rng.integers(0, 256, 16, dtype=np.uint8))

    return KeyMaterial(kc=key(), kd=key(), ks=key() if with_ks else None)


@pytest.fixture
def image_factory():
    return synth_image


@pytest.fixture
def key_factory():
    return random_keys


FIXED_KEYS = KeyMaterial.from_hex(
    kc="000102030405060708090a0b0c0d0e0f",
    kd="101112131415161718191a1b1c1d1e1f",
    ks="202122232425262728292a2b2c2d2e2f",
)


@pytest.fixture
def fixed_keys() -> KeyMaterial:
    return FIXED_KEYS
