"""Keystream generation, stream encryption, and the keyed block permutation.

Keystream construction (part of the interop contract, bit-exact):

* AES-128 applied to 16-byte counter blocks, which is CTR mode with an
  explicit counter layout. Counter block = domain_tag as a big-endian
  64-bit integer, followed by the block counter as a big-endian 64-bit
  integer. Keystream byte at offset t lives in counter block t // 16.
* Domain tags keep the streams derived from one key independent:
  PIXEL=0 masks image pixels, PERM=1 drives the block permutation,
  PAYLOAD=2 masks the framed payload, AUX=3 masks the auxiliary stream.

Keyed permutation (also bit-exact): grid slots are grouped by block shape,
classes ordered by first occurrence in row-major grid order. Within each
class a Fisher-Yates shuffle runs over index positions i = count-1 .. 1,
drawing uniform j in [0, i] by rejection sampling: read the minimal number
of whole bytes for bit_length(i) bits from the PERM keystream (consumed
sequentially across all classes), interpret big-endian, mask to
bit_length(i) bits, reject and redraw if the value exceeds i. The shuffled
index list assigns the class's blocks back to its slots in ascending slot
order.
"""

from dataclasses import dataclass

import numpy as np
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from .bits import BitString
from .blocks import BlockLayout, slot_shapes
from .image import GrayImage, Role

TAG_PIXEL = 0
TAG_PERM = 1
TAG_PAYLOAD = 2
TAG_AUX = 3

KEY_BYTES = 16
_BLOCK = 16


def parse_key(hex_key: str) -> bytes:
    """Decode a 32-hex-digit key string to 16 raw bytes."""
    try:
        key = bytes.fromhex(hex_key)
    except ValueError:
        raise ValueError(f"key is not valid hex: {hex_key!r}") from None
    if len(key) != KEY_BYTES:
        raise ValueError(f"key must be {KEY_BYTES} bytes (32 hex digits)")
    return key


@dataclass(frozen=True)
class KeyMaterial:
    """The three secrets: kc encrypts/permutes the image, kd encrypts the
    payload, ks (optional) encrypts the auxiliary stream."""

    kc: bytes | None = None
    kd: bytes | None = None
    ks: bytes | None = None

    def __post_init__(self):
        for name in ("kc", "kd", "ks"):
            val = getattr(self, name)
            if val is not None and len(val) != KEY_BYTES:
                raise ValueError(f"{name} must be {KEY_BYTES} bytes")

    @classmethod
    def from_hex(
        cls,
        kc: str | None = None,
        kd: str | None = None,
        ks: str | None = None,
    ) -> "KeyMaterial":
        return cls(
            kc=parse_key(kc) if kc else None,
            kd=parse_key(kd) if kd else None,
            ks=parse_key(ks) if ks else None,
        )


def keystream_bytes(key: bytes, domain_tag: int, offset: int, count: int) -> bytes:
    """`count` keystream bytes starting at byte `offset` of the tagged stream."""
    if not 0 <= domain_tag < (1 << 64):
        raise ValueError("domain tag must fit in 64 bits")
    if offset < 0 or count < 0:
        raise ValueError("offset and count must be non-negative")
    if count == 0:
        return b""
    first_block = offset // _BLOCK
    skip = offset % _BLOCK
    n_blocks = (skip + count + _BLOCK - 1) // _BLOCK
    if first_block + n_blocks > (1 << 64):
        raise ValueError("keystream offset exceeds the 64-bit counter range")
    counters = np.empty((n_blocks, 2), dtype=">u8")
    counters[:, 0] = domain_tag
    counters[:, 1] = np.arange(first_block, first_block + n_blocks, dtype=np.uint64)
    encryptor = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
    stream = encryptor.update(counters.tobytes()) + encryptor.finalize()
    return stream[skip : skip + count]


def xor_cipher_array(pixels: np.ndarray, key: bytes) -> np.ndarray:
    """XOR a raster with the PIXEL-tagged keystream, row-major from offset 0."""
    flat = pixels.reshape(-1)
    mask = np.frombuffer(
        keystream_bytes(key, TAG_PIXEL, 0, flat.size), dtype=np.uint8
    )
    return np.bitwise_xor(flat, mask).reshape(pixels.shape)


def xor_cipher_image(img: GrayImage, key: bytes) -> GrayImage:
    """Stream-encrypt or decrypt an image; the same call is its own inverse."""
    if img.role == Role.PLAIN:
        role = Role.ENCRYPTED
    elif img.role == Role.ENCRYPTED:
        role = Role.PLAIN
    else:
        raise ValueError(f"cannot cipher an image with role {img.role.value}")
    return GrayImage(xor_cipher_array(img.pixels, key), role)


def stream_encrypt_bits(bits: BitString, key: bytes, domain_tag: int) -> BitString:
    """XOR a bit-string with the tagged keystream from bit offset 0."""
    n = len(bits)
    if n == 0:
        return bits
    mask = BitString.from_bytes(
        keystream_bytes(key, domain_tag, 0, (n + 7) // 8), bit_length=n
    )
    return bits ^ mask


class _KeystreamCursor:
    """Sequential byte reader over one tagged keystream."""

    def __init__(self, key: bytes, domain_tag: int, chunk: int = 4096):
        self._key = key
        self._tag = domain_tag
        self._chunk = chunk
        self._next_offset = 0
        self._buf = b""
        self._pos = 0

    def take(self, n: int) -> bytes:
        out = bytearray()
        while len(out) < n:
            if self._pos >= len(self._buf):
                self._buf = keystream_bytes(
                    self._key, self._tag, self._next_offset, self._chunk
                )
                self._next_offset += self._chunk
                self._pos = 0
            grab = min(n - len(out), len(self._buf) - self._pos)
            out += self._buf[self._pos : self._pos + grab]
            self._pos += grab
        return bytes(out)


def _draw_uniform(cursor: _KeystreamCursor, upper: int) -> int:
    """Uniform integer in [0, upper] by masked rejection sampling."""
    n_bits = upper.bit_length()
    n_bytes = (n_bits + 7) // 8
    mask = (1 << n_bits) - 1
    while True:
        v = int.from_bytes(cursor.take(n_bytes), "big") & mask
        if v <= upper:
            return v


def keyed_block_permutation(key: bytes, layout: BlockLayout) -> np.ndarray:
    """Deterministic shape-class-respecting permutation of grid slots."""
    heights, widths = slot_shapes(layout)
    classes: dict[tuple[int, int], list[int]] = {}
    for slot in range(layout.block_count):
        classes.setdefault((int(heights[slot]), int(widths[slot])), []).append(slot)
    cursor = _KeystreamCursor(key, TAG_PERM)
    perm = np.empty(layout.block_count, dtype=np.int64)
    for slots in classes.values():
        order = list(range(len(slots)))
        for i in range(len(order) - 1, 0, -1):
            j = _draw_uniform(cursor, i)
            order[i], order[j] = order[j], order[i]
        for i, o in enumerate(order):
            perm[slots[o]] = slots[i]
    return perm
