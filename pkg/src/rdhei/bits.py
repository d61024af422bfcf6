"""MSB-first bit buffers, the 3-bit block-capacity code, and the start header.

Bit conventions used everywhere in this package:

* A byte unpacks to 8 bits most-significant first, so writing bits
  b0..b7 produces the byte with b0 at bit position 7.
* Integers encode big-endian within their fixed bit width.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BlockIndexOverflow, IllegalBcf, LengthMismatch

HEADER_BITS = 24
START_INDEX_BITS = 21


class BitString:
    """Immutable sequence of bits with exact (not byte-rounded) length."""

    __slots__ = ("_bits",)

    def __init__(self, bits=()):
        if isinstance(bits, BitString):
            arr = bits._bits
        else:
            arr = np.array(bits, dtype=np.uint8, copy=True)
            if arr.ndim != 1:
                arr = arr.reshape(-1)
            if arr.size and arr.max() > 1:
                raise ValueError("bits must be 0 or 1")
            arr.setflags(write=False)
        self._bits = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "BitString":
        out = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.uint8)
        arr.setflags(write=False)
        out._bits = arr
        return out

    @classmethod
    def from_bytes(cls, data: bytes, bit_length: int | None = None) -> "BitString":
        """Unpack bytes MSB-first; optionally truncate to bit_length bits."""
        bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
        if bit_length is not None:
            if bit_length > bits.size:
                raise LengthMismatch(
                    f"{len(data)} bytes hold {bits.size} bits, need {bit_length}"
                )
            bits = bits[:bit_length]
        return cls._wrap(bits)

    @classmethod
    def from_int(cls, value: int, width: int) -> "BitString":
        """Big-endian fixed-width encoding of a non-negative integer."""
        if width < 0:
            raise ValueError("width must be non-negative")
        if value < 0 or value >> width:
            raise ValueError(f"value {value} does not fit in {width} bits")
        if width == 0:
            return cls._wrap(np.empty(0, dtype=np.uint8))
        shifts = np.arange(width - 1, -1, -1, dtype=np.uint64)
        bits = (value >> shifts) & 1
        return cls._wrap(bits.astype(np.uint8))

    def to_bytes(self) -> bytes:
        """Pack MSB-first, zero-padding the final partial byte."""
        return np.packbits(self._bits).tobytes()

    def to_int(self) -> int:
        value = 0
        for b in self._bits:
            value = (value << 1) | int(b)
        return value

    @property
    def array(self) -> np.ndarray:
        """The underlying read-only uint8 array of 0/1 values."""
        return self._bits

    def __len__(self) -> int:
        return int(self._bits.size)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return BitString._wrap(self._bits[key])
        return int(self._bits[key])

    def __add__(self, other: "BitString") -> "BitString":
        if not isinstance(other, BitString):
            return NotImplemented
        return BitString._wrap(np.concatenate([self._bits, other._bits]))

    def __xor__(self, other: "BitString") -> "BitString":
        if not isinstance(other, BitString):
            return NotImplemented
        if len(self) != len(other):
            raise LengthMismatch(f"cannot xor {len(self)} bits with {len(other)}")
        return BitString._wrap(np.bitwise_xor(self._bits, other._bits))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return bool(np.array_equal(self._bits, other._bits))

    def __iter__(self):
        return (int(b) for b in self._bits)

    def __repr__(self) -> str:
        head = "".join(str(int(b)) for b in self._bits[:32])
        ell = "..." if len(self) > 32 else ""
        return f"BitString({len(self)} bits: {head}{ell})"


def bcf_encode(n_prime: int) -> int:
    """Map a block capacity value in {0..6, 8} onto its 3-bit code.

    The value 7 is never realized, so code 7 stands for 8.
    """
    if n_prime == 8:
        return 7
    if 0 <= n_prime <= 6:
        return n_prime
    raise IllegalBcf(f"illegal block capacity value {n_prime}")


def bcf_decode(code: int) -> int:
    if not 0 <= code <= 7:
        raise IllegalBcf(f"3-bit code out of range: {code}")
    return 8 if code == 7 else code


@dataclass(frozen=True)
class Header:
    """24-bit start record: the permuted index of the start block (21 bits,
    big-endian) followed by the start block's 3-bit capacity code."""

    start_block: int
    start_bcf_code: int


def encode_header(h: Header) -> BitString:
    if not 0 <= h.start_block < (1 << START_INDEX_BITS):
        raise BlockIndexOverflow(
            f"start block {h.start_block} exceeds {START_INDEX_BITS} bits"
        )
    if not 0 <= h.start_bcf_code <= 7:
        raise IllegalBcf(f"3-bit code out of range: {h.start_bcf_code}")
    return BitString.from_int(h.start_block, START_INDEX_BITS) + BitString.from_int(
        h.start_bcf_code, 3
    )


def decode_header(bits: BitString) -> Header:
    if len(bits) != HEADER_BITS:
        raise LengthMismatch(f"header must be {HEADER_BITS} bits, got {len(bits)}")
    return Header(
        start_block=bits[:START_INDEX_BITS].to_int(),
        start_bcf_code=bits[START_INDEX_BITS:].to_int(),
    )
