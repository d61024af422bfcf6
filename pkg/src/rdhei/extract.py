"""Recovering the embedded bit stream from a marked image.

The bootstrap walks blocks cyclically from the start slot named in the
header. Each visited block's top bits extend the auxiliary stream, and
every three bits past the saved-pixel prefix reveal the capacity code of
the next cyclic block, so the walk can always continue on images produced
by the embedder. Payload extraction then re-reads the full stream with the
complete capacity table and strips the frame.
"""

from dataclasses import dataclass

import numpy as np

from .bits import BitString, Header, bcf_decode, decode_header
from .blocks import BlockLayout, follower_tables
from .capacity import BCF_CODE_BITS, HEADER_FOLLOWERS, LENGTH_FIELD_BITS
from .crypto import TAG_AUX, TAG_PAYLOAD, KeyMaterial, keystream_bytes
from .embed import HEADER_BITS, _block_sites, embedded_bit_sites
from .errors import (
    AuxStreamStall,
    DimensionMismatch,
    HeaderOutOfRange,
    LengthFieldOverflow,
)
from .image import GrayImage, Role


def extract_bits_from_pixel(p_marked: int, n_prime: int) -> BitString:
    """The top n' bits of a marked pixel, MSB first."""
    return BitString.from_int(p_marked >> (8 - n_prime) if n_prime else 0, n_prime)


@dataclass
class BootstrapResult:
    header: Header
    bcfs: np.ndarray
    saved_header_pixels: bytes
    payload_bit_offset: int


def bootstrap(
    marked: GrayImage, layout: BlockLayout, keys: KeyMaterial
) -> BootstrapResult:
    """Read the header and hierarchically decode the auxiliary stream.

    Needs ks when the auxiliary stream was masked at embed time; never
    touches kc or kd.
    """
    if marked.role != Role.MARKED:
        raise ValueError("bootstrap expects a marked image")
    if marked.width != layout.image_width or marked.height != layout.image_height:
        raise DimensionMismatch("image dimensions disagree with the layout")
    ft = follower_tables(layout)
    if ft.follower_count(0) < HEADER_FOLLOWERS:
        raise AuxStreamStall("block 0 is too small to hold a header")

    px = marked.pixels
    hdr_rows, hdr_cols = ft.follower_slice(0)
    header_bytes = bytes(px[hdr_rows[:HEADER_FOLLOWERS], hdr_cols[:HEADER_FOLLOWERS]])
    header = decode_header(BitString.from_bytes(header_bytes))
    n_b = layout.block_count
    if header.start_block >= n_b:
        raise HeaderOutOfRange(
            f"start block {header.start_block} outside [0, {n_b})"
        )
    start = header.start_block

    aux_len = HEADER_BITS + BCF_CODE_BITS * (n_b - 1)
    if keys.ks is not None:
        mask = BitString.from_bytes(
            keystream_bytes(keys.ks, TAG_AUX, 0, (aux_len + 7) // 8), aux_len
        ).array
    else:
        mask = np.zeros(aux_len, dtype=np.uint8)

    bcfs = np.full(n_b, -1, dtype=np.int64)
    bcfs[start] = bcf_decode(header.start_bcf_code)
    aux = np.empty(aux_len, dtype=np.uint8)
    got = 0
    parsed = 0  # capacity codes decoded so far
    for pos in range(n_b):
        slot = (start + pos) % n_b
        if bcfs[slot] < 0:
            raise AuxStreamStall(
                f"capacity of cyclic position {pos} is unknown after "
                f"{got} auxiliary bits"
            )
        rows, cols, shifts = _block_sites(ft, slot, int(bcfs[slot]))
        if rows.size:
            bits = ((px[rows, cols] >> shifts) & 1).astype(np.uint8)
            take = min(bits.size, aux_len - got)
            aux[got : got + take] = bits[:take] ^ mask[got : got + take]
            got += take
        while parsed < n_b - 1 and HEADER_BITS + BCF_CODE_BITS * (parsed + 1) <= got:
            base = HEADER_BITS + BCF_CODE_BITS * parsed
            code = (aux[base] << 2) | (aux[base + 1] << 1) | aux[base + 2]
            bcfs[(start + 1 + parsed) % n_b] = bcf_decode(int(code))
            parsed += 1
        if got >= aux_len:
            break
    if got < aux_len:
        raise AuxStreamStall(
            f"image yields only {got} of {aux_len} auxiliary bits"
        )

    saved = np.packbits(aux[:HEADER_BITS]).tobytes()
    return BootstrapResult(
        header=header,
        bcfs=bcfs,
        saved_header_pixels=saved,
        payload_bit_offset=aux_len,
    )


def extract_payload(
    marked: GrayImage, layout: BlockLayout, keys: KeyMaterial
) -> BitString:
    """Extract the embedded payload; needs kd (and ks if used), never kc."""
    if keys.kd is None:
        raise ValueError("payload extraction requires the data-hider key kd")
    boot = bootstrap(marked, layout, keys)
    rows, cols, shifts = embedded_bit_sites(
        boot.bcfs, layout, boot.header.start_block
    )
    stream = ((marked.pixels[rows, cols] >> shifts) & 1).astype(np.uint8)
    aux_len = boot.payload_bit_offset
    if stream.size < aux_len + LENGTH_FIELD_BITS:
        raise LengthFieldOverflow("no room for the payload length field")
    frame_mask = BitString.from_bytes(
        keystream_bytes(
            keys.kd,
            TAG_PAYLOAD,
            0,
            (LENGTH_FIELD_BITS + (stream.size - aux_len - LENGTH_FIELD_BITS) + 7) // 8,
        ),
        stream.size - aux_len,
    ).array
    length_bits = (
        stream[aux_len : aux_len + LENGTH_FIELD_BITS]
        ^ frame_mask[:LENGTH_FIELD_BITS]
    )
    declared = BitString(length_bits).to_int()
    remaining = stream.size - aux_len - LENGTH_FIELD_BITS
    if declared > remaining:
        raise LengthFieldOverflow(
            f"declared payload of {declared} bits exceeds the {remaining} "
            "bits available (wrong key or corrupt image)"
        )
    body = (
        stream[aux_len + LENGTH_FIELD_BITS : aux_len + LENGTH_FIELD_BITS + declared]
        ^ frame_mask[LENGTH_FIELD_BITS : LENGTH_FIELD_BITS + declared]
    )
    return BitString(body)
