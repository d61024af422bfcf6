"""MSB replacement and the two-step hierarchical embedding.

Marked-image wire format (normative, shared with extract/recover):

* Header: 24 bits (21-bit start block index, 3-bit capacity code of the
  start block) written as 3 whole bytes over the first three followers of
  the block in permuted slot 0, in row-major follower order. The three
  displaced encrypted bytes are saved into the auxiliary stream.
* Auxiliary stream: the 24 saved bits, then the 3-bit capacity codes of
  every block except the start block, in cyclic slot order s+1, s+2, ...
  wrapping around to s-1; XORed with the AUX keystream when a shared key
  is present. Total length 24 + 3*(block_count - 1).
* Payload stream: a 32-bit big-endian payload bit count followed by the
  payload bits, the whole frame XORed with the PAYLOAD keystream under the
  data-hider key.
* Bit placement: auxiliary stream then payload stream form one continuous
  bit sequence. Walking blocks cyclically from slot s, each follower of a
  block with capacity n' > 0 carries the next n' bits in its top n' bit
  positions (first bit at the MSB); low bits are preserved. The three
  header followers of slot 0 are skipped. The sequence may end mid-
  follower: only its leading bits are replaced, and every later follower
  keeps its encrypted value.
"""

import numpy as np

from .bits import BitString, Header, bcf_encode, encode_header
from .blocks import BlockLayout, follower_tables
from .capacity import (
    BCF_CODE_BITS,
    HEADER_FOLLOWERS,
    LENGTH_FIELD_BITS,
    CapacityProfile,
)
from .crypto import TAG_AUX, TAG_PAYLOAD, KeyMaterial, stream_encrypt_bits
from .errors import (
    AuxDeadlock,
    BootstrapUnderflow,
    ChunkLengthMismatch,
    DimensionMismatch,
    InsufficientCapacity,
)
from .image import GrayImage, Role

HEADER_BITS = 24


def embed_bits_in_pixel(p: int, chunk: BitString, n_prime: int) -> int:
    """Replace the top n' bits of p with chunk, first chunk bit at the MSB."""
    if len(chunk) != n_prime:
        raise ChunkLengthMismatch(f"chunk is {len(chunk)} bits, capacity {n_prime}")
    if n_prime == 0:
        return p
    keep = p & (0xFF >> n_prime)
    return keep | (chunk.to_int() << (8 - n_prime))


def cyclic_slot_order(block_count: int, start: int) -> np.ndarray:
    """Slot visiting order s, s+1, ..., wrapping to s-1."""
    return (np.arange(block_count) + start) % block_count


def usable_position_bits(
    bcfs: np.ndarray, follower_counts: np.ndarray, start: int
) -> np.ndarray:
    """Carrying capacity of each cyclic position, header followers excluded."""
    counts = follower_counts.copy()
    counts[0] = max(0, counts[0] - HEADER_FOLLOWERS)
    per_slot = bcfs * counts
    return per_slot[cyclic_slot_order(bcfs.size, start)]


def _block_sites(
    ft, slot: int, n_prime: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Bit sites (rows, cols, shifts) of one slot's carrying followers."""
    rows, cols = ft.follower_slice(slot)
    if slot == 0:
        rows, cols = rows[HEADER_FOLLOWERS:], cols[HEADER_FOLLOWERS:]
    if n_prime == 0 or rows.size == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty, empty
    shifts = np.tile(np.arange(7, 7 - n_prime, -1, dtype=np.int64), rows.size)
    return np.repeat(rows, n_prime), np.repeat(cols, n_prime), shifts


def embedded_bit_sites(
    bcfs: np.ndarray, layout: BlockLayout, start_block: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All bit sites of the embedded stream, in stream order.

    Returns (rows, cols, shifts): stream bit t lives at bit position
    shifts[t] of pixel (rows[t], cols[t]).
    """
    ft = follower_tables(layout)
    parts_r, parts_c, parts_s = [], [], []
    for slot in cyclic_slot_order(layout.block_count, start_block):
        r, c, s = _block_sites(ft, int(slot), int(bcfs[slot]))
        parts_r.append(r)
        parts_c.append(c)
        parts_s.append(s)
    return (
        np.concatenate(parts_r),
        np.concatenate(parts_c),
        np.concatenate(parts_s),
    )


def build_aux_stream(
    profile: CapacityProfile, saved_pixels: bytes, keys: KeyMaterial
) -> BitString:
    """Saved header bytes plus all non-start capacity codes, optionally
    masked with the shared-key AUX stream."""
    if len(saved_pixels) != HEADER_FOLLOWERS:
        raise ValueError(f"expected {HEADER_FOLLOWERS} saved bytes")
    n_b = profile.layout.block_count
    order = (profile.start_block + 1 + np.arange(n_b - 1)) % n_b
    codes = np.array(
        [bcf_encode(int(v)) for v in profile.bcfs[order]], dtype=np.uint8
    )
    code_bits = (
        (codes[:, None] >> np.arange(BCF_CODE_BITS - 1, -1, -1)) & 1
    ).reshape(-1)
    stream = BitString.from_bytes(saved_pixels) + BitString(code_bits)
    if keys.ks is not None:
        stream = stream_encrypt_bits(stream, keys.ks, TAG_AUX)
    return stream


def embed_all(
    encrypted_img: GrayImage,
    profile: CapacityProfile,
    payload: BitString,
    keys: KeyMaterial,
) -> GrayImage:
    """Write header, auxiliary stream, and framed payload into an encrypted
    image, returning the marked image.

    The profile must describe the plaintext content of encrypted_img (same
    permuted block order). Requires kd; ks optional.
    """
    if encrypted_img.role != Role.ENCRYPTED:
        raise ValueError("embedding expects an encrypted image")
    if keys.kd is None:
        raise ValueError("embedding requires the data-hider key kd")
    layout = profile.layout
    if (
        encrypted_img.width != layout.image_width
        or encrypted_img.height != layout.image_height
    ):
        raise DimensionMismatch("image dimensions disagree with the profile layout")

    ft = follower_tables(layout)
    if ft.follower_count(0) < HEADER_FOLLOWERS:
        raise InsufficientCapacity(
            f"block 0 has {ft.follower_count(0)} followers; "
            f"{HEADER_FOLLOWERS} are needed for the header"
        )

    start = profile.start_block
    n_b = layout.block_count
    position_bits = usable_position_bits(profile.bcfs, profile.follower_counts, start)
    total_usable = int(position_bits.sum())
    needed = profile.aux_bits + LENGTH_FIELD_BITS + len(payload)
    if needed > total_usable:
        raise InsufficientCapacity(
            f"embedded stream needs {needed} bits but only {total_usable} "
            f"are usable ({needed - total_usable} bits short)",
            shortfall=needed - total_usable,
        )

    # Hierarchical decodability: block j's capacity code must be extractable
    # from positions 0..j-1 before the cursor arrives at j.
    prefix = np.cumsum(position_bits)
    required = HEADER_BITS + BCF_CODE_BITS * np.arange(1, n_b)
    violations = np.nonzero(prefix[:-1] < required)[0]
    if violations.size:
        j = int(violations[0]) + 1
        if j == 1:
            raise BootstrapUnderflow(
                f"start block carries {int(prefix[0])} bits, "
                f"fewer than the {int(required[0])} needed to bootstrap"
            )
        raise AuxDeadlock(
            f"at cyclic position {j}, only {int(prefix[j - 1])} bits precede "
            f"it but {int(required[j - 1])} are required"
        )

    marked = encrypted_img.pixels.copy()
    hdr_rows, hdr_cols = ft.follower_slice(0)
    hdr_rows, hdr_cols = hdr_rows[:HEADER_FOLLOWERS], hdr_cols[:HEADER_FOLLOWERS]
    saved = bytes(marked[hdr_rows, hdr_cols])
    header = Header(start, bcf_encode(int(profile.bcfs[start])))
    marked[hdr_rows, hdr_cols] = np.frombuffer(
        encode_header(header).to_bytes(), dtype=np.uint8
    )

    aux = build_aux_stream(profile, saved, keys)
    frame = BitString.from_int(len(payload), LENGTH_FIELD_BITS) + payload
    frame = stream_encrypt_bits(frame, keys.kd, TAG_PAYLOAD)
    stream = (aux + frame).array

    rows, cols, shifts = embedded_bit_sites(profile.bcfs, layout, start)
    n = stream.size
    rows, cols, shifts = rows[:n], cols[:n], shifts[:n]
    clear = (~(np.int64(1) << shifts) & 0xFF).astype(np.uint8)
    value = (stream.astype(np.int64) << shifts).astype(np.uint8)
    np.bitwise_and.at(marked, (rows, cols), clear)
    np.bitwise_or.at(marked, (rows, cols), value)
    return GrayImage(marked, Role.MARKED)
