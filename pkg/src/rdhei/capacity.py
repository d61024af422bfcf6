"""Prediction-error analysis and per-block capacity accounting.

Each follower's prediction error is its intensity minus the block leader's.
With e_m the largest absolute error in the block, the block-wide exponent n
is the smallest value in [0, 7] with e_m < 2^n (clamped to 7 when e_m is
128 or more), and every follower can then carry

    n' = 8        if n == 0   (followers equal the leader exactly)
    n' = 8 - n - 1 otherwise   (one bit is reserved for the error sign)

data bits in its most significant positions. n' = 7 is unreachable.
"""

from dataclasses import dataclass

import numpy as np

from .bits import HEADER_BITS
from .blocks import (
    BlockLayout,
    BlockRef,
    FollowerIndex,
    follower_tables,
    validate_permutation,
)
from .image import GrayImage, Role

LENGTH_FIELD_BITS = 32
BCF_CODE_BITS = 3
HEADER_FOLLOWERS = 3

_POWERS = np.array([1, 2, 4, 8, 16, 32, 64, 128], dtype=np.int64)


def block_prediction_errors(block: BlockRef, img: GrayImage) -> np.ndarray:
    """Signed follower-minus-leader differences, in follower order."""
    px = img.pixels
    lr, lc = block.leader_addr
    leader = int(px[lr, lc])
    return np.array(
        [int(px[r, c]) - leader for r, c in block.follower_addrs], dtype=np.int64
    )


def bcf_from_errors(errors) -> int:
    """Bits-per-follower for a block with the given prediction errors."""
    errors = np.asarray(errors, dtype=np.int64)
    e_m = int(np.abs(errors).max()) if errors.size else 0
    n = min(int(np.searchsorted(_POWERS, e_m, side="right")), 7)
    return 8 if n == 0 else 7 - n


def _bcfs_by_slot(pixels: np.ndarray, ft: FollowerIndex) -> np.ndarray:
    """Vectorized per-slot capacity values on a slot-addressed raster."""
    n = ft.leader_rows.size
    leaders = pixels[ft.leader_rows, ft.leader_cols].astype(np.int64)
    followers = pixels[ft.f_rows, ft.f_cols].astype(np.int64)
    counts = ft.follower_counts
    abs_err = np.abs(followers - np.repeat(leaders, counts))
    e_m = np.zeros(n, dtype=np.int64)
    start = ft.f_start
    for k in range(n):
        if start[k + 1] > start[k]:
            e_m[k] = abs_err[start[k] : start[k + 1]].max()
    n_exp = np.minimum(np.searchsorted(_POWERS, e_m, side="right"), 7)
    return np.where(n_exp == 0, 8, 7 - n_exp).astype(np.int64)


@dataclass
class CapacityProfile:
    """Per-block capacity values for a permuted image plus the derived
    image-level accounting."""

    layout: BlockLayout
    bcfs: np.ndarray
    follower_counts: np.ndarray
    block_capacities: np.ndarray
    total_capacity: int
    start_block: int
    aux_bits: int
    header_displaced_bits: int
    net_payload_bits: int
    bpp: float

    def bcf_histogram(self) -> list[int]:
        """Block counts per capacity value 0..8 (index 7 is always 0)."""
        return [int(np.count_nonzero(self.bcfs == v)) for v in range(9)]

    def as_report(self) -> dict:
        return {
            "schema": 1,
            "block_size": f"{self.layout.block_width}x{self.layout.block_height}",
            "block_count": self.layout.block_count,
            "total_capacity_bits": self.total_capacity,
            "aux_bits": self.aux_bits,
            "net_payload_bits": self.net_payload_bits,
            "bpp": self.bpp,
            "bcf_histogram": self.bcf_histogram(),
        }


def profile_image(
    img: GrayImage, layout: BlockLayout, perm: np.ndarray | None = None
) -> CapacityProfile:
    """Analyze a plaintext image block by block.

    With perm=None the image is taken to be in permuted block order already
    (or unpermuted analysis is wanted); with a permutation given, the image
    is in original order and the profile is indexed by permuted slot. Both
    routes yield identical capacity totals.
    """
    if img.role != Role.PLAIN:
        raise ValueError("capacity analysis runs on the plaintext image")
    if img.width != layout.image_width or img.height != layout.image_height:
        from .errors import DimensionMismatch

        raise DimensionMismatch("image dimensions disagree with the layout")
    ft = follower_tables(layout)
    by_slot = _bcfs_by_slot(img.pixels, ft)
    counts = ft.follower_counts.astype(np.int64)
    if perm is not None:
        perm = validate_permutation(layout, perm)
        bcfs = np.empty_like(by_slot)
        bcfs[perm] = by_slot
    else:
        bcfs = by_slot
    capacities = bcfs * counts  # follower counts are shape-class invariant
    total = int(capacities.sum())
    start = int(np.argmax(capacities))  # ties go to the lowest permuted index
    n_b = layout.block_count
    aux_bits = HEADER_BITS + BCF_CODE_BITS * (n_b - 1)
    displaced = int(bcfs[0]) * min(HEADER_FOLLOWERS, int(counts[0]))
    net = total - aux_bits - displaced - LENGTH_FIELD_BITS
    return CapacityProfile(
        layout=layout,
        bcfs=bcfs,
        follower_counts=counts,
        block_capacities=capacities,
        total_capacity=total,
        start_block=start,
        aux_bits=aux_bits,
        header_displaced_bits=displaced,
        net_payload_bits=net,
        bpp=net / (layout.image_width * layout.image_height),
    )
