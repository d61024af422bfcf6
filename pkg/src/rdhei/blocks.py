"""Block partitioning, leader/follower indexing, and block permutation.

The image is tiled by ceil-division into a grid of m x l blocks; blocks on
the right and bottom edges are truncated to the image boundary. Grid slots
are numbered row-major. The leader of an h x w block sits at block-local
(h // 2, w // 2); every other pixel is a follower, enumerated in row-major
order within the block.

A permutation maps original grid slot g to target slot perm[g]. Only slots
of identical shape may be exchanged, so a permuted raster is always
well-formed; after permutation the block sequence is simply row-major over
the grid again.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    ImageTooSmall,
    IndexOutOfRange,
    NotAPermutation,
    ShapeClassMismatch,
)
from .image import GrayImage


@dataclass(frozen=True)
class BlockLayout:
    image_width: int
    image_height: int
    block_width: int
    block_height: int
    blocks_per_row: int
    blocks_per_col: int
    block_count: int


@dataclass
class BlockRef:
    """One block's pixel addresses (row, col) in row-major block order."""

    block_index: int
    pixel_addrs: list[tuple[int, int]]
    leader_ordinal: int

    @property
    def leader_addr(self) -> tuple[int, int]:
        return self.pixel_addrs[self.leader_ordinal]

    @property
    def follower_addrs(self) -> list[tuple[int, int]]:
        return [
            a for i, a in enumerate(self.pixel_addrs) if i != self.leader_ordinal
        ]


def build_layout(
    image_width: int, image_height: int, block_width: int, block_height: int
) -> BlockLayout:
    """Ceil-partition an image into blocks; at least 2 blocks required."""
    if block_width < 1 or block_height < 1:
        raise ValueError("block dimensions must be at least 1")
    if image_width < block_width or image_height < block_height:
        raise ImageTooSmall(
            f"{image_width}x{image_height} image cannot hold a "
            f"{block_width}x{block_height} block"
        )
    per_row = -(-image_width // block_width)
    per_col = -(-image_height // block_height)
    count = per_row * per_col
    if count < 2:
        raise ImageTooSmall(f"layout needs at least 2 blocks, got {count}")
    return BlockLayout(
        image_width=image_width,
        image_height=image_height,
        block_width=block_width,
        block_height=block_height,
        blocks_per_row=per_row,
        blocks_per_col=per_col,
        block_count=count,
    )


def slot_rect(layout: BlockLayout, slot: int) -> tuple[int, int, int, int]:
    """(row0, col0, height, width) of a grid slot, truncated at the edges."""
    if not 0 <= slot < layout.block_count:
        raise IndexOutOfRange(f"slot {slot} outside [0, {layout.block_count})")
    gr, gc = divmod(slot, layout.blocks_per_row)
    r0 = gr * layout.block_height
    c0 = gc * layout.block_width
    h = min(layout.block_height, layout.image_height - r0)
    w = min(layout.block_width, layout.image_width - c0)
    return r0, c0, h, w


@lru_cache(maxsize=32)
def slot_shapes(layout: BlockLayout) -> tuple[np.ndarray, np.ndarray]:
    """Per-slot (heights, widths) arrays; read-only."""
    slots = np.arange(layout.block_count)
    rows = slots // layout.blocks_per_row
    cols = slots % layout.blocks_per_row
    heights = np.minimum(
        layout.block_height, layout.image_height - rows * layout.block_height
    )
    widths = np.minimum(
        layout.block_width, layout.image_width - cols * layout.block_width
    )
    heights.setflags(write=False)
    widths.setflags(write=False)
    return heights, widths


def validate_permutation(layout: BlockLayout, perm: np.ndarray) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.int64)
    if perm.shape != (layout.block_count,) or not np.array_equal(
        np.sort(perm), np.arange(layout.block_count)
    ):
        raise NotAPermutation(
            f"need a bijection on [0, {layout.block_count}), got shape {perm.shape}"
        )
    heights, widths = slot_shapes(layout)
    if not (
        np.array_equal(heights[perm], heights) and np.array_equal(widths[perm], widths)
    ):
        bad = int(np.nonzero(heights[perm] != heights)[0][0]) if not np.array_equal(
            heights[perm], heights
        ) else int(np.nonzero(widths[perm] != widths)[0][0])
        raise ShapeClassMismatch(
            f"slot {bad} maps to a slot of different shape"
        )
    return perm


def invert_perm_array(perm: np.ndarray) -> np.ndarray:
    inverse = np.empty_like(perm)
    inverse[perm] = np.arange(perm.size)
    return inverse


def block_ref(
    layout: BlockLayout, permuted_index: int, perm: np.ndarray | None = None
) -> BlockRef:
    """Addresses of the block occupying permuted slot `permuted_index`.

    With perm=None the image is assumed to be in permuted order already and
    the addresses are those of the grid slot itself. With a permutation
    given, the addresses point into the unpermuted image, at original slot
    perm^-1(permuted_index). Shape-class permutation makes both rectangles
    congruent.
    """
    if not 0 <= permuted_index < layout.block_count:
        raise IndexOutOfRange(
            f"block index {permuted_index} outside [0, {layout.block_count})"
        )
    if perm is None:
        grid_slot = permuted_index
    else:
        perm = validate_permutation(layout, perm)
        grid_slot = int(invert_perm_array(perm)[permuted_index])
    r0, c0, h, w = slot_rect(layout, grid_slot)
    addrs = [(r0 + i, c0 + j) for i in range(h) for j in range(w)]
    leader_ordinal = (h // 2) * w + (w // 2)
    return BlockRef(
        block_index=permuted_index, pixel_addrs=addrs, leader_ordinal=leader_ordinal
    )


def permute_pixels(
    pixels: np.ndarray, layout: BlockLayout, perm: np.ndarray
) -> np.ndarray:
    perm = validate_permutation(layout, perm)
    out = np.empty_like(pixels)
    for g in range(layout.block_count):
        r0, c0, h, w = slot_rect(layout, g)
        tr, tc, th, tw = slot_rect(layout, int(perm[g]))
        out[tr : tr + th, tc : tc + tw] = pixels[r0 : r0 + h, c0 : c0 + w]
    return out


def apply_permutation(
    img: GrayImage, layout: BlockLayout, perm: np.ndarray
) -> GrayImage:
    """Move each block from slot g to slot perm[g]; interiors are untouched."""
    _check_dims(img, layout)
    return GrayImage(permute_pixels(img.pixels, layout, perm), img.role)


def invert_permutation(
    img: GrayImage, layout: BlockLayout, perm: np.ndarray
) -> GrayImage:
    _check_dims(img, layout)
    perm = validate_permutation(layout, perm)
    return GrayImage(
        permute_pixels(img.pixels, layout, invert_perm_array(perm)), img.role
    )


def _check_dims(img: GrayImage, layout: BlockLayout):
    if img.width != layout.image_width or img.height != layout.image_height:
        from .errors import DimensionMismatch

        raise DimensionMismatch(
            f"image is {img.width}x{img.height}, layout expects "
            f"{layout.image_width}x{layout.image_height}"
        )


@dataclass(frozen=True)
class FollowerIndex:
    """Flat per-slot leader/follower address tables for vectorized engines.

    Followers of slot k occupy f_rows/f_cols[f_start[k]:f_start[k+1]], in
    row-major block order with the leader removed.
    """

    leader_rows: np.ndarray
    leader_cols: np.ndarray
    f_rows: np.ndarray
    f_cols: np.ndarray
    f_start: np.ndarray

    def follower_count(self, slot: int) -> int:
        return int(self.f_start[slot + 1] - self.f_start[slot])

    @property
    def follower_counts(self) -> np.ndarray:
        return np.diff(self.f_start)

    def follower_slice(self, slot: int) -> tuple[np.ndarray, np.ndarray]:
        a, b = int(self.f_start[slot]), int(self.f_start[slot + 1])
        return self.f_rows[a:b], self.f_cols[a:b]


@lru_cache(maxsize=16)
def follower_tables(layout: BlockLayout) -> FollowerIndex:
    n = layout.block_count
    leader_rows = np.empty(n, dtype=np.int64)
    leader_cols = np.empty(n, dtype=np.int64)
    f_rows: list[np.ndarray] = []
    f_cols: list[np.ndarray] = []
    f_start = np.empty(n + 1, dtype=np.int64)
    f_start[0] = 0
    for k in range(n):
        r0, c0, h, w = slot_rect(layout, k)
        rows = np.repeat(np.arange(r0, r0 + h), w)
        cols = np.tile(np.arange(c0, c0 + w), h)
        lead = (h // 2) * w + (w // 2)
        leader_rows[k] = rows[lead]
        leader_cols[k] = cols[lead]
        keep = np.arange(h * w) != lead
        f_rows.append(rows[keep])
        f_cols.append(cols[keep])
        f_start[k + 1] = f_start[k] + h * w - 1
    out = FollowerIndex(
        leader_rows=leader_rows,
        leader_cols=leader_cols,
        f_rows=np.concatenate(f_rows) if f_rows else np.empty(0, dtype=np.int64),
        f_cols=np.concatenate(f_cols) if f_cols else np.empty(0, dtype=np.int64),
        f_start=f_start,
    )
    for arr in (out.leader_rows, out.leader_cols, out.f_rows, out.f_cols, out.f_start):
        arr.setflags(write=False)
    return out
