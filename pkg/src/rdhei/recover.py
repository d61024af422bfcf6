"""Lossless image reconstruction from a marked image.

Only the content-owner key (plus the shared key, if one masked the
auxiliary stream) is needed: the payload bits in the follower MSBs are
discarded by the splice, and the per-block error bound makes the original
intensity the unique value congruent to the spliced candidate.
"""

import numpy as np

from .blocks import BlockLayout, follower_tables, invert_perm_array, permute_pixels
from .capacity import HEADER_FOLLOWERS
from .crypto import KeyMaterial, keyed_block_permutation, xor_cipher_array
from .extract import bootstrap
from .image import GrayImage, Role


def candidate_pixel(decrypted_follower: int, leader: int, n_prime: int) -> int:
    """Splice: low 8-n' bits from the decrypted follower, top n' from the leader."""
    low_mask = 0xFF >> n_prime if n_prime < 8 else 0
    return (decrypted_follower & low_mask) | (leader & (0xFF ^ low_mask))


def resolve_original(candidate: int, leader: int, n_prime: int) -> int:
    """Pick the unique original intensity compatible with the block's
    error bound, shifting the candidate by one modulus step if needed."""
    if n_prime == 0 or n_prime == 8:
        return candidate
    err = candidate - leader
    half = 1 << (8 - n_prime - 1)
    step = 1 << (8 - n_prime)
    if abs(err) < half:
        result = candidate
    elif err < 0:
        result = candidate + step
    else:
        result = candidate - step
    assert 0 <= result <= 255, f"reconstruction left [0,255]: {result}"
    return result


def _resolve_block_followers(
    dec_followers: np.ndarray, leaders: np.ndarray, n_primes: np.ndarray
) -> np.ndarray:
    """Vectorized candidate splice + resolution over all followers."""
    out = np.empty(dec_followers.size, dtype=np.uint8)
    for v in (0, 8, 1, 2, 3, 4, 5, 6):
        sel = n_primes == v
        if not sel.any():
            continue
        f = dec_followers[sel]
        lead = leaders[sel]
        if v == 0:
            out[sel] = f
            continue
        if v == 8:
            out[sel] = lead
            continue
        low_mask = 0xFF >> v
        cand = ((f & low_mask) | (lead & (0xFF ^ low_mask))).astype(np.int64)
        err = cand - lead.astype(np.int64)
        half = 1 << (8 - v - 1)
        step = 1 << (8 - v)
        res = np.where(
            np.abs(err) < half, cand, np.where(err < 0, cand + step, cand - step)
        )
        # valid inputs stay in [0, 255]; wrong-key garbage wraps mod 256
        out[sel] = (res & 0xFF).astype(np.uint8)
    return out


def recover_image(
    marked: GrayImage, layout: BlockLayout, keys: KeyMaterial
) -> GrayImage:
    """Rebuild the original image bit-exactly; needs kc (and ks if used),
    never kd or the payload."""
    if keys.kc is None:
        raise ValueError("image recovery requires the content-owner key kc")
    boot = bootstrap(marked, layout, keys)

    ft = follower_tables(layout)
    px = marked.pixels.copy()
    hdr_rows, hdr_cols = ft.follower_slice(0)
    px[hdr_rows[:HEADER_FOLLOWERS], hdr_cols[:HEADER_FOLLOWERS]] = np.frombuffer(
        boot.saved_header_pixels, dtype=np.uint8
    )
    dec = xor_cipher_array(px, keys.kc)

    counts = ft.follower_counts
    leaders = np.repeat(dec[ft.leader_rows, ft.leader_cols], counts)
    n_primes = np.repeat(boot.bcfs, counts)
    followers = dec[ft.f_rows, ft.f_cols]
    dec[ft.f_rows, ft.f_cols] = _resolve_block_followers(followers, leaders, n_primes)

    perm = keyed_block_permutation(keys.kc, layout)
    original = permute_pixels(dec, layout, invert_perm_array(perm))
    return GrayImage(original, Role.PLAIN)
