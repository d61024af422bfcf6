"""End-to-end flows tying the block, crypto, and embedding stages together."""

from .bits import BitString
from .blocks import apply_permutation, build_layout
from .capacity import CapacityProfile, profile_image
from .crypto import KeyMaterial, keyed_block_permutation, xor_cipher_image
from .embed import embed_all
from .extract import extract_payload
from .image import GrayImage
from .recover import recover_image


def _layout_for(img: GrayImage, block_size: tuple[int, int]):
    bw, bh = block_size
    return build_layout(img.width, img.height, bw, bh)


def analyze(
    img: GrayImage, block_size: tuple[int, int] = (3, 3), kc: bytes | None = None
) -> CapacityProfile:
    """Capacity profile of a plaintext image. The permutation only reorders
    blocks, so totals are identical with or without kc."""
    layout = _layout_for(img, block_size)
    if kc is None:
        return profile_image(img, layout)
    perm = keyed_block_permutation(kc, layout)
    return profile_image(img, layout, perm)


def conceal(
    img: GrayImage,
    payload: BitString,
    keys: KeyMaterial,
    block_size: tuple[int, int] = (3, 3),
) -> tuple[GrayImage, CapacityProfile]:
    """Permute, profile, encrypt, and embed. Needs kc and kd; ks optional."""
    if keys.kc is None:
        raise ValueError("concealing requires the content-owner key kc")
    layout = _layout_for(img, block_size)
    perm = keyed_block_permutation(keys.kc, layout)
    permuted = apply_permutation(img, layout, perm)
    profile = profile_image(permuted, layout)
    encrypted = xor_cipher_image(permuted, keys.kc)
    marked = embed_all(encrypted, profile, payload, keys)
    return marked, profile


def reveal(
    marked: GrayImage, keys: KeyMaterial, block_size: tuple[int, int] = (3, 3)
) -> BitString:
    """Extract the payload from a marked image. Needs kd (and ks if used)."""
    return extract_payload(marked, _layout_for(marked, block_size), keys)


def restore(
    marked: GrayImage, keys: KeyMaterial, block_size: tuple[int, int] = (3, 3)
) -> GrayImage:
    """Rebuild the original image from a marked image. Needs kc (and ks if
    used), never kd."""
    return recover_image(marked, _layout_for(marked, block_size), keys)
