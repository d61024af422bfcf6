"""Separable reversible data hiding in encrypted grayscale images.

The codec reserves room by analyzing per-block prediction errors of the
plaintext image, stream-encrypts the permuted image, and replaces follower
MSBs of the encrypted pixels with a self-describing capacity map plus an
encrypted payload. Payload extraction needs only the data-hider key, and
bit-exact image recovery needs only the content-owner key.
"""

from .bits import (
    BitString,
    Header,
    bcf_decode,
    bcf_encode,
    decode_header,
    encode_header,
)
from .blocks import (
    BlockLayout,
    BlockRef,
    apply_permutation,
    block_ref,
    build_layout,
    invert_permutation,
)
from .capacity import (
    CapacityProfile,
    bcf_from_errors,
    block_prediction_errors,
    profile_image,
)
from .crypto import (
    TAG_AUX,
    TAG_PAYLOAD,
    TAG_PERM,
    TAG_PIXEL,
    KeyMaterial,
    keyed_block_permutation,
    keystream_bytes,
    stream_encrypt_bits,
    xor_cipher_image,
)
from .embed import (
    build_aux_stream,
    embed_all,
    embed_bits_in_pixel,
    embedded_bit_sites,
)
from .extract import (
    BootstrapResult,
    bootstrap,
    extract_bits_from_pixel,
    extract_payload,
)
from .image import GrayImage, Role, psnr, read_pgm, write_pgm
from .pipeline import analyze, conceal, restore, reveal
from .recover import candidate_pixel, recover_image, resolve_original

__version__ = "0.1.0"

__all__ = [
    "BitString",
    "Header",
    "bcf_decode",
    "bcf_encode",
    "decode_header",
    "encode_header",
    "BlockLayout",
    "BlockRef",
    "apply_permutation",
    "block_ref",
    "build_layout",
    "invert_permutation",
    "CapacityProfile",
    "bcf_from_errors",
    "block_prediction_errors",
    "profile_image",
    "TAG_AUX",
    "TAG_PAYLOAD",
    "TAG_PERM",
    "TAG_PIXEL",
    "KeyMaterial",
    "keyed_block_permutation",
    "keystream_bytes",
    "stream_encrypt_bits",
    "xor_cipher_image",
    "build_aux_stream",
    "embed_all",
    "embed_bits_in_pixel",
    "embedded_bit_sites",
    "BootstrapResult",
    "bootstrap",
    "extract_bits_from_pixel",
    "extract_payload",
    "GrayImage",
    "Role",
    "psnr",
    "read_pgm",
    "write_pgm",
    "analyze",
    "conceal",
    "restore",
    "reveal",
    "candidate_pixel",
    "recover_image",
    "resolve_original",
    "__version__",
]
