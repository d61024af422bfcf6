import numpy as np
import pytest

from rdhei import (
    BitString,
    GrayImage,
    KeyMaterial,
    Role,
    build_aux_stream,
    build_layout,
    embed_all,
    embed_bits_in_pixel,
    embedded_bit_sites,
    profile_image,
    stream_encrypt_bits,
    xor_cipher_image,
)
from rdhei.crypto import TAG_AUX
from rdhei.errors import ChunkLengthMismatch, InsufficientCapacity

from conftest import FIXED_KEYS


def test_embed_bits_replaces_top_bits():
    # 01101001 with chunk [1,0] in the top two bits -> 10101001
    assert embed_bits_in_pixel(105, BitString([1, 0]), 2) == 169


def test_embed_zero_capacity_keeps_pixel():
    assert embed_bits_in_pixel(171, BitString(), 0) == 171


def test_embed_full_replacement():
    assert embed_bits_in_pixel(123, BitString([0] * 8), 8) == 0
    assert embed_bits_in_pixel(0, BitString([1] * 8), 8) == 255


def test_embed_chunk_length_must_match():
    with pytest.raises(ChunkLengthMismatch):
        embed_bits_in_pixel(0, BitString([1]), 2)


def _profile_for(pixels, block=3):
    img = GrayImage(pixels)
    layout = build_layout(img.width, img.height, block, block)
    return img, layout, profile_image(img, layout)


def test_aux_stream_layout_and_order():
    # 9 constant blocks: all capacity codes are 7; start block is 0, so
    # force a different start to observe the cyclic order
    img, layout, profile = _profile_for(np.full((9, 9), 50, dtype=np.uint8))
    profile.start_block = 4
    saved = bytes([0xAA, 0xBB, 0xCC])
    aux = build_aux_stream(profile, saved, KeyMaterial())
    assert len(aux) == 24 + 3 * 8 == 48
    assert aux[:24].to_bytes() == saved
    # blocks 5,6,7,8,0,1,2,3 in that order, each coded as 7 (= capacity 8)
    assert aux[24:].to_bytes() == BitString([1] * 24).to_bytes()


def test_aux_stream_cyclic_order_visible_with_mixed_codes():
    px = np.full((9, 9), 50, dtype=np.uint8)
    px[0:3, 3:6] = np.array([[50, 51, 50], [50, 50, 50], [50, 50, 50]])  # n'=6
    img, layout, profile = _profile_for(px)
    profile.start_block = 4
    aux = build_aux_stream(profile, bytes(3), KeyMaterial())
    codes = [aux[24 + 3 * t : 27 + 3 * t].to_int() for t in range(8)]
    # cyclic order 5,6,7,8,0,1,2,3; block 1 holds the n'=6 block
    assert codes == [7, 7, 7, 7, 7, 6, 7, 7]


def test_aux_stream_ks_is_involution():
    img, layout, profile = _profile_for(np.full((9, 9), 9, dtype=np.uint8))
    plain = build_aux_stream(profile, bytes(3), KeyMaterial())
    masked = build_aux_stream(profile, bytes(3), FIXED_KEYS)
    assert masked != plain
    assert stream_encrypt_bits(masked, FIXED_KEYS.ks, TAG_AUX) == plain


def test_embed_all_constant_image_trace():
    img, layout, profile = _profile_for(np.full((9, 9), 100, dtype=np.uint8))
    encrypted = xor_cipher_image(img, FIXED_KEYS.kc)
    marked = embed_all(encrypted, profile, BitString(), FIXED_KEYS)
    assert marked.role == Role.MARKED

    # stream = 48 aux + 32 frame bits; block 0 carries 40 usable bits
    # (5 followers after the header), block 1 the next 40
    rows, cols, shifts = embedded_bit_sites(profile.bcfs, layout, 0)
    touched = {(r, c) for r, c in zip(rows[:80].tolist(), cols[:80].tolist())}
    header_addrs = {(0, 0), (0, 1), (0, 2)}  # first three followers of block 0
    diff = marked.pixels != encrypted.pixels
    for r, c in zip(*np.nonzero(diff)):
        assert (int(r), int(c)) in touched | header_addrs
    # untouched blocks are bit-identical
    assert np.array_equal(marked.pixels[:, 6:], encrypted.pixels[:, 6:])
    assert np.array_equal(marked.pixels[3:, :], encrypted.pixels[3:, :])


def test_embed_preserves_low_bits_and_leaders():
    rng = np.random.default_rng(40)
    px = np.clip(rng.integers(90, 110, (12, 12)), 0, 255).astype(np.uint8)
    img, layout, profile = _profile_for(px)
    encrypted = xor_cipher_image(img, FIXED_KEYS.kc)
    payload = BitString(rng.integers(0, 2, profile.net_payload_bits, dtype=np.uint8))
    marked = embed_all(encrypted, profile, payload, FIXED_KEYS)
    from rdhei.blocks import follower_tables

    ft = follower_tables(layout)
    for k in range(layout.block_count):
        lr, lc = int(ft.leader_rows[k]), int(ft.leader_cols[k])
        assert marked.pixels[lr, lc] == encrypted.pixels[lr, lc]
        n_prime = int(profile.bcfs[k])
        rows, cols = ft.follower_slice(k)
        if k == 0:
            rows, cols = rows[3:], cols[3:]
        if n_prime == 8:
            continue
        low = 0xFF >> n_prime
        assert np.array_equal(
            marked.pixels[rows, cols] & low, encrypted.pixels[rows, cols] & low
        )


def test_payload_boundary_exact_fit_then_overflow():
    img, layout, profile = _profile_for(np.full((9, 9), 100, dtype=np.uint8))
    encrypted = xor_cipher_image(img, FIXED_KEYS.kc)
    exact = BitString([1] * profile.net_payload_bits)
    embed_all(encrypted, profile, exact, FIXED_KEYS)  # must succeed
    with pytest.raises(InsufficientCapacity) as exc:
        embed_all(encrypted, profile, exact + BitString([0]), FIXED_KEYS)
    assert exc.value.shortfall == 1


def test_embed_requires_encrypted_role_and_kd():
    img, layout, profile = _profile_for(np.full((9, 9), 100, dtype=np.uint8))
    with pytest.raises(ValueError):
        embed_all(img, profile, BitString(), FIXED_KEYS)
    encrypted = xor_cipher_image(img, FIXED_KEYS.kc)
    with pytest.raises(ValueError):
        embed_all(encrypted, profile, BitString(), KeyMaterial(kc=FIXED_KEYS.kc))


def test_vectorized_embed_matches_scalar_reference():
    # rebuild the marked image one pixel at a time from the scalar ops and
    # the documented cursor order; the engine must agree bit for bit
    rng = np.random.default_rng(41)
    px = (100 + np.add.outer(np.arange(15), np.arange(15)) % 6).astype(np.uint8)
    px[3:6, 3:6] = 180
    img, layout, profile = _profile_for(px)
    encrypted = xor_cipher_image(img, FIXED_KEYS.kc)
    payload = BitString(rng.integers(0, 2, 201, dtype=np.uint8))  # odd: the
    # stream ends mid-follower, exercising the partial tail
    marked = embed_all(encrypted, profile, payload, FIXED_KEYS)

    from rdhei.bits import Header, bcf_encode, encode_header
    from rdhei.blocks import follower_tables
    from rdhei.crypto import TAG_PAYLOAD

    ft = follower_tables(layout)
    expected = encrypted.pixels.copy()
    hr, hc = ft.follower_slice(0)
    saved = bytes(expected[hr[:3], hc[:3]])
    s = profile.start_block
    header = encode_header(Header(s, bcf_encode(int(profile.bcfs[s]))))
    expected[hr[:3], hc[:3]] = np.frombuffer(header.to_bytes(), dtype=np.uint8)

    aux = build_aux_stream(profile, saved, FIXED_KEYS)
    frame = BitString.from_int(len(payload), 32) + payload
    stream = aux + stream_encrypt_bits(frame, FIXED_KEYS.kd, TAG_PAYLOAD)

    pos = 0
    n_b = layout.block_count
    for step in range(n_b):
        slot = (s + step) % n_b
        n_prime = int(profile.bcfs[slot])
        rows, cols = ft.follower_slice(slot)
        if slot == 0:
            rows, cols = rows[3:], cols[3:]
        for r, c in zip(rows.tolist(), cols.tolist()):
            if pos >= len(stream) or n_prime == 0:
                continue
            # a partial tail replaces only the leading bits of the pixel
            take = min(n_prime, len(stream) - pos)
            chunk = stream[pos : pos + take]
            expected[r, c] = embed_bits_in_pixel(int(expected[r, c]), chunk, take)
            pos += take
    assert np.array_equal(marked.pixels, expected)


def test_bit_sites_cover_each_follower_bit_once():
    img, layout, profile = _profile_for(np.full((9, 9), 100, dtype=np.uint8))
    rows, cols, shifts = embedded_bit_sites(profile.bcfs, layout, profile.start_block)
    sites = set(zip(rows.tolist(), cols.tolist(), shifts.tolist()))
    assert len(sites) == len(rows)  # no duplicates
    assert len(rows) == 9 * 8 * 8 - 3 * 8  # total capacity minus header followers
