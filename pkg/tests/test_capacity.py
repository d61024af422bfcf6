import numpy as np
import pytest

from rdhei import (
    GrayImage,
    apply_permutation,
    bcf_from_errors,
    block_prediction_errors,
    block_ref,
    build_layout,
    profile_image,
)
from rdhei.blocks import slot_shapes

from conftest import synth_image


def test_errors_of_constant_block_are_zero():
    img = GrayImage(np.full((3, 6), 9, dtype=np.uint8))
    layout = build_layout(6, 3, 3, 3)
    errors = block_prediction_errors(block_ref(layout, 0), img)
    assert errors.tolist() == [0] * 8


def test_errors_follow_follower_order():
    px = np.array(
        [[10, 12, 11], [9, 10, 13], [10, 8, 10], [0, 0, 0]], dtype=np.uint8
    )
    img = GrayImage(px)
    layout = build_layout(3, 4, 3, 3)
    errors = block_prediction_errors(block_ref(layout, 0), img)
    assert errors.tolist() == [0, 2, 1, -1, 3, 0, -2, 0]


def test_single_pixel_block_has_no_errors():
    img = GrayImage(np.zeros((4, 4), dtype=np.uint8))
    layout = build_layout(4, 4, 3, 3)
    assert block_prediction_errors(block_ref(layout, 3), img).size == 0


@pytest.mark.parametrize(
    "e_m,n_prime",
    [(0, 8), (1, 6), (2, 5), (3, 5), (4, 4), (31, 2), (32, 1), (63, 1),
     (64, 0), (127, 0), (128, 0), (200, 0), (255, 0)],
)
def test_bcf_from_max_error(e_m, n_prime):
    errors = [e_m, -1] if e_m else []
    assert bcf_from_errors(errors) == n_prime


def test_bcf_never_seven():
    for e_m in range(256):
        assert bcf_from_errors([e_m]) != 7


def test_bcf_monotone_after_first_step():
    values = [bcf_from_errors([e]) for e in range(256)]
    assert values[0] == 8 and values[1] == 6
    for prev, cur in zip(values[1:], values[2:]):
        assert cur <= prev


def test_error_bound_invariant_holds_per_block():
    # every follower obeys |error| < 2^n for the block's derived exponent
    rng = np.random.default_rng(10)
    img = synth_image(rng, 30, 30)
    layout = build_layout(30, 30, 3, 3)
    profile = profile_image(img, layout)
    for k in range(layout.block_count):
        n_prime = int(profile.bcfs[k])
        if n_prime == 0:
            continue
        n = 0 if n_prime == 8 else 7 - n_prime
        errors = block_prediction_errors(block_ref(layout, k), img)
        assert (np.abs(errors) < (1 << n)).all() if errors.size else True


def test_constant_image_profile():
    img = GrayImage(np.full((9, 9), 77, dtype=np.uint8))
    layout = build_layout(9, 9, 3, 3)
    profile = profile_image(img, layout)
    assert (profile.bcfs == 8).all()
    assert profile.total_capacity == 9 * 8 * 8 == 576
    assert profile.bcf_histogram()[8] == 9


def test_saturated_noise_has_zero_capacity():
    # alternating 0/255 makes every block's max error >= 128
    px = np.zeros((12, 12), dtype=np.uint8)
    px[::2, ::2] = 255
    profile = profile_image(GrayImage(px), build_layout(12, 12, 3, 3))
    assert profile.total_capacity == 0
    assert (profile.bcfs == 0).all()


def test_total_matches_brute_force_recount():
    rng = np.random.default_rng(11)
    for b in (3, 4, 5):
        img = synth_image(rng, 26, 31)
        layout = build_layout(31, 26, b, b)
        profile = profile_image(img, layout)
        recount = 0
        for k in range(layout.block_count):
            ref = block_ref(layout, k)
            errors = block_prediction_errors(ref, img)
            recount += bcf_from_errors(errors) * len(ref.follower_addrs)
        assert profile.total_capacity == recount
        assert (profile.block_capacities == profile.bcfs * profile.follower_counts).all()


def test_overhead_accounting():
    rng = np.random.default_rng(12)
    img = synth_image(rng, 27, 27)
    layout = build_layout(27, 27, 3, 3)
    profile = profile_image(img, layout)
    n_b = layout.block_count
    assert profile.aux_bits == 24 + 3 * (n_b - 1)
    assert profile.header_displaced_bits == 3 * int(profile.bcfs[0])
    assert (
        profile.net_payload_bits
        == profile.total_capacity - profile.header_displaced_bits
        - profile.aux_bits - 32
    )
    assert profile.bpp == profile.net_payload_bits / (27 * 27)


def test_profile_is_permutation_invariant_in_totals():
    rng = np.random.default_rng(13)
    img = synth_image(rng, 18, 24)
    layout = build_layout(24, 18, 3, 3)
    heights, widths = slot_shapes(layout)
    perm = np.empty(layout.block_count, dtype=np.int64)
    for shape in set(zip(heights.tolist(), widths.tolist())):
        slots = np.nonzero((heights == shape[0]) & (widths == shape[1]))[0]
        perm[slots] = rng.permutation(slots)

    unpermuted = profile_image(img, layout)
    shuffled = profile_image(img, layout, perm)
    assert shuffled.total_capacity == unpermuted.total_capacity
    assert shuffled.bcf_histogram() == unpermuted.bcf_histogram()
    # and the perm argument matches profiling the physically permuted image
    direct = profile_image(apply_permutation(img, layout, perm), layout)
    assert np.array_equal(direct.bcfs, shuffled.bcfs)
    assert direct.start_block == shuffled.start_block


def test_start_block_tie_break_is_lowest_index():
    img = GrayImage(np.full((9, 9), 5, dtype=np.uint8))
    profile = profile_image(img, build_layout(9, 9, 3, 3))
    assert profile.start_block == 0
