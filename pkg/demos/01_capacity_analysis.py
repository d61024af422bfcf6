"""How much data fits in an image? A walk through capacity analysis.

Every block predicts its followers from the central leader pixel. The
largest absolute prediction error in the block decides how many MSBs of
each follower can be replaced and still recovered: 8 bits for a perfectly
flat block, down to 0 for a block spanning more than half the intensity
range.
"""

import numpy as np

import rdhei


def main():
    # three textures side by side: flat sky, smooth ramp, hard noise
    px = np.zeros((18, 54), dtype=np.uint8)
    px[:, :18] = 120
    ramp = np.add.outer(np.arange(18), np.arange(18))
    px[:, 18:36] = (60 + 3 * ramp % 90).astype(np.uint8)
    rng = np.random.default_rng(0)
    px[:, 36:] = rng.integers(0, 256, (18, 18), dtype=np.uint8)
    img = rdhei.GrayImage(px)

    for block in (3, 4, 5):
        profile = rdhei.analyze(img, (block, block))
        print(f"--- {block}x{block} blocks: {profile.layout.block_count} blocks")
        print(f"    total capacity : {profile.total_capacity} bits")
        print(f"    aux overhead   : {profile.aux_bits} bits "
              f"(+{profile.header_displaced_bits} displaced by the header, "
              f"+32 length field)")
        print(f"    net payload    : {profile.net_payload_bits} bits "
              f"({profile.bpp:.3f} bpp)")
        print(f"    capacity histogram (bits/follower 0..8): "
              f"{profile.bcf_histogram()}")

    # per-block map for the 3x3 case: flat left, mid ramp, dead right
    profile = rdhei.analyze(img, (3, 3))
    grid = profile.bcfs.reshape(6, 18)
    print("\nper-block bits/follower (6 block rows x 18 block cols):")
    for row in grid:
        print("   ", " ".join(str(v) for v in row))


if __name__ == "__main__":
    main()
