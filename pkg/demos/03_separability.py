"""Separability: the two decode paths never share a key.

Extraction runs with the data-hider key only; recovery runs with the
content-owner key only. Tampering with an embedded payload bit corrupts
extraction but cannot touch recovery, because reconstruction discards
every embedded MSB and rebuilds them from the block leaders.
"""

import numpy as np

import rdhei
from rdhei import embedded_bit_sites
from rdhei.blocks import build_layout

KEYS = rdhei.KeyMaterial.from_hex(
    kc="0f0e0d0c0b0a09080706050403020100",
    kd="f0e0d0c0b0a090807060504030201000",
    ks="00112233445566778899aabbccddeeff",
)


def main():
    ramp = np.add.outer(np.arange(30), np.arange(30))
    original = rdhei.GrayImage((100 + ramp % 9).astype(np.uint8))
    original.pixels[6:9, 6:9] = 140  # a flat block to anchor the bootstrap

    payload = rdhei.BitString.from_bytes(b"only kd reads this")
    marked, profile = rdhei.conceal(original, payload, KEYS, (3, 3))

    extracted = rdhei.reveal(marked, rdhei.KeyMaterial(kd=KEYS.kd, ks=KEYS.ks))
    recovered = rdhei.restore(marked, rdhei.KeyMaterial(kc=KEYS.kc, ks=KEYS.ks))
    print(f"extract with kd only: {extracted.to_bytes()!r}")
    print(f"recover with kc only: identical={recovered == original}")

    # flip one embedded payload bit
    layout = build_layout(30, 30, 3, 3)
    rows, cols, shifts = embedded_bit_sites(
        profile.bcfs, layout, profile.start_block
    )
    t = profile.aux_bits + 32 + 5  # 6th payload bit
    tampered = marked.copy()
    tampered.pixels[rows[t], cols[t]] ^= np.uint8(1 << shifts[t])

    corrupted = rdhei.reveal(tampered, rdhei.KeyMaterial(kd=KEYS.kd, ks=KEYS.ks))
    still_exact = rdhei.restore(tampered, rdhei.KeyMaterial(kc=KEYS.kc, ks=KEYS.ks))
    flipped = int(np.sum(corrupted.array != payload.array))
    print(f"after flipping one payload bit: extraction differs in {flipped} bit(s), "
          f"recovery identical={still_exact == original}")


if __name__ == "__main__":
    main()
