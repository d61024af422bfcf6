"""Regenerate and verify the cross-implementation golden vector.

The committed files under tests/golden/ pin the wire format: a fixed
16x16 cover, fixed keys, and a fixed payload must always produce the same
marked PGM, byte for byte. Any reimplementation of the codec can check
itself against these files.
"""

import hashlib
import pathlib

import numpy as np

import rdhei

GOLDEN_DIR = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden"

KEYS = rdhei.KeyMaterial.from_hex(
    kc="000102030405060708090a0b0c0d0e0f",
    kd="101112131415161718191a1b1c1d1e1f",
    ks="202122232425262728292a2b2c2d2e2f",
)
PAYLOAD = b"rdhei golden vector\n"


def golden_cover() -> rdhei.GrayImage:
    """Gradient with texture, one constant block, one saturated block."""
    r, c = np.meshgrid(np.arange(16), np.arange(16), indexing="ij")
    px = (40 + 4 * r + 2 * c + (r * c) % 3).astype(np.uint8)
    px[3:6, 3:6] = 90
    px[9:12, 9:12] = np.array(
        [[0, 255, 0], [255, 0, 255], [0, 255, 0]], dtype=np.uint8
    )
    return rdhei.GrayImage(px)


def main():
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    cover = golden_cover()
    marked, profile = rdhei.conceal(
        cover, rdhei.BitString.from_bytes(PAYLOAD), KEYS, (3, 3)
    )

    (GOLDEN_DIR / "cover_16x16.pgm").write_bytes(rdhei.write_pgm(cover))
    (GOLDEN_DIR / "payload.bin").write_bytes(PAYLOAD)
    (GOLDEN_DIR / "marked_16x16.pgm").write_bytes(rdhei.write_pgm(marked))

    print(f"cover:   {GOLDEN_DIR / 'cover_16x16.pgm'}")
    print(f"payload: {PAYLOAD!r}")
    print(f"marked:  {GOLDEN_DIR / 'marked_16x16.pgm'}")
    print(f"marked sha256: {hashlib.sha256(rdhei.write_pgm(marked)).hexdigest()}")
    print(f"start block: {profile.start_block}, net capacity: "
          f"{profile.net_payload_bits} bits")

    extracted = rdhei.reveal(marked, rdhei.KeyMaterial(kd=KEYS.kd, ks=KEYS.ks))
    recovered = rdhei.restore(marked, rdhei.KeyMaterial(kc=KEYS.kc, ks=KEYS.ks))
    assert extracted.to_bytes() == PAYLOAD
    assert recovered == cover
    print("round trip verified: payload and image both exact")


if __name__ == "__main__":
    main()
