"""Does the encrypted image look like noise? Histogram and entropy checks.

A structured image has a spiky intensity histogram and low byte entropy.
After the keystream XOR, the histogram should be flat (chi-square over 256
bins, 255 degrees of freedom) and the entropy close to 8 bits/byte.
"""

import numpy as np

import rdhei


def stats(pixels: np.ndarray) -> tuple[float, float]:
    counts = np.bincount(pixels.reshape(-1), minlength=256)
    n = counts.sum()
    expected = n / 256.0
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    p = counts[counts > 0] / n
    entropy = float(-(p * np.log2(p)).sum())
    return chi2, entropy


def main():
    ramp = np.add.outer(np.arange(128), np.arange(128))
    rng = np.random.default_rng(1)
    px = (30 + ramp % 70 + rng.integers(-3, 4, (128, 128))).astype(np.uint8)
    img = rdhei.GrayImage(px)

    key = rdhei.KeyMaterial.from_hex(kc="deadbeef" * 4).kc
    encrypted = rdhei.xor_cipher_image(img, key)

    chi2_plain, ent_plain = stats(img.pixels)
    chi2_enc, ent_enc = stats(encrypted.pixels)
    critical = 310.457  # chi-square 0.99 quantile, 255 dof

    print(f"plain:     chi2={chi2_plain:12.1f}  entropy={ent_plain:.3f} bits/byte")
    print(f"encrypted: chi2={chi2_enc:12.1f}  entropy={ent_enc:.3f} bits/byte")
    print(f"uniform at the 1% level: {chi2_enc < critical} "
          f"(critical value {critical})")
    print(f"decrypts exactly: "
          f"{rdhei.xor_cipher_image(encrypted, key) == img}")


if __name__ == "__main__":
    main()
