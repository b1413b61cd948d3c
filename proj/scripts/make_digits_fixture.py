#!/usr/bin/env python3
"""Build the handwritten-digit fixture used by the acceptance suite.

Renders scikit-learn's bundled 8x8 digit scans up to 48x48 grayscale PNGs
and pads each class with mild affine/noise variants: 520 training and 110
test images per digit. Source scans are split 70/30 into train/test pools
*before* augmentation so no variant of a test scan ever appears in training.

Filenames encode disjoint writer ids (train F0000-F0099, test F0100-F0149)
under <digit>/hsf_0/, matching the toolkit's built-in nist-digits manifest.

Usage: make_digits_fixture.py <output-dir>

A .complete marker makes reruns a no-op, so the fixture is built only once
per build tree.
"""

import sys
from pathlib import Path

import numpy as np
from PIL import Image
from sklearn.datasets import load_digits

SEED = 12345
TRAIN_PER_CLASS = 520
TEST_PER_CLASS = 110
CANVAS = 48  # 8x8 source cells scaled 6x


def render(block8: np.ndarray) -> np.ndarray:
    """8x8 intensity grid (0..16, ink-positive) -> 48x48 paper-white image."""
    big = np.kron(block8, np.ones((6, 6)))
    gray = 255.0 - np.clip(big * 16.5, 0.0, 255.0)
    return gray.astype(np.uint8)


def augment(arr: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Small random rotation/scale/shear about the center, plus pixel noise."""
    angle = np.deg2rad(rng.uniform(-10.0, 10.0))
    scale = rng.uniform(0.9, 1.1)
    shear = rng.uniform(-0.1, 0.1)
    rot = np.array([[np.cos(angle), -np.sin(angle)],
                    [np.sin(angle), np.cos(angle)]])
    shr = np.array([[1.0, shear], [0.0, 1.0]])
    fwd = (rot @ shr) * scale
    inv = np.linalg.inv(fwd)
    c = CANVAS / 2.0
    coeffs = (inv[0, 0], inv[0, 1], c - inv[0, 0] * c - inv[0, 1] * c,
              inv[1, 0], inv[1, 1], c - inv[1, 0] * c - inv[1, 1] * c)
    img = Image.fromarray(arr, mode="L")
    warped = img.transform((CANVAS, CANVAS), Image.AFFINE, coeffs,
                           resample=Image.BILINEAR, fillcolor=255)
    noisy = np.asarray(warped, dtype=np.float64)
    noisy += rng.normal(0.0, 4.0, noisy.shape)
    return np.clip(noisy, 0.0, 255.0).astype(np.uint8)


def emit(pool, count, cls_dir, writer_base, writer_span, rng):
    for i in range(count):
        base = render(pool[i % len(pool)])
        # First pass through the pool stays pristine; repeats get jittered.
        img = base if i < len(pool) else augment(base, rng)
        writer = writer_base + i % writer_span
        cycle = i // writer_span
        Image.fromarray(img, mode="L").save(
            cls_dir / f"F{writer:04d}_{cycle}.png")


def main() -> int:
    if len(sys.argv) != 2:
        print(f"usage: {sys.argv[0]} <output-dir>", file=sys.stderr)
        return 2
    out = Path(sys.argv[1])
    marker = out / ".complete"
    if marker.exists():
        print(f"digit fixture already present at {out}")
        return 0

    rng = np.random.default_rng(SEED)
    digits = load_digits()
    pools = {d: [] for d in range(10)}
    for image, label in zip(digits.images, digits.target):
        pools[int(label)].append(image)

    for d in range(10):
        pool = pools[d]
        cut = int(round(len(pool) * 0.7))
        cls_dir = out / str(d) / "hsf_0"
        cls_dir.mkdir(parents=True, exist_ok=True)
        emit(pool[:cut], TRAIN_PER_CLASS, cls_dir, 0, 100, rng)
        emit(pool[cut:], TEST_PER_CLASS, cls_dir, 100, 50, rng)
        print(f"class {d}: {TRAIN_PER_CLASS} train / {TEST_PER_CLASS} test "
              f"from {cut}+{len(pool) - cut} source scans")

    marker.write_text("ok\n")
    print(f"wrote {10 * (TRAIN_PER_CLASS + TEST_PER_CLASS)} images under {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
