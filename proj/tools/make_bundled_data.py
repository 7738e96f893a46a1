#!/usr/bin/env python3
"""Regenerates the small images under data/bundled/.

content.png   32x32 smooth colour field with a disc
style.png     32x32 diagonal warm stripes with noise
style_b.png   32x32 cool checker texture
mask_lr.png   32x32 label mask, 0 on the left half, 1 on the right
"""
import pathlib

import numpy as np
from PIL import Image

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "bundled"
N = 32


def save(arr, name):
    Image.fromarray(arr).save(OUT / name)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20260101)
    y, x = np.mgrid[0:N, 0:N] / (N - 1)

    content = np.stack([0.2 + 0.6 * x, 0.3 + 0.4 * y, 0.5 - 0.3 * x * y], axis=-1)
    disc = (x - 0.6) ** 2 + (y - 0.4) ** 2 < 0.06
    content[disc] = [0.85, 0.8, 0.3]
    save((content * 255).round().astype(np.uint8), "content.png")

    phase = np.sin((x + y) * 2 * np.pi * 4)
    style = np.stack([0.75 + 0.2 * phase, 0.4 + 0.25 * phase, 0.15 + 0.1 * phase], axis=-1)
    style += rng.normal(0.0, 0.05, style.shape)
    save((np.clip(style, 0, 1) * 255).round().astype(np.uint8), "style.png")

    checker = ((np.arange(N)[:, None] // 4 + np.arange(N)[None, :] // 4) % 2).astype(float)
    style_b = np.stack([0.1 + 0.2 * checker, 0.3 + 0.3 * checker, 0.6 + 0.3 * checker], axis=-1)
    style_b += rng.normal(0.0, 0.03, style_b.shape)
    save((np.clip(style_b, 0, 1) * 255).round().astype(np.uint8), "style_b.png")

    mask = np.zeros((N, N), dtype=np.uint8)
    mask[:, N // 2:] = 1
    save(mask, "mask_lr.png")


if __name__ == "__main__":
    main()
