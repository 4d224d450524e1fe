"""Deterministic synthetic test image.

A horizontal gradient with a few flat geometric regions: visually
structured, with a strongly non-uniform histogram (the flat regions
spike individual gray levels), so encryption quality is easy to see in
the before/after histogram spread.
"""

import numpy as np

from cubicrypt.cipher import GrayImage


def synthetic_test_image(width: int = 256, height: int = 256) -> GrayImage:
    if width < 1 or height < 1:
        raise ValueError(f"invalid dimensions {width}x{height}")
    xs = np.arange(width, dtype=np.int64)
    pixels = np.tile((xs * 255 // max(width - 1, 1)).astype(np.uint8), (height, 1))

    yy, xx = np.mgrid[0:height, 0:width]
    cx, cy = (3 * width) // 8, (3 * height) // 8
    radius = min(width, height) * 7 // 32
    pixels[(xx - cx) ** 2 + (yy - cy) ** 2 <= radius * radius] = 200

    r0, r1 = (height * 150) // 256, (height * 220) // 256
    c0, c1 = (width * 140) // 256, (width * 230) // 256
    pixels[r0:r1, c0:c1] = 40

    b0, b1 = (height * 8) // 256, (height * 25) // 256
    pixels[b0:b1, :] = 230

    return GrayImage(pixels=pixels)
