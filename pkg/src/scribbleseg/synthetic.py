"""Synthetic fixtures for demos and end-to-end verification.

The three-region image (left half plus two right quadrants) uses colors
that stay separable in every supported space: hues 60/180/300 degrees
(clear of the hue wrap-around at red), staggered intensity, distinct
chromaticity. Noise is spatially correlated at roughly superpixel scale
and bounded by a tenth of the 8-bit range.
"""

from __future__ import annotations

import numpy as np

from .io import rasterize_strokes
from .propagation import LabelMask, ScribbleSet
from .superpixels import gaussian_smooth

REGION_COLORS = ((220, 220, 88), (68, 170, 170), (120, 48, 120))
NOISE_STD = 10.0
NOISE_CORRELATION = 1.75
NOISE_CLIP = 25.5  # +/- 10% of the 8-bit range


def three_region_strokes(size: int = 96) -> list[dict]:
    """One brush stroke per region, in the stroke-record format."""
    s = size / 96.0
    width = max(2.0, 2.0 * s)
    return [
        {"class_id": 0, "width_px": width,
         "points": [[23.5 * s, 21.0 * s], [23.5 * s, 75.0 * s]]},
        {"class_id": 1, "width_px": width,
         "points": [[59.0 * s, 23.5 * s], [85.0 * s, 23.5 * s]]},
        {"class_id": 2, "width_px": width,
         "points": [[59.0 * s, 71.5 * s], [85.0 * s, 71.5 * s]]},
    ]


def three_region_truth(size: int = 96) -> np.ndarray:
    half = size // 2
    gt = np.zeros((size, size), dtype=np.uint8)
    gt[:half, half:] = 1
    gt[half:, half:] = 2
    return gt


def three_region_image(size: int = 96, seed: int = 0) -> tuple[np.ndarray, LabelMask, ScribbleSet]:
    """Fixture image with ground truth and one scribble per region."""
    rng = np.random.default_rng(seed)
    gt = three_region_truth(size)
    image = np.zeros((size, size, 3), dtype=np.float64)
    for cls, color in enumerate(REGION_COLORS):
        image[gt == cls] = color
    blotch = gaussian_smooth(rng.standard_normal(image.shape), NOISE_CORRELATION)
    blotch *= NOISE_STD / blotch.std()
    image += np.clip(blotch, -NOISE_CLIP, NOISE_CLIP)
    image = np.clip(np.round(image), 0, 255).astype(np.uint8)

    grid = rasterize_strokes(three_region_strokes(size), width=size, height=size, n_classes=3)
    scribbles = ScribbleSet.from_mask(grid, n_classes=3)
    return image, LabelMask(labels=gt), scribbles
