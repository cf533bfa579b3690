"""Color-space conversions and per-superpixel histogram features.

Every conversion returns float64 channels rescaled to [0, 255] so that one
threshold range works for segmentation in any space. Features are color
histograms (25 bins per channel) plus horizontal/vertical gradient
histograms (10 bins each) of the first channel, each block L1-normalized.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .graph import AffinityGraph
from .superpixels import SuperpixelMap
from .validation import check_rgb_image

COLOR_BINS = 25
GRADIENT_BINS = 10


class ColorSpace(Enum):
    INTENSITY = "intensity"
    LAB = "lab"
    RGI = "rgi"
    HSV = "hsv"
    H = "h"

    @classmethod
    def parse(cls, name: str) -> "ColorSpace":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown color space {name!r}; expected one of "
                             f"{[m.value for m in cls]}") from None


@dataclass(frozen=True)
class FeatureVector:
    """Concatenated color histograms ``h_c`` and gradient histograms ``h_t``."""

    h_c: np.ndarray
    h_t: np.ndarray


def _intensity(rgb: np.ndarray) -> np.ndarray:
    return 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]


def _srgb_to_lab(rgb: np.ndarray) -> np.ndarray:
    """sRGB (0..1) to CIE L*a*b* under the D65 white point."""
    linear = np.where(rgb <= 0.04045, rgb / 12.92, ((rgb + 0.055) / 1.055) ** 2.4)
    m = np.array([
        [0.412453, 0.357580, 0.180423],
        [0.212671, 0.715160, 0.072169],
        [0.019334, 0.119193, 0.950227],
    ])
    xyz = linear @ m.T
    white = np.array([0.95047, 1.0, 1.08883])
    ratio = xyz / white
    eps = 216.0 / 24389.0
    kappa = 24389.0 / 27.0
    f = np.where(ratio > eps, np.cbrt(ratio), (kappa * ratio + 16.0) / 116.0)
    lum = 116.0 * f[..., 1] - 16.0
    a = 500.0 * (f[..., 0] - f[..., 1])
    b = 200.0 * (f[..., 1] - f[..., 2])
    return np.stack([lum, a, b], axis=-1)


def _rgb_to_hsv(rgb: np.ndarray) -> np.ndarray:
    """Hexcone HSV with H in degrees, S in [0,1], V in [0,255]."""
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    v = rgb.max(axis=-1)
    c = v - rgb.min(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.select(
            [c == 0, v == r, v == g],
            [0.0, (g - b) / c, 2.0 + (b - r) / c],
            default=4.0 + (r - g) / c,
        )
        s = np.where(v == 0, 0.0, c / np.where(v == 0, 1.0, v))
    h = (h * 60.0) % 360.0
    return np.stack([h, s, v], axis=-1)


def convert_color_space(rgb, space: ColorSpace) -> np.ndarray:
    """Convert an 8-bit RGB raster to the requested space, every channel
    rescaled to [0, 255] float64."""
    arr = check_rgb_image(rgb).astype(np.float64)
    if space is ColorSpace.INTENSITY:
        return _intensity(arr)[..., None]
    if space is ColorSpace.LAB:
        lab = _srgb_to_lab(arr / 255.0)
        lum = lab[..., 0] * (255.0 / 100.0)
        a = lab[..., 1] + 128.0
        b = lab[..., 2] + 128.0
        return np.stack([lum, a, b], axis=-1)
    if space is ColorSpace.RGI:
        total = arr.sum(axis=-1)
        black = total == 0
        safe = np.where(black, 1.0, total)
        r = np.where(black, 1.0 / 3.0, arr[..., 0] / safe)
        g = np.where(black, 1.0 / 3.0, arr[..., 1] / safe)
        return np.stack([r * 255.0, g * 255.0, _intensity(arr)], axis=-1)
    hsv = _rgb_to_hsv(arr)
    if space is ColorSpace.HSV:
        return np.stack([hsv[..., 0] * (255.0 / 360.0), hsv[..., 1] * 255.0, hsv[..., 2]], axis=-1)
    if space is ColorSpace.H:
        return (hsv[..., 0] * (255.0 / 360.0))[..., None]
    raise ValueError(f"unhandled color space {space!r}")


def _normalized_histogram(values: np.ndarray, bins: int, value_range) -> np.ndarray:
    hist, _ = np.histogram(values, bins=bins, range=value_range)
    total = hist.sum()
    if total == 0:
        return np.zeros(bins)
    return hist / total


def _gradients(channels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Central-difference gradients of the first (intensity-like) channel."""
    first = channels[..., 0]
    gy, gx = np.gradient(first)
    return gx, gy


def superpixel_features(channels, sp: SuperpixelMap, sp_id: int) -> FeatureVector:
    """Histogram features of one superpixel in the active color space."""
    if not 0 <= sp_id < sp.count:
        raise ValueError(f"superpixel id {sp_id} out of range [0, {sp.count})")
    arr = np.asarray(channels, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    mask = sp.labels == sp_id
    h_c = np.concatenate([
        _normalized_histogram(arr[..., c][mask], COLOR_BINS, (0.0, 255.0))
        for c in range(arr.shape[2])
    ])
    gx, gy = _gradients(arr)
    h_t = np.concatenate([
        _normalized_histogram(gx[mask], GRADIENT_BINS, (-255.0, 255.0)),
        _normalized_histogram(gy[mask], GRADIENT_BINS, (-255.0, 255.0)),
    ])
    return FeatureVector(h_c=h_c, h_t=h_t)


def all_superpixel_features(channels, sp: SuperpixelMap) -> list[FeatureVector]:
    """Features for every superpixel; gradients are computed once."""
    arr = np.asarray(channels, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    gx, gy = _gradients(arr)
    flat_labels = sp.labels.ravel()
    order = np.argsort(flat_labels, kind="stable")
    bounds = np.searchsorted(flat_labels[order], np.arange(sp.count + 1))
    flat_channels = arr.reshape(-1, arr.shape[2])
    flat_gx, flat_gy = gx.ravel(), gy.ravel()
    out = []
    for i in range(sp.count):
        sel = order[bounds[i]:bounds[i + 1]]
        h_c = np.concatenate([
            _normalized_histogram(flat_channels[sel, c], COLOR_BINS, (0.0, 255.0))
            for c in range(arr.shape[2])
        ])
        h_t = np.concatenate([
            _normalized_histogram(flat_gx[sel], GRADIENT_BINS, (-255.0, 255.0)),
            _normalized_histogram(flat_gy[sel], GRADIENT_BINS, (-255.0, 255.0)),
        ])
        out.append(FeatureVector(h_c=h_c, h_t=h_t))
    return out


def pair_affinity(fi: FeatureVector, fj: FeatureVector, sigma_c: float, sigma_t: float) -> float:
    """Pre-normalization Gaussian kernel between two feature vectors:
    exp(-||h_c(i)-h_c(j)||^2 / sigma_c^2 - ||h_t(i)-h_t(j)||^2 / sigma_t^2)."""
    if sigma_c <= 0 or sigma_t <= 0:
        raise ValueError("sigma_c and sigma_t must be positive")
    dc = fi.h_c - fj.h_c
    dt = fi.h_t - fj.h_t
    return float(np.exp(-(dc @ dc) / sigma_c**2 - (dt @ dt) / sigma_t**2))


def build_affinity(
    features: list[FeatureVector],
    adjacency,
    sigma_c: float,
    sigma_t: float,
) -> AffinityGraph:
    """Gaussian-kernel affinity over adjacent superpixel pairs.

    Non-adjacent pairs and the diagonal stay zero; the adjacent entries are
    then min-max normalized so weights span [0, 1].
    """
    if sigma_c <= 0 or sigma_t <= 0:
        raise ValueError("sigma_c and sigma_t must be positive")
    n = len(features)
    pairs = sorted(tuple(sorted(p)) for p in adjacency)
    a = np.zeros((n, n))
    for i, j in pairs:
        a[i, j] = a[j, i] = pair_affinity(features[i], features[j], sigma_c, sigma_t)
    if pairs:
        vals = np.array([a[i, j] for i, j in pairs])
        lo, hi = vals.min(), vals.max()
        for (i, j), v in zip(pairs, vals):
            # Degenerate spread (all edges equal) keeps full weight instead
            # of collapsing the graph to zeros.
            w = 1.0 if hi == lo else (v - lo) / (hi - lo)
            a[i, j] = a[j, i] = w
    return AffinityGraph(a=a, adjacency=frozenset(pairs))
