"""Input validation helpers, in the spirit of ``sklearn.utils.check_array``.

Every public entry point funnels its array inputs through one of these so
that shape and value errors surface early with a readable message instead
of deep inside a numpy expression.
"""

from __future__ import annotations

import numpy as np

SIMPLEX_TOL = 1e-9
UNLABELED = 255


def check_rgb_image(image) -> np.ndarray:
    """Validate an 8-bit RGB raster and return it as a (H, W, 3) uint8 array."""
    arr = np.asarray(image)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) RGB image, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("empty image")
    if arr.dtype != np.uint8:
        if np.issubdtype(arr.dtype, np.integer) and arr.min() >= 0 and arr.max() <= 255:
            arr = arr.astype(np.uint8)
        else:
            raise ValueError(f"expected uint8 image data, got dtype {arr.dtype}")
    return arr


def check_raster(image) -> np.ndarray:
    """Validate a single- or multi-channel float raster as (H, W, C) float64."""
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3:
        raise ValueError(f"expected (H, W) or (H, W, C) raster, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("empty raster")
    return arr


def check_scribble_mask(mask, n_classes: int, shape=None) -> np.ndarray:
    """Validate a per-pixel scribble mask (class ids, 255 = unlabeled)."""
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ValueError(f"expected (H, W) scribble mask, got shape {arr.shape}")
    if shape is not None and arr.shape != tuple(shape):
        raise ValueError(f"scribble mask shape {arr.shape} does not match image shape {tuple(shape)}")
    arr = arr.astype(np.int64, copy=False)
    bad = (arr != UNLABELED) & ((arr < 0) | (arr >= n_classes))
    if bad.any():
        raise ValueError(
            f"scribble mask contains labels outside [0, {n_classes}) and != {UNLABELED}: "
            f"{sorted(np.unique(arr[bad]).tolist())}"
        )
    if not (arr != UNLABELED).any():
        raise ValueError("scribble mask is empty (every pixel unlabeled)")
    return arr


def check_label_mask(mask, n_classes: int | None = None) -> np.ndarray:
    """Validate a dense per-pixel label image."""
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ValueError(f"expected (H, W) label mask, got shape {arr.shape}")
    if n_classes is not None:
        bad = (arr != UNLABELED) & ((arr < 0) | (arr >= n_classes))
        if bad.any():
            raise ValueError(f"label mask contains out-of-range classes: {sorted(np.unique(arr[bad]).tolist())}")
    return arr.astype(np.int64, copy=False)


def check_simplex(x, tol: float = SIMPLEX_TOL) -> np.ndarray:
    """Validate a point of the standard simplex (non-negative, sums to one)."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"expected non-empty 1-D vector, got shape {arr.shape}")
    if arr.min() < -tol:
        raise ValueError(f"simplex vector has negative entry {arr.min()!r}")
    if abs(arr.sum() - 1.0) > tol:
        raise ValueError(f"simplex vector sums to {arr.sum()!r}, not 1")
    return arr


def check_affinity_matrix(a, tol: float = 1e-12) -> np.ndarray:
    """Validate a symmetric, zero-diagonal, non-negative similarity matrix."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected square matrix, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValueError("empty affinity matrix")
    if not np.allclose(arr, arr.T, atol=tol, rtol=0.0):
        raise ValueError("affinity matrix is not symmetric")
    if np.abs(np.diagonal(arr)).max(initial=0.0) > tol:
        raise ValueError("affinity matrix has nonzero diagonal entries")
    if arr.min() < -tol:
        raise ValueError(f"affinity matrix has negative entry {arr.min()!r}")
    return arr
