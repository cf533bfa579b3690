"""Graph-based superpixel generation (Felzenszwalb-Huttenlocher merging).

Pixels form an 8-connected grid graph weighted by Euclidean feature
distance; components merge greedily in ascending edge order whenever the
joining edge is no heavier than either side's internal difference plus a
size-scaled threshold k/|C|. Ties are broken by row-major pixel order so
identical inputs always yield identical partitions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .validation import check_raster


@dataclass(frozen=True)
class FhParams:
    """Segmentation knobs: threshold scale k, Gaussian pre-smoothing sigma,
    and the minimum component size enforced by the post-pass."""

    k: float = 300.0
    sigma_fh: float = 0.8
    min_size: int = 20

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError("k must be positive")
        if self.sigma_fh < 0:
            raise ValueError("sigma_fh must be non-negative")
        if self.min_size < 1:
            raise ValueError("min_size must be at least 1")


@dataclass(frozen=True)
class SuperpixelMap:
    """Per-pixel partition into contiguously numbered superpixels."""

    labels: np.ndarray
    count: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int32).copy()
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        if labels.ndim != 2 or labels.size == 0:
            raise ValueError("labels must be a non-empty (H, W) array")
        present = np.unique(labels)
        if present[0] != 0 or present[-1] != self.count - 1 or present.size != self.count:
            raise ValueError("superpixel ids must be contiguous 0..count-1 with every id present")

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels.ravel(), minlength=self.count)


def gaussian_smooth(image, sigma: float) -> np.ndarray:
    """Separable Gaussian blur with kernel radius ceil(3*sigma) and edge
    clamping; sigma 0 returns the input unchanged."""
    arr = check_raster(image)
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    if sigma == 0:
        return arr.copy()
    radius = math.ceil(3.0 * sigma)
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-0.5 * (offsets / sigma) ** 2)
    kernel /= kernel.sum()
    out = arr
    for axis in (0, 1):
        out = _convolve_clamped(out, kernel, axis)
    return out


def _convolve_clamped(arr: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    radius = (kernel.size - 1) // 2
    pad = [(0, 0)] * arr.ndim
    pad[axis] = (radius, radius)
    padded = np.pad(arr, pad, mode="edge")
    out = np.zeros_like(arr)
    length = arr.shape[axis]
    for tap, weight in enumerate(kernel):
        sl = [slice(None)] * arr.ndim
        sl[axis] = slice(tap, tap + length)
        out += weight * padded[tuple(sl)]
    return out


class _UnionFind:
    """Array-backed disjoint sets with path compression and size tracking."""

    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)
        self.size = np.ones(n, dtype=np.int64)
        self.count = n

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> int:
        x, y = self.find(x), self.find(y)
        if x == y:
            return x
        if self.size[x] < self.size[y]:
            x, y = y, x
        self.parent[y] = x
        self.size[x] += self.size[y]
        self.count -= 1
        return x


def _grid_edges(height: int, width: int):
    """8-connected grid edges as (p, q, canonical order) index pairs."""
    idx = np.arange(height * width, dtype=np.int64).reshape(height, width)
    pairs = [
        (idx[:, :-1], idx[:, 1:]),       # right
        (idx[:-1, :], idx[1:, :]),       # down
        (idx[:-1, :-1], idx[1:, 1:]),    # down-right
        (idx[:-1, 1:], idx[1:, :-1]),    # down-left
    ]
    p = np.concatenate([a.ravel() for a, _ in pairs])
    q = np.concatenate([b.ravel() for _, b in pairs])
    lo = np.minimum(p, q)
    hi = np.maximum(p, q)
    return lo, hi


def fh_segment(image, params: FhParams) -> SuperpixelMap:
    """Segment a raster into superpixels with the greedy merge criterion.

    The image is pre-smoothed with ``params.sigma_fh``, edge weights are
    Euclidean distances between pixel feature vectors across all channels,
    and equal-weight edges are processed in row-major pixel order. A final
    ascending-order pass absorbs every component smaller than
    ``params.min_size`` into its most-similar neighbor.
    """
    arr = gaussian_smooth(image, params.sigma_fh)
    height, width = arr.shape[:2]
    n = height * width
    lo, hi = _grid_edges(height, width)
    flat = arr.reshape(n, -1)
    weights = np.sqrt(((flat[lo] - flat[hi]) ** 2).sum(axis=1))
    order = np.lexsort((hi, lo, weights))
    lo, hi, weights = lo[order], hi[order], weights[order]

    uf = _UnionFind(n)
    # Internal difference of each component: weight of the edge that last
    # merged it (max MST edge so far under ascending processing).
    internal = np.zeros(n, dtype=np.float64)
    k = float(params.k)
    for a, b, w in zip(lo.tolist(), hi.tolist(), weights.tolist()):
        ra, rb = uf.find(a), uf.find(b)
        if ra == rb:
            continue
        if w <= min(internal[ra] + k / uf.size[ra], internal[rb] + k / uf.size[rb]):
            internal[uf.union(ra, rb)] = w

    if params.min_size > 1:
        min_size = params.min_size
        for a, b in zip(lo.tolist(), hi.tolist()):
            ra, rb = uf.find(a), uf.find(b)
            if ra != rb and (uf.size[ra] < min_size or uf.size[rb] < min_size):
                uf.union(ra, rb)

    roots = np.fromiter((uf.find(i) for i in range(n)), dtype=np.int64, count=n)
    _, labels = np.unique(roots, return_inverse=True)
    # np.unique orders by root id; renumber by first appearance in row-major
    # order so labeling is independent of union-find internals.
    first = np.full(labels.max() + 1, n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(n))
    rank = np.argsort(np.argsort(first))
    labels = rank[labels]
    return SuperpixelMap(labels=labels.reshape(height, width), count=int(labels.max()) + 1)


def adjacency(sp: SuperpixelMap) -> frozenset[tuple[int, int]]:
    """Unordered superpixel id pairs that share a 4-connected pixel border."""
    labels = sp.labels
    pairs = []
    for a, b in ((labels[:, :-1], labels[:, 1:]), (labels[:-1, :], labels[1:, :])):
        mask = a != b
        if mask.any():
            lo = np.minimum(a[mask], b[mask])
            hi = np.maximum(a[mask], b[mask])
            pairs.append(np.stack([lo, hi], axis=1))
    if not pairs:
        return frozenset()
    uniq = np.unique(np.concatenate(pairs), axis=0)
    return frozenset((int(i), int(j)) for i, j in uniq)
