"""Affinity graphs and the dominant-set definitional machinery.

The recursive node weights implemented here are exponential in the subset
size, so they only serve as a verification oracle for the iterative solver
in :mod:`scribbleseg.dynamics`; nothing on the production path calls them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .validation import check_affinity_matrix

# Converged dynamics never produce exact zeros, so the support of a solver
# state is read with a relative threshold instead of `> 0`.
SUPPORT_THRESHOLD = 1e-6

# Hard cap on the subset size accepted by the recursive weight oracle.
NODE_WEIGHT_CAP = 15


@dataclass(frozen=True)
class AffinityGraph:
    """Symmetric non-negative similarity matrix over superpixel vertices.

    ``adjacency`` holds the unordered vertex pairs considered neighbors;
    entries outside it are zero (the edge-pruning convention), though an
    adjacent pair may also carry weight zero after min-max normalization.
    """

    a: np.ndarray
    adjacency: frozenset[tuple[int, int]] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        a = check_affinity_matrix(self.a).copy()
        a.flags.writeable = False
        object.__setattr__(self, "a", a)
        if self.adjacency is None:
            ii, jj = np.nonzero(np.triu(a, k=1))
            object.__setattr__(self, "adjacency", frozenset(zip(ii.tolist(), jj.tolist())))
        else:
            pairs = frozenset(tuple(sorted(p)) for p in self.adjacency)
            object.__setattr__(self, "adjacency", pairs)
            allowed = np.zeros_like(a, dtype=bool)
            for i, j in pairs:
                allowed[i, j] = allowed[j, i] = True
            if np.abs(a[~allowed]).max(initial=0.0) > 0.0:
                raise ValueError("affinity matrix has nonzero weight on a non-adjacent pair")

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def subgraph(self, vertices) -> "AffinityGraph":
        """Principal subgraph on ``vertices`` (order preserved), reindexed from 0."""
        idx = np.asarray(sorted(vertices), dtype=np.int64)
        return AffinityGraph(self.a[np.ix_(idx, idx)].copy())


@dataclass(frozen=True)
class DominantSetResult:
    """A converged cluster: its support, weighted characteristic vector and
    cohesiveness value x'Ax."""

    support: frozenset[int]
    chi: np.ndarray
    value: float
    converged: bool = True
    iterations: int = 0


def support_of(x: np.ndarray, threshold: float = SUPPORT_THRESHOLD) -> frozenset[int]:
    """Read the support of a converged solver state: entries above a
    relative cutoff of ``threshold * max(x)``."""
    x = np.asarray(x, dtype=np.float64)
    return frozenset(np.nonzero(x > threshold * x.max())[0].tolist())


def relative_similarity(graph: AffinityGraph, subset, i: int, j: int) -> float:
    """Similarity of outside vertex ``j`` to member ``i``, relative to the
    mean similarity between ``i`` and the members of ``subset``.

    phi_S(i, j) = a_ij - (1/|S|) * sum_{k in S} a_ik; may be negative.
    """
    s = frozenset(subset)
    if not s:
        raise ValueError("subset must be non-empty")
    if i not in s:
        raise ValueError(f"vertex {i} is not a member of the subset")
    if j in s:
        raise ValueError(f"vertex {j} must lie outside the subset")
    members = np.fromiter(s, dtype=np.int64)
    a = graph.a
    return float(a[i, j] - a[i, members].mean())


def node_weight(graph: AffinityGraph, subset, i: int, _memo: dict | None = None) -> float:
    """Recursive cohesiveness weight w_S(i) of vertex ``i`` within ``subset``.

    w_S(i) = 1 when |S| = 1, otherwise the phi-weighted sum of the weights
    of S \\ {i}. Positive means adding ``i`` raises the internal coherence
    of the set. Exponential in |S|; capped at ``NODE_WEIGHT_CAP`` vertices.
    """
    s = frozenset(subset)
    if i not in s:
        raise ValueError(f"vertex {i} is not a member of the subset")
    if len(s) > NODE_WEIGHT_CAP:
        raise ValueError(f"subset of size {len(s)} exceeds the recursion cap ({NODE_WEIGHT_CAP})")
    memo: dict = {} if _memo is None else _memo
    return _node_weight(graph.a, s, i, memo)


def _node_weight(a: np.ndarray, s: frozenset, i: int, memo: dict) -> float:
    if len(s) == 1:
        return 1.0
    key = (s, i)
    if key in memo:
        return memo[key]
    rest = s - {i}
    members = np.fromiter(rest, dtype=np.int64)
    # phi_{S\{i}}(j, i) = a_ji - mean_{k in S\{i}} a_jk, the j-relative
    # similarity of i with respect to the reduced set.
    total = 0.0
    for j in rest:
        phi = a[j, i] - a[j, members].mean()
        total += phi * _node_weight(a, rest, j, memo)
    memo[key] = total
    return total


def total_weight(graph: AffinityGraph, subset) -> float:
    """Sum of w_S(i) over the members of ``subset``."""
    s = frozenset(subset)
    memo: dict = {}
    return sum(_node_weight(graph.a, s, i, memo) for i in s)


def is_dominant_set(graph: AffinityGraph, subset) -> bool:
    """Brute-force dominant-set test (verification oracle, small n only).

    Checks internal coherence (w_S(i) > 0 for every member) and external
    incoherence (w_{S + {i}}(i) < 0 for every outside vertex).
    """
    s = frozenset(subset)
    if not s:
        raise ValueError("subset must be non-empty")
    memo: dict = {}
    a = graph.a
    if any(_node_weight(a, s, i, memo) <= 0.0 for i in s):
        return False
    outside = set(range(graph.n)) - s
    return all(_node_weight(a, s | {i}, i, memo) < 0.0 for i in outside)


def characteristic_vector(graph: AffinityGraph, subset) -> np.ndarray:
    """Weighted characteristic vector of ``subset``: w_S(i) normalized to
    the simplex on S, zero elsewhere.

    Only meaningful when the subset is (at least close to) a dominant set;
    rejects subsets whose total weight is not positive.
    """
    s = frozenset(subset)
    if not s:
        raise ValueError("subset must be non-empty")
    memo: dict = {}
    weights = {i: _node_weight(graph.a, s, i, memo) for i in s}
    denom = sum(weights.values())
    if denom <= 0.0:
        raise ValueError(f"total weight of the subset is {denom!r}, not positive")
    x = np.zeros(graph.n)
    for i, w in weights.items():
        x[i] = w / denom
    return x
