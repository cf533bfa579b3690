"""Dominant-set machinery against independent brute-force oracles."""

import itertools

import numpy as np
import pytest

from scribbleseg.graph import (
    AffinityGraph,
    characteristic_vector,
    is_dominant_set,
    node_weight,
    relative_similarity,
    support_of,
    total_weight,
)
from scribbleseg.validation import check_simplex

from .conftest import random_affinity


def oracle_node_weight(a: np.ndarray, subset, i) -> float:
    """Plain-recursion reference for the weight recursion, no memoization."""
    subset = tuple(sorted(subset))
    if len(subset) == 1:
        return 1.0
    rest = tuple(j for j in subset if j != i)
    total = 0.0
    for j in rest:
        phi = a[j, i] - np.mean([a[j, k] for k in rest])
        total += phi * oracle_node_weight(a, rest, j)
    return total


def oracle_is_dominant(a: np.ndarray, subset, n: int) -> bool:
    members = set(subset)
    if any(oracle_node_weight(a, members, i) <= 0 for i in members):
        return False
    return all(oracle_node_weight(a, members | {i}, i) < 0 for i in set(range(n)) - members)


class TestRelativeSimilarity:
    def test_singleton_subset(self, a4):
        # mean similarity of 0 to S={0} is a00 = 0
        assert relative_similarity(a4, {0}, 0, 1) == pytest.approx(0.9)

    def test_all_equal_weights(self):
        c = 0.4
        a = np.full((4, 4), c) - c * np.eye(4)
        graph = AffinityGraph(a)
        assert relative_similarity(graph, {0, 1}, 0, 2) == pytest.approx(c / 2)

    def test_a4_negative_value(self, a4):
        # direct formula: a02 - (a00 + a01)/2 = 0.1 - 0.45
        assert relative_similarity(a4, {0, 1}, 0, 2) == pytest.approx(-0.35)

    def test_rejects_member_outside(self, a4):
        with pytest.raises(ValueError):
            relative_similarity(a4, {0, 1}, 2, 3)
        with pytest.raises(ValueError):
            relative_similarity(a4, {0, 1}, 0, 1)
        with pytest.raises(ValueError):
            relative_similarity(a4, set(), 0, 1)

    def test_depends_only_on_row_j_restricted(self, a4):
        # permuting vertices outside S+{j} must not change phi
        a = np.array(a4.a)
        perm = [0, 1, 2, 3]
        perm[3], perm[0] = perm[0], perm[3]  # swap vertices 0 and 3 (outside S+{j}={1,2})
        permuted = AffinityGraph(a[np.ix_(perm, perm)])
        # S={1}, i=1, j=2 under the original graph equals S={1}, i=1, j=2 after the swap
        assert relative_similarity(a4, {1}, 1, 2) == pytest.approx(
            relative_similarity(permuted, {1}, 1, 2)
        )


class TestNodeWeight:
    def test_singleton_is_one(self, a4):
        assert node_weight(a4, {2}, 2) == 1.0

    def test_pair_unrolls_to_edge_weight(self, a4):
        assert node_weight(a4, {0, 1}, 0) == pytest.approx(0.9)

    def test_triple_against_oracle(self, a4):
        for i, expected in [(0, 0.0), (1, 0.08), (2, -0.72)]:
            assert oracle_node_weight(a4.a, {0, 1, 2}, i) == pytest.approx(expected)
            assert node_weight(a4, {0, 1, 2}, i) == pytest.approx(expected)

    def test_matches_oracle_on_random_graphs(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            graph = random_affinity(rng, 6)
            size = rng.integers(1, 6)
            subset = tuple(rng.choice(6, size=size, replace=False).tolist())
            i = subset[0]
            assert node_weight(graph, subset, i) == pytest.approx(
                oracle_node_weight(graph.a, subset, i), abs=1e-12
            )

    def test_rejects_oversized_subset(self):
        rng = np.random.default_rng(0)
        graph = random_affinity(rng, 17)
        with pytest.raises(ValueError, match="recursion cap"):
            node_weight(graph, set(range(16)), 0)

    def test_rejects_non_member(self, a4):
        with pytest.raises(ValueError):
            node_weight(a4, {0, 1}, 2)


class TestIsDominantSet:
    def test_a4_cliques(self, a4):
        assert is_dominant_set(a4, {0, 1}) is True
        assert is_dominant_set(a4, {2, 3}) is True
        assert is_dominant_set(a4, {0, 2}) is False

    def test_a4_exhaustive_enumeration(self, a4):
        found = [
            s for r in range(1, 5)
            for s in itertools.combinations(range(4), r)
            if is_dominant_set(a4, s)
        ]
        assert found == [(0, 1), (2, 3)]
        for r in range(1, 5):
            for s in itertools.combinations(range(4), r):
                assert is_dominant_set(a4, s) == oracle_is_dominant(a4.a, s, 4)

    def test_zero_graph_singletons(self):
        graph = AffinityGraph(np.zeros((3, 3)))
        # internal coherence is vacuous for singletons; external weights are
        # phi sums over zero rows, which are zero (not strictly negative)
        for i in range(3):
            members_ok = node_weight(graph, {i}, i) > 0
            assert members_ok
            assert is_dominant_set(graph, {i}) is False

    def test_rejects_empty(self, a4):
        with pytest.raises(ValueError):
            is_dominant_set(a4, set())


class TestCharacteristicVector:
    def test_singleton_indicator(self, a4):
        x = characteristic_vector(a4, {3})
        assert x.tolist() == [0.0, 0.0, 0.0, 1.0]

    def test_symmetric_pairs(self, a4):
        assert characteristic_vector(a4, {0, 1}).tolist() == [0.5, 0.5, 0.0, 0.0]
        assert characteristic_vector(a4, {2, 3}).tolist() == [0.0, 0.0, 0.5, 0.5]

    def test_is_simplex_supported_on_subset(self):
        # non-negativity of the output is only guaranteed under the op's
        # precondition (a dominant-set-like subset: all member weights > 0)
        rng = np.random.default_rng(3)
        checked = 0
        for _ in range(60):
            graph = random_affinity(rng, 6)
            size = int(rng.integers(1, 5))
            subset = frozenset(rng.choice(6, size=size, replace=False).tolist())
            if any(node_weight(graph, subset, i) <= 0 for i in subset):
                continue
            x = check_simplex(characteristic_vector(graph, subset))
            assert set(np.nonzero(x)[0]) == subset
            checked += 1
        assert checked > 5

    def test_rejects_non_positive_total_weight(self, a4):
        # {0,1,2} has total weight 0.0 + 0.08 - 0.72 < 0
        with pytest.raises(ValueError, match="not positive"):
            characteristic_vector(a4, {0, 1, 2})

    def test_replicator_fixed_point(self, a4):
        # for a dominant set, every support component of A x equals x'Ax
        for subset in ({0, 1}, {2, 3}):
            x = characteristic_vector(a4, subset)
            ax = a4.a @ x
            value = x @ ax
            for i in subset:
                assert ax[i] == pytest.approx(value, abs=1e-8)


class TestSupportOf:
    def test_reads_relative_threshold(self):
        x = np.array([0.5, 0.5 - 1e-12, 1e-12, 0.0])
        x = x / x.sum()
        assert support_of(x) == frozenset({0, 1})


class TestAffinityGraphInvariants:
    def test_adjacency_derived_from_nonzeros(self, a4):
        assert a4.adjacency == frozenset({(0, 1), (0, 2), (1, 3), (2, 3)})

    def test_explicit_adjacency_must_cover_weights(self):
        a = np.zeros((3, 3))
        a[0, 1] = a[1, 0] = 0.5
        AffinityGraph(a, adjacency=frozenset({(0, 1), (1, 2)}))  # zero-weight edge allowed
        with pytest.raises(ValueError, match="non-adjacent"):
            AffinityGraph(a, adjacency=frozenset({(1, 2)}))

    def test_matrix_is_frozen(self, a4):
        with pytest.raises(ValueError):
            a4.a[0, 1] = 0.0

    def test_subgraph_reindexes(self, a4):
        sub = a4.subgraph([1, 2, 3])
        assert sub.n == 3
        assert sub.a[1, 2] == a4.a[2, 3]
