"""Input validation helpers."""

import numpy as np
import pytest

from scribbleseg.validation import (
    UNLABELED,
    check_affinity_matrix,
    check_label_mask,
    check_raster,
    check_rgb_image,
    check_scribble_mask,
    check_simplex,
)


class TestCheckRgbImage:
    def test_accepts_uint8_and_coercible_ints(self):
        img = np.zeros((4, 5, 3), dtype=np.uint8)
        assert check_rgb_image(img).dtype == np.uint8
        wide = np.zeros((4, 5, 3), dtype=np.int64)
        assert check_rgb_image(wide).dtype == np.uint8

    def test_rejects_bad_shapes_and_values(self):
        with pytest.raises(ValueError):
            check_rgb_image(np.zeros((4, 5)))
        with pytest.raises(ValueError):
            check_rgb_image(np.zeros((4, 5, 4), dtype=np.uint8))
        with pytest.raises(ValueError):
            check_rgb_image(np.zeros((0, 5, 3), dtype=np.uint8))
        with pytest.raises(ValueError):
            check_rgb_image(np.full((2, 2, 3), 300))
        with pytest.raises(ValueError):
            check_rgb_image(np.zeros((2, 2, 3), dtype=np.float32))


class TestCheckRaster:
    def test_promotes_single_channel(self):
        out = check_raster(np.zeros((3, 4)))
        assert out.shape == (3, 4, 1)
        assert out.dtype == np.float64

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            check_raster(np.zeros((0, 4)))


class TestCheckScribbleMask:
    def test_valid_mask_passes(self):
        grid = np.full((4, 4), UNLABELED)
        grid[1, 1] = 2
        out = check_scribble_mask(grid, n_classes=3)
        assert out.dtype == np.int64

    def test_rejects_out_of_range_empty_and_mismatched(self):
        grid = np.full((4, 4), UNLABELED)
        grid[0, 0] = 5
        with pytest.raises(ValueError):
            check_scribble_mask(grid, n_classes=3)
        with pytest.raises(ValueError):
            check_scribble_mask(np.full((4, 4), UNLABELED), n_classes=3)
        ok = np.full((4, 4), UNLABELED)
        ok[0, 0] = 0
        with pytest.raises(ValueError):
            check_scribble_mask(ok, n_classes=3, shape=(5, 5))


class TestCheckLabelMask:
    def test_range_check_optional(self):
        mask = np.array([[0, 9]])
        assert check_label_mask(mask).tolist() == [[0, 9]]
        with pytest.raises(ValueError):
            check_label_mask(mask, n_classes=5)


class TestCheckSimplex:
    def test_accepts_within_tolerance(self):
        x = np.array([0.5, 0.5 + 1e-12])
        assert check_simplex(x) is not None

    def test_rejects_negative_and_bad_sum(self):
        with pytest.raises(ValueError):
            check_simplex(np.array([1.2, -0.2]))
        with pytest.raises(ValueError):
            check_simplex(np.array([0.4, 0.4]))
        with pytest.raises(ValueError):
            check_simplex(np.zeros((2, 2)))


class TestCheckAffinityMatrix:
    def test_rejects_each_invariant_violation(self):
        good = np.array([[0.0, 0.5], [0.5, 0.0]])
        assert check_affinity_matrix(good) is not None
        with pytest.raises(ValueError, match="symmetric"):
            check_affinity_matrix(np.array([[0.0, 0.5], [0.4, 0.0]]))
        with pytest.raises(ValueError, match="diagonal"):
            check_affinity_matrix(np.array([[0.1, 0.5], [0.5, 0.0]]))
        with pytest.raises(ValueError, match="negative"):
            check_affinity_matrix(np.array([[0.0, -0.5], [-0.5, 0.0]]))
        with pytest.raises(ValueError, match="square"):
            check_affinity_matrix(np.zeros((2, 3)))
