"""File formats: images, masks, scribble PNGs and stroke JSON."""

import json

import numpy as np
import pytest
from PIL import Image

from scribbleseg.errors import InputError
from scribbleseg.io import (
    decode_mask_png,
    encode_mask_png,
    load_image,
    load_mask,
    load_scribbles,
    rasterize_strokes,
    save_image,
    save_mask,
    save_scribbles_png,
)
from scribbleseg.propagation import LabelMask, ScribbleSet
from scribbleseg.validation import UNLABELED


class TestImages:
    def test_one_pixel_red_png(self, tmp_path):
        path = tmp_path / "red.png"
        Image.fromarray(np.array([[[255, 0, 0]]], dtype=np.uint8)).save(path)
        raster = load_image(path)
        assert raster.shape == (1, 1, 3)
        assert raster[0, 0].tolist() == [255, 0, 0]

    def test_ppm_and_png_decode_identically(self, tmp_path):
        rng = np.random.default_rng(0)
        arr = rng.integers(0, 256, size=(5, 7, 3), dtype=np.uint8)
        png = tmp_path / "img.png"
        ppm = tmp_path / "img.ppm"
        Image.fromarray(arr).save(png)
        Image.fromarray(arr).save(ppm)  # Pillow writes binary P6
        assert np.array_equal(load_image(png), load_image(ppm))

    def test_round_trip_is_lossless(self, tmp_path):
        rng = np.random.default_rng(1)
        arr = rng.integers(0, 256, size=(9, 4, 3), dtype=np.uint8)
        path = tmp_path / "rt.png"
        save_image(arr, path)
        assert np.array_equal(load_image(path), arr)

    def test_missing_and_corrupt_files(self, tmp_path):
        with pytest.raises(InputError):
            load_image(tmp_path / "nope.png")
        bad = tmp_path / "bad.png"
        bad.write_bytes(b"\x89PNG\r\n\x1a\nnot really a png")
        with pytest.raises(InputError):
            load_image(bad)
        text = tmp_path / "file.txt"
        text.write_bytes(b"hello world")
        with pytest.raises(InputError):
            load_image(text)


class TestMasks:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(2)
        mask = LabelMask(labels=rng.integers(0, 21, size=(8, 8)))
        path = tmp_path / "mask.png"
        save_mask(mask, path)
        loaded = load_mask(path)
        assert np.array_equal(loaded.labels, mask.labels)

    def test_histogram_preserved(self):
        rng = np.random.default_rng(3)
        labels = rng.integers(0, 5, size=(16, 16))
        decoded = decode_mask_png(encode_mask_png(LabelMask(labels=labels)))
        for cls in range(5):
            assert (decoded.labels == cls).sum() == (labels == cls).sum()

    def test_constant_mask(self, tmp_path):
        mask = LabelMask(labels=np.full((4, 4), 9))
        path = tmp_path / "const.png"
        save_mask(mask, path)
        assert (load_mask(path).labels == 9).all()


class TestScribblePng:
    def test_all_unlabeled_errors(self, tmp_path):
        path = tmp_path / "empty.png"
        Image.fromarray(np.full((4, 4), 255, dtype=np.uint8), mode="L").save(path)
        with pytest.raises(InputError):
            load_scribbles(path, n_classes=21)

    def test_single_pixel_stroke(self, tmp_path):
        arr = np.full((5, 5), 255, dtype=np.uint8)
        arr[2, 3] = 3
        path = tmp_path / "one.png"
        Image.fromarray(arr, mode="L").save(path)
        scr = load_scribbles(path, n_classes=21)
        assert scr.classes_present == (3,)
        assert scr.strokes[2, 3] == 3

    def test_out_of_range_class_rejected(self, tmp_path):
        arr = np.full((4, 4), 255, dtype=np.uint8)
        arr[0, 0] = 30
        path = tmp_path / "bad.png"
        Image.fromarray(arr, mode="L").save(path)
        with pytest.raises(InputError):
            load_scribbles(path, n_classes=21)

    def test_round_trip_via_save(self, tmp_path):
        grid = np.full((6, 6), UNLABELED, dtype=np.int64)
        grid[1, 1:4] = 2
        grid[4, 2] = 0
        scr = ScribbleSet.from_mask(grid, n_classes=3)
        path = tmp_path / "scr.png"
        save_scribbles_png(scr, path)
        again = load_scribbles(path, n_classes=3)
        assert np.array_equal(again.strokes, scr.strokes)


class TestStrokeJson:
    def test_polyline_matches_direct_png(self, tmp_path):
        # rasterize a stroke, then save the covered pixels as a PNG; both
        # ingestion paths must produce the same scribble set
        strokes = [{"class_id": 2, "width_px": 3.0, "points": [[2.0, 2.0], [9.0, 4.0]]}]
        grid = rasterize_strokes(strokes, width=12, height=8, n_classes=5)
        png_path = tmp_path / "direct.png"
        Image.fromarray(grid.astype(np.uint8), mode="L").save(png_path)
        json_path = tmp_path / "strokes.json"
        json_path.write_text(json.dumps({"width": 12, "height": 8, "strokes": strokes}))
        from_png = load_scribbles(png_path, n_classes=5)
        from_json = load_scribbles(json_path, n_classes=5)
        assert np.array_equal(from_png.strokes, from_json.strokes)

    def test_round_caps_cover_endpoints(self):
        strokes = [{"class_id": 1, "width_px": 4.0, "points": [[5.0, 5.0]]}]
        grid = rasterize_strokes(strokes, width=11, height=11, n_classes=2)
        # a single point paints a disk of radius 2 around it
        assert grid[5, 5] == 1
        assert grid[5, 7] == 1
        assert grid[7, 5] == 1
        assert grid[5, 8] == UNLABELED
        ys, xs = np.nonzero(grid != UNLABELED)
        assert ((xs - 5) ** 2 + (ys - 5) ** 2 <= 4.0).all()

    def test_oracle_distance_rasterization(self):
        # brute-force point-to-segment distance over every pixel
        stroke = {"class_id": 1, "width_px": 5.0, "points": [[1.5, 2.0], [8.0, 6.5]]}
        grid = rasterize_strokes([stroke], width=12, height=10, n_classes=2)
        (x0, y0), (x1, y1) = stroke["points"]
        for y in range(10):
            for x in range(12):
                dx, dy = x1 - x0, y1 - y0
                t = max(0.0, min(1.0, ((x - x0) * dx + (y - y0) * dy) / (dx * dx + dy * dy)))
                dist = np.hypot(x - (x0 + t * dx), y - (y0 + t * dy))
                expected = 1 if dist <= 2.5 else UNLABELED
                assert grid[y, x] == expected, (x, y)

    def test_later_strokes_overwrite(self):
        strokes = [
            {"class_id": 1, "width_px": 3.0, "points": [[3.0, 3.0]]},
            {"class_id": 2, "width_px": 3.0, "points": [[3.0, 3.0]]},
        ]
        grid = rasterize_strokes(strokes, width=7, height=7, n_classes=3)
        assert grid[3, 3] == 2

    def test_bad_records_rejected(self, tmp_path):
        for bad in (
            {"strokes": [{"class_id": 9, "width_px": 3, "points": [[1, 1]]}], "width": 4, "height": 4},
            {"strokes": [{"class_id": 0, "width_px": 0, "points": [[1, 1]]}], "width": 4, "height": 4},
            {"strokes": [{"class_id": 0, "width_px": 2, "points": []}], "width": 4, "height": 4},
            {"strokes": []},
        ):
            path = tmp_path / "bad.json"
            path.write_text(json.dumps(bad))
            with pytest.raises(InputError):
                load_scribbles(path, n_classes=3)

    def test_polyline_key_accepted_as_alias(self):
        via_points = rasterize_strokes(
            [{"class_id": 1, "width_px": 3.0, "points": [[2, 2], [6, 2]]}], 9, 5, 2)
        via_polyline = rasterize_strokes(
            [{"class_id": 1, "width_px": 3.0, "polyline": [[2, 2], [6, 2]]}], 9, 5, 2)
        assert np.array_equal(via_points, via_polyline)

    def test_declared_size_must_match_image(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(json.dumps({
            "width": 10, "height": 10,
            "strokes": [{"class_id": 0, "width_px": 2, "points": [[3, 3]]}],
        }))
        with pytest.raises(InputError, match="declares"):
            load_scribbles(path, n_classes=2, shape=(8, 8))

    def test_not_json_not_png(self, tmp_path):
        path = tmp_path / "garbage.bin"
        path.write_bytes(b"\x00\x01\x02garbage")
        with pytest.raises(InputError):
            load_scribbles(path, n_classes=3)
