"""Interactive session service: wire format, caching, isolation."""

import base64

import numpy as np
import pytest
from fastapi.testclient import TestClient

from scribbleseg.config import PipelineConfig
from scribbleseg.io import decode_mask_png, encode_mask_png
from scribbleseg.propagation import propagate_pipeline, precompute_pipeline
from scribbleseg.server import create_app
from scribbleseg.synthetic import three_region_image, three_region_strokes

import io as stdio

from PIL import Image


@pytest.fixture(scope="module")
def fixture48():
    return three_region_image(size=48)


@pytest.fixture(scope="module")
def client():
    cfg = PipelineConfig(n_classes=3, jobs=2)
    return TestClient(create_app(cfg))


def png_b64(image: np.ndarray) -> str:
    buf = stdio.BytesIO()
    Image.fromarray(image).save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


def mask_from_b64(payload: str) -> np.ndarray:
    return decode_mask_png(base64.b64decode(payload)).labels


def strokes_for(size: int) -> list[dict]:
    return three_region_strokes(size)


class TestSessions:
    def test_create_returns_diagnostics(self, client, fixture48):
        image, _, _ = fixture48
        resp = client.post("/sessions", json={"image_png": png_b64(image)})
        assert resp.status_code == 200
        body = resp.json()
        assert body["width"] == 48 and body["height"] == 48
        # interactive default grid: 2 spaces x 2 k values
        assert len(body["superpixel_counts"]) == 4
        assert all(c["count"] >= 1 for c in body["superpixel_counts"])

    def test_same_image_two_sessions_identical_artifacts(self, client, fixture48):
        image, _, _ = fixture48
        a = client.post("/sessions", json={"image_png": png_b64(image)}).json()
        b = client.post("/sessions", json={"image_png": png_b64(image)}).json()
        assert a["id"] != b["id"]
        assert a["superpixel_counts"] == b["superpixel_counts"]
        payload = {"strokes": strokes_for(48)}
        mask_a = client.post(f"/sessions/{a['id']}/scribbles", json=payload).json()["mask_png"]
        mask_b = client.post(f"/sessions/{b['id']}/scribbles", json=payload).json()["mask_png"]
        assert np.array_equal(mask_from_b64(mask_a), mask_from_b64(mask_b))

    def test_invalid_png_rejected(self, client):
        resp = client.post("/sessions", json={"image_png": base64.b64encode(b"junk").decode()})
        assert resp.status_code == 400
        resp = client.post("/sessions", json={"image_png": "!!!not-base64!!!"})
        assert resp.status_code == 400

    def test_unknown_session_404(self, client):
        assert client.post("/sessions/deadbeef/scribbles", json={"strokes": strokes_for(48)}).status_code == 404
        assert client.get("/sessions/deadbeef/mask").status_code == 404
        assert client.delete("/sessions/deadbeef").status_code == 404


class TestScribbleSubmission:
    def test_repeat_submission_is_identical(self, client, fixture48):
        image, _, _ = fixture48
        sid = client.post("/sessions", json={"image_png": png_b64(image)}).json()["id"]
        payload = {"strokes": strokes_for(48)}
        first = client.post(f"/sessions/{sid}/scribbles", json=payload).json()
        second = client.post(f"/sessions/{sid}/scribbles", json=payload).json()
        assert np.array_equal(mask_from_b64(first["mask_png"]), mask_from_b64(second["mask_png"]))
        assert first["ms"] > 0

    def test_corrective_scribble_flips_region(self, client, fixture48):
        image, gt, _ = fixture48
        sid = client.post("/sessions", json={"image_png": png_b64(image)}).json()["id"]
        two = [s for s in strokes_for(48) if s["class_id"] != 2]
        mask2 = mask_from_b64(
            client.post(f"/sessions/{sid}/scribbles", json={"strokes": two}).json()["mask_png"]
        )
        bottom_right = gt.labels == 2
        assert set(np.unique(mask2[bottom_right])) <= {0, 1}
        full = strokes_for(48)
        mask3 = mask_from_b64(
            client.post(f"/sessions/{sid}/scribbles", json={"strokes": full}).json()["mask_png"]
        )
        flipped = (mask3[bottom_right] == 2).mean()
        assert flipped > 0.9

    def test_mask_endpoint_returns_last(self, client, fixture48):
        image, _, _ = fixture48
        sid = client.post("/sessions", json={"image_png": png_b64(image)}).json()["id"]
        assert client.get(f"/sessions/{sid}/mask").status_code == 404
        submitted = client.post(
            f"/sessions/{sid}/scribbles", json={"strokes": strokes_for(48)}
        ).json()["mask_png"]
        fetched = client.get(f"/sessions/{sid}/mask").json()["mask_png"]
        assert np.array_equal(mask_from_b64(submitted), mask_from_b64(fetched))

    def test_bad_class_and_empty_scribbles_rejected(self, client, fixture48):
        image, _, _ = fixture48
        sid = client.post("/sessions", json={"image_png": png_b64(image)}).json()["id"]
        bad = [{"class_id": 7, "width_px": 3, "points": [[5, 5], [9, 9]]}]
        assert client.post(f"/sessions/{sid}/scribbles", json={"strokes": bad}).status_code == 400
        assert client.post(f"/sessions/{sid}/scribbles", json={"strokes": []}).status_code == 400

    def test_scribbles_png_payload(self, client, fixture48):
        image, _, scribbles = fixture48
        sid = client.post("/sessions", json={"image_png": png_b64(image)}).json()["id"]
        png = encode_mask_png(scribbles.strokes.astype(np.uint8))
        resp = client.post(
            f"/sessions/{sid}/scribbles",
            json={"scribbles_png": base64.b64encode(png).decode()},
        )
        assert resp.status_code == 200

    def test_delete_session(self, client, fixture48):
        image, _, _ = fixture48
        sid = client.post("/sessions", json={"image_png": png_b64(image)}).json()["id"]
        assert client.delete(f"/sessions/{sid}").status_code == 204
        assert client.get(f"/sessions/{sid}/mask").status_code == 404


class TestCacheTransparency:
    def test_submit_matches_batch_pipeline(self, fixture48):
        image, _, scribbles = fixture48
        cfg = PipelineConfig(n_classes=3, jobs=1).interactive()
        batch = propagate_pipeline(precompute_pipeline(image, cfg), scribbles, cfg)
        client = TestClient(create_app(PipelineConfig(n_classes=3, jobs=1)))
        sid = client.post("/sessions", json={"image_png": png_b64(image)}).json()["id"]
        png = encode_mask_png(scribbles.strokes.astype(np.uint8))
        served = client.post(
            f"/sessions/{sid}/scribbles",
            json={"scribbles_png": base64.b64encode(png).decode()},
        ).json()
        assert np.array_equal(mask_from_b64(served["mask_png"]), batch.mask.labels)

    def test_warm_submission_cheaper_than_cold_run(self):
        # the cached artifacts must make a scribble round-trip strictly
        # cheaper than a cold create-and-submit of the same work
        import time

        image, _, scribbles = three_region_image(size=96)
        client = TestClient(create_app(PipelineConfig(n_classes=3, jobs=1)))
        png = base64.b64encode(encode_mask_png(scribbles.strokes.astype(np.uint8))).decode()

        cold_start = time.perf_counter()
        sid = client.post("/sessions", json={"image_png": png_b64(image)}).json()["id"]
        client.post(f"/sessions/{sid}/scribbles", json={"scribbles_png": png})
        cold = time.perf_counter() - cold_start

        warm_start = time.perf_counter()
        client.post(f"/sessions/{sid}/scribbles", json={"scribbles_png": png})
        warm = time.perf_counter() - warm_start
        assert warm < cold, f"warm {warm:.3f}s not cheaper than cold {cold:.3f}s"

    def test_sessions_are_isolated(self, fixture48):
        image, _, _ = fixture48
        rotated = np.rot90(image, axes=(0, 1)).copy()
        client = TestClient(create_app(PipelineConfig(n_classes=3, jobs=1)))
        a = client.post("/sessions", json={"image_png": png_b64(image)}).json()["id"]
        b = client.post("/sessions", json={"image_png": png_b64(rotated)}).json()["id"]
        payload = {"strokes": [{"class_id": 0, "width_px": 4, "points": [[10, 10], [38, 10]]},
                               {"class_id": 1, "width_px": 4, "points": [[10, 38], [38, 38]]}]}
        mask_b = mask_from_b64(client.post(f"/sessions/{b}/scribbles", json=payload).json()["mask_png"])
        mask_a = mask_from_b64(client.post(f"/sessions/{a}/scribbles", json=payload).json()["mask_png"])
        mask_a2 = mask_from_b64(client.post(f"/sessions/{a}/scribbles", json=payload).json()["mask_png"])
        assert np.array_equal(mask_a, mask_a2)
        assert not np.array_equal(mask_a, mask_b)
