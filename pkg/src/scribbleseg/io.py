"""File ingestion and emission: images, scribbles, masks.

Scribbles come either as single-channel PNGs (255 = unlabeled, smaller
values are class ids) or as a JSON stroke file of class-tagged polylines
with a brush width, rasterized with round caps. Masks are single-channel
PNGs whose pixel values are class ids.
"""

from __future__ import annotations

import io as _stdio
import json
import math

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import InputError
from .propagation import LabelMask, ScribbleSet
from .validation import UNLABELED, check_rgb_image

_SUPPORTED_FORMATS = {"PNG", "PPM"}


def decode_image(data: bytes) -> np.ndarray:
    """Decode PNG or binary PPM bytes into an (H, W, 3) uint8 RGB raster."""
    try:
        with Image.open(_stdio.BytesIO(data)) as img:
            if img.format not in _SUPPORTED_FORMATS:
                raise InputError(f"unsupported image format {img.format!r}; expected PNG or PPM")
            rgb = img.convert("RGB")
            return np.asarray(rgb, dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise InputError(f"cannot decode image: {exc}") from exc
    except OSError as exc:
        raise InputError(f"corrupt image data: {exc}") from exc


def load_image(path) -> np.ndarray:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read image {path}: {exc}") from exc
    return decode_image(data)


def save_image(image, path) -> None:
    arr = check_rgb_image(image)
    Image.fromarray(arr, mode="RGB").save(path, format="PNG")


def encode_mask_png(mask: LabelMask | np.ndarray) -> bytes:
    arr = mask.labels if isinstance(mask, LabelMask) else np.asarray(mask)
    buf = _stdio.BytesIO()
    Image.fromarray(arr.astype(np.uint8), mode="L").save(buf, format="PNG")
    return buf.getvalue()


def save_mask(mask: LabelMask, path) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(encode_mask_png(mask))
    except OSError as exc:
        raise InputError(f"cannot write mask {path}: {exc}") from exc


def decode_mask_png(data: bytes) -> LabelMask:
    try:
        with Image.open(_stdio.BytesIO(data)) as img:
            if img.format != "PNG":
                raise InputError(f"expected PNG mask, got {img.format!r}")
            gray = img.convert("L")
            return LabelMask(labels=np.asarray(gray, dtype=np.uint8))
    except UnidentifiedImageError as exc:
        raise InputError(f"cannot decode mask: {exc}") from exc


def load_mask(path) -> LabelMask:
    try:
        with open(path, "rb") as fh:
            return decode_mask_png(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read mask {path}: {exc}") from exc


def rasterize_strokes(strokes: list[dict], width: int, height: int, n_classes: int) -> np.ndarray:
    """Paint polyline strokes onto a scribble grid with round caps.

    A pixel is covered when its center lies within ``width_px / 2`` of any
    segment of the polyline; later strokes overwrite earlier ones.
    """
    grid = np.full((height, width), UNLABELED, dtype=np.int64)
    for index, stroke in enumerate(strokes):
        try:
            class_id = int(stroke["class_id"])
            brush = float(stroke.get("width_px", 3.0))
            raw = stroke["points"] if "points" in stroke else stroke["polyline"]
            points = [(float(x), float(y)) for x, y in raw]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"stroke {index}: malformed record: {exc}") from exc
        if not 0 <= class_id < n_classes:
            raise InputError(f"stroke {index}: class {class_id} outside [0, {n_classes})")
        if not points:
            raise InputError(f"stroke {index}: empty polyline")
        if brush <= 0:
            raise InputError(f"stroke {index}: non-positive brush width")
        radius = brush / 2.0
        segments = list(zip(points, points[1:])) or [(points[0], points[0])]
        for (x0, y0), (x1, y1) in segments:
            _paint_segment(grid, x0, y0, x1, y1, radius, class_id)
    return grid


def _paint_segment(grid, x0, y0, x1, y1, radius, class_id):
    height, width = grid.shape
    lo_x = max(0, math.floor(min(x0, x1) - radius))
    hi_x = min(width - 1, math.ceil(max(x0, x1) + radius))
    lo_y = max(0, math.floor(min(y0, y1) - radius))
    hi_y = min(height - 1, math.ceil(max(y0, y1) + radius))
    if lo_x > hi_x or lo_y > hi_y:
        return
    ys, xs = np.mgrid[lo_y:hi_y + 1, lo_x:hi_x + 1]
    dx, dy = x1 - x0, y1 - y0
    norm = dx * dx + dy * dy
    if norm == 0.0:
        dist2 = (xs - x0) ** 2 + (ys - y0) ** 2
    else:
        t = np.clip(((xs - x0) * dx + (ys - y0) * dy) / norm, 0.0, 1.0)
        dist2 = (xs - (x0 + t * dx)) ** 2 + (ys - (y0 + t * dy)) ** 2
    covered = dist2 <= radius * radius
    grid[lo_y:hi_y + 1, lo_x:hi_x + 1][covered] = class_id


def parse_stroke_json(text: str, n_classes: int, shape: tuple[int, int] | None = None) -> ScribbleSet:
    """Parse the JSON stroke format into a rasterized scribble set."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"scribble file is neither a PNG nor valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "strokes" not in doc:
        raise InputError("stroke JSON must be an object with a 'strokes' list")
    declared = None
    if "height" in doc and "width" in doc:
        try:
            declared = (int(doc["height"]), int(doc["width"]))
        except (TypeError, ValueError) as exc:
            raise InputError("stroke JSON 'width'/'height' must be integers") from exc
    if shape is None:
        if declared is None:
            raise InputError("stroke JSON needs 'width' and 'height' fields")
        shape = declared
    elif declared is not None and declared != tuple(shape):
        raise InputError(
            f"stroke file declares {declared[1]}x{declared[0]} but the image is {shape[1]}x{shape[0]}"
        )
    grid = rasterize_strokes(doc["strokes"], width=shape[1], height=shape[0], n_classes=n_classes)
    if not (grid != UNLABELED).any():
        raise InputError("stroke file rasterized to an empty scribble set")
    return ScribbleSet.from_mask(grid, n_classes=n_classes)


def load_scribbles(path, n_classes: int, shape: tuple[int, int] | None = None) -> ScribbleSet:
    """Load scribbles from a PNG label image or a JSON stroke file."""
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read scribbles {path}: {exc}") from exc
    if data[:4] == b"\x89PNG":
        with Image.open(_stdio.BytesIO(data)) as img:
            arr = np.asarray(img.convert("L"), dtype=np.int64)
        if shape is not None and arr.shape != shape:
            raise InputError(f"scribble image shape {arr.shape} does not match image {shape}")
        try:
            return ScribbleSet.from_mask(arr, n_classes=n_classes)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    return parse_stroke_json(data.decode("utf-8"), n_classes, shape)


def save_scribbles_png(scr: ScribbleSet, path) -> None:
    arr = scr.strokes.astype(np.uint8)
    Image.fromarray(arr, mode="L").save(path, format="PNG")
