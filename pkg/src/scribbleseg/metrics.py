"""Segmentation evaluation: confusion matrix, pixel/mean accuracy, mean IoU."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .propagation import LabelMask


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts[i, j] = pixels of ground-truth class i predicted as class j."""

    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64).copy()
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise ValueError(f"expected square count matrix, got shape {counts.shape}")
        if (counts < 0).any():
            raise ValueError("confusion counts must be non-negative")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @property
    def n_classes(self) -> int:
        return self.counts.shape[0]

    @property
    def gt_totals(self) -> np.ndarray:
        """t_i: total ground-truth pixels per class."""
        return self.counts.sum(axis=1)

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        if self.n_classes != other.n_classes:
            raise ValueError("cannot merge confusion matrices of different class counts")
        return ConfusionMatrix(self.counts + other.counts)

    @classmethod
    def zeros(cls, n_classes: int) -> "ConfusionMatrix":
        return cls(np.zeros((n_classes, n_classes), dtype=np.int64))


def _labels_of(mask) -> np.ndarray:
    if isinstance(mask, LabelMask):
        return mask.labels.astype(np.int64)
    return np.asarray(mask, dtype=np.int64)


def accumulate(pred, gt, n_classes: int, ignore_label: int = 255) -> ConfusionMatrix:
    """Confusion counts over pixels whose ground truth is not ignored."""
    pred = _labels_of(pred)
    gt = _labels_of(gt)
    if pred.shape != gt.shape:
        raise ValueError(f"prediction shape {pred.shape} does not match ground truth {gt.shape}")
    bad_gt = (gt != ignore_label) & ((gt < 0) | (gt >= n_classes))
    if bad_gt.any():
        raise ValueError(f"ground truth contains out-of-range labels: {sorted(np.unique(gt[bad_gt]).tolist())}")
    valid = gt != ignore_label
    bad_pred = valid & ((pred < 0) | (pred >= n_classes))
    if bad_pred.any():
        raise ValueError(f"prediction contains out-of-range labels: {sorted(np.unique(pred[bad_pred]).tolist())}")
    flat = n_classes * gt[valid] + pred[valid]
    counts = np.bincount(flat, minlength=n_classes * n_classes).reshape(n_classes, n_classes)
    return ConfusionMatrix(counts)


def _require_nonzero(cm: ConfusionMatrix) -> np.ndarray:
    counts = cm.counts
    if counts.sum() == 0:
        raise ValueError("confusion matrix is all zeros; nothing was evaluated")
    return counts


def pixel_accuracy(cm: ConfusionMatrix) -> float:
    """sum_i n_ii / sum_i t_i."""
    counts = _require_nonzero(cm)
    return float(np.trace(counts) / counts.sum())


def mean_accuracy(cm: ConfusionMatrix) -> float:
    """Mean of the per-class recalls n_ii / t_i over classes present in the
    ground truth."""
    counts = _require_nonzero(cm)
    t = counts.sum(axis=1)
    present = t > 0
    return float((np.diag(counts)[present] / t[present]).mean())


def per_class_iou(cm: ConfusionMatrix) -> np.ndarray:
    """IoU per class, NaN for classes absent from both gt and prediction."""
    counts = _require_nonzero(cm)
    diag = np.diag(counts).astype(np.float64)
    union = counts.sum(axis=1) + counts.sum(axis=0) - diag
    with np.errstate(invalid="ignore"):
        return np.where(union > 0, diag / np.where(union > 0, union, 1.0), np.nan)


def mean_iou(cm: ConfusionMatrix) -> float:
    """Mean of n_ii / (t_i + sum_j n_ji - n_ii) over classes with a
    non-empty union."""
    iou = per_class_iou(cm)
    return float(np.nanmean(iou))


def format_report(cm: ConfusionMatrix, class_names: list[str] | None = None) -> str:
    """Per-class IoU table followed by the three aggregate scalars."""
    iou = per_class_iou(cm)
    t = cm.gt_totals
    names = class_names or [f"class {i}" for i in range(cm.n_classes)]
    width = max(len(n) for n in names)
    lines = [f"{'class'.ljust(width)}  {'gt pixels':>10}  {'IoU':>8}"]
    for i, name in enumerate(names):
        rendered = "    -" if np.isnan(iou[i]) else f"{iou[i]:8.4f}"
        lines.append(f"{name.ljust(width)}  {t[i]:>10d}  {rendered:>8}")
    lines.append("")
    lines.append(f"pixel accuracy: {pixel_accuracy(cm):.4f}")
    lines.append(f"mean accuracy:  {mean_accuracy(cm):.4f}")
    lines.append(f"mean IoU:       {mean_iou(cm):.4f}")
    return "\n".join(lines)
