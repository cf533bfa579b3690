"""Scikit-learn style facade over the propagation pipeline.

``ScribbleSegmenter`` is transductive in the manner of
``sklearn.semi_supervised.LabelPropagation``: ``fit`` takes the image plus
the sparse scribble labels and exposes the dense labeling as ``labels_``.
Fitting also caches every scribble-independent artifact, so subsequent
calls to :meth:`propagate` with revised scribbles only rerun the
scribble-dependent stages.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .config import DEFAULT_K_VALUES, DEFAULT_SIGMA_GRID, PipelineConfig
from .features import ColorSpace
from .metrics import accumulate, mean_iou
from .propagation import (
    PipelineResult,
    ScribbleSet,
    precompute_pipeline,
    propagate_pipeline,
)
from .validation import check_rgb_image, check_scribble_mask


class ScribbleSegmenter(BaseEstimator):
    """Propagate sparse multi-class scribbles into a dense label mask.

    Parameters mirror :class:`scribbleseg.config.PipelineConfig`; see the
    README for their meaning. Attributes available after ``fit``:

    - ``labels_``: dense (H, W) class-id array (when scribbles were given)
    - ``result_``: the full :class:`PipelineResult` with per-job maps
    - ``artifacts_``: cached scribble-independent artifacts
    """

    def __init__(
        self,
        color_spaces=tuple(space.value for space in ColorSpace),
        k_values=DEFAULT_K_VALUES,
        sigma_fh=0.8,
        sigma_c="best",
        sigma_t="best",
        sigma_grid=DEFAULT_SIGMA_GRID,
        min_size=20,
        n_classes=21,
        ignore_label=255,
        tolerance=1e-7,
        max_iterations=10_000,
        alpha_margin=1.01,
        jobs=4,
        two_stage_vote=False,
    ):
        self.color_spaces = color_spaces
        self.k_values = k_values
        self.sigma_fh = sigma_fh
        self.sigma_c = sigma_c
        self.sigma_t = sigma_t
        self.sigma_grid = sigma_grid
        self.min_size = min_size
        self.n_classes = n_classes
        self.ignore_label = ignore_label
        self.tolerance = tolerance
        self.max_iterations = max_iterations
        self.alpha_margin = alpha_margin
        self.jobs = jobs
        self.two_stage_vote = two_stage_vote

    def _config(self) -> PipelineConfig:
        spaces = tuple(
            space if isinstance(space, ColorSpace) else ColorSpace.parse(space)
            for space in self.color_spaces
        )
        return PipelineConfig(
            color_spaces=spaces,
            k_values=tuple(float(k) for k in self.k_values),
            sigma_fh=self.sigma_fh,
            sigma_c=self.sigma_c,
            sigma_t=self.sigma_t,
            sigma_grid=tuple(float(s) for s in self.sigma_grid),
            min_size=int(self.min_size),
            n_classes=int(self.n_classes),
            ignore_label=int(self.ignore_label),
            tolerance=float(self.tolerance),
            max_iterations=int(self.max_iterations),
            alpha_margin=float(self.alpha_margin),
            jobs=int(self.jobs),
            two_stage_vote=bool(self.two_stage_vote),
        )

    def _as_scribbles(self, y) -> ScribbleSet:
        if isinstance(y, ScribbleSet):
            return y
        arr = check_scribble_mask(y, self.config_.n_classes, shape=self.image_.shape[:2])
        return ScribbleSet.from_mask(arr, self.config_.n_classes)

    def fit(self, X, y=None):
        """Cache artifacts for image ``X``; propagate if scribbles ``y`` given.

        ``X`` is an (H, W, 3) uint8 RGB image and ``y`` an (H, W) array of
        class ids with 255 for unscribbled pixels (or a ``ScribbleSet``).
        """
        self.image_ = check_rgb_image(X)
        self.config_ = self._config()
        self.artifacts_ = precompute_pipeline(self.image_, self.config_)
        self.result_ = None
        if y is not None:
            self.result_ = self._propagate(y)
        return self

    def _propagate(self, y) -> PipelineResult:
        return propagate_pipeline(self.artifacts_, self._as_scribbles(y), self.config_)

    def propagate(self, y) -> np.ndarray:
        """Rerun only the scribble-dependent stages against the cached
        artifacts and return the dense (H, W) label array."""
        self._check_fitted()
        self.result_ = self._propagate(y)
        return self.labels_

    @property
    def labels_(self) -> np.ndarray:
        if getattr(self, "result_", None) is None:
            raise AttributeError("no propagated mask yet; fit with scribbles or call propagate()")
        return self.result_.mask.labels

    def fit_predict(self, X, y) -> np.ndarray:
        return self.fit(X, y).labels_

    def score(self, X, y) -> float:
        """Mean IoU of the propagated mask against a dense ground truth ``y``
        (``X`` is ignored; kept for estimator-API compatibility)."""
        self._check_fitted()
        cm = accumulate(self.labels_, y, self.config_.n_classes, self.config_.ignore_label)
        return mean_iou(cm)

    def superpixel_counts(self) -> list[dict]:
        """Superpixel count per cached (sigma_fh, space, k) job."""
        self._check_fitted()
        return [
            {
                "sigma_fh": sigma_fh,
                "space": art.space.value,
                "k": art.params.k,
                "count": art.superpixels.count,
            }
            for sigma_fh, artifacts in sorted(self.artifacts_.items())
            for art in artifacts
        ]

    def _check_fitted(self):
        if not hasattr(self, "artifacts_"):
            raise RuntimeError("this ScribbleSegmenter instance is not fitted yet")
