"""Scribble-driven semantic segmentation via constrained dominant sets."""

from .config import PipelineConfig, load_config, parse_config, save_config
from .dynamics import (
    CdsProgram,
    SolverConfig,
    build_program,
    extract_cds_collection,
    inimdyn_solve,
    inimdyn_step,
    lambda_max_principal,
)
from .errors import (
    ConvergenceError,
    EmptySeedsError,
    InputError,
    ScribbleSegError,
    SeedCoverageError,
)
from .estimator import ScribbleSegmenter
from .features import ColorSpace, FeatureVector, build_affinity, convert_color_space
from .graph import (
    AffinityGraph,
    DominantSetResult,
    characteristic_vector,
    is_dominant_set,
    node_weight,
    relative_similarity,
)
from .metrics import ConfusionMatrix, accumulate, mean_accuracy, mean_iou, pixel_accuracy
from .propagation import (
    ClassSegments,
    LabelMask,
    ScribbleSet,
    full_pipeline,
    majority_vote,
    run_pipeline,
    segment_single,
)
from .superpixels import FhParams, SuperpixelMap, adjacency, fh_segment, gaussian_smooth

__version__ = "0.1.0"

__all__ = [
    "AffinityGraph",
    "CdsProgram",
    "ClassSegments",
    "ColorSpace",
    "ConfusionMatrix",
    "ConvergenceError",
    "DominantSetResult",
    "EmptySeedsError",
    "FeatureVector",
    "FhParams",
    "InputError",
    "LabelMask",
    "PipelineConfig",
    "ScribbleSegError",
    "ScribbleSegmenter",
    "ScribbleSet",
    "SeedCoverageError",
    "SolverConfig",
    "SuperpixelMap",
    "accumulate",
    "adjacency",
    "build_affinity",
    "build_program",
    "characteristic_vector",
    "convert_color_space",
    "extract_cds_collection",
    "fh_segment",
    "full_pipeline",
    "gaussian_smooth",
    "inimdyn_solve",
    "inimdyn_step",
    "is_dominant_set",
    "lambda_max_principal",
    "load_config",
    "majority_vote",
    "mean_accuracy",
    "mean_iou",
    "node_weight",
    "parse_config",
    "pixel_accuracy",
    "relative_similarity",
    "run_pipeline",
    "save_config",
    "segment_single",
]
