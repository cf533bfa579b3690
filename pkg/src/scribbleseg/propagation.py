"""Multi-class scribble propagation over superpixel affinity graphs.

Each (color space, threshold k) job converts the image, segments it into
superpixels, builds an affinity graph, extracts one collection of
seed-constrained dominant sets per scribbled class, and paints the
resulting per-superpixel labels back onto the pixel grid. The final mask
is a per-pixel majority vote over all jobs.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import SolverConfig, extract_cds_collection
from .errors import EmptySeedsError, ScribbleSegError
from .features import ColorSpace, all_superpixel_features, build_affinity, convert_color_space
from .graph import AffinityGraph
from .superpixels import FhParams, SuperpixelMap, adjacency, fh_segment, gaussian_smooth
from .validation import UNLABELED, check_scribble_mask

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScribbleSet:
    """Sparse per-pixel class annotations; 255 marks unscribbled pixels."""

    strokes: np.ndarray
    classes_present: tuple[int, ...]

    def __post_init__(self):
        strokes = np.asarray(self.strokes, dtype=np.int64).copy()
        strokes.flags.writeable = False
        object.__setattr__(self, "strokes", strokes)
        object.__setattr__(self, "classes_present", tuple(sorted(self.classes_present)))

    @classmethod
    def from_mask(cls, mask, n_classes: int) -> "ScribbleSet":
        arr = check_scribble_mask(mask, n_classes)
        present = tuple(int(c) for c in np.unique(arr) if c != UNLABELED)
        return cls(strokes=arr, classes_present=present)

    @property
    def shape(self) -> tuple[int, int]:
        return self.strokes.shape


@dataclass(frozen=True)
class ClassSegments:
    """Union of the dominant sets extracted for one class, with each
    member's characteristic-vector component as its confidence."""

    class_id: int
    uds: frozenset[int]
    confidence: np.ndarray

    def __post_init__(self):
        conf = np.asarray(self.confidence, dtype=np.float64).copy()
        conf.flags.writeable = False
        object.__setattr__(self, "confidence", conf)


@dataclass(frozen=True)
class LabelMask:
    """Dense per-pixel class-label image."""

    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.uint8).copy()
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        if labels.ndim != 2 or labels.size == 0:
            raise ValueError("label mask must be a non-empty (H, W) array")

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]


def scribbled_superpixel_classes(scr: ScribbleSet, sp: SuperpixelMap) -> dict[int, int]:
    """Resolve each scribbled superpixel to a single class.

    A superpixel crossed by several classes goes to the one with the most
    scribbled pixels inside it; ties go to the smaller class id.
    """
    if scr.shape != sp.labels.shape:
        raise ValueError(f"scribble shape {scr.shape} does not match superpixel map {sp.labels.shape}")
    marked = scr.strokes != UNLABELED
    if not marked.any():
        return {}
    sp_ids = sp.labels[marked]
    classes = scr.strokes[marked]
    n_classes = int(classes.max()) + 1
    counts = np.zeros((sp.count, n_classes), dtype=np.int64)
    np.add.at(counts, (sp_ids, classes), 1)
    winners = {}
    for sp_id in np.unique(sp_ids):
        winners[int(sp_id)] = int(np.argmax(counts[sp_id]))  # argmax favors smaller id on ties
    return winners


def _seeds_from_winners(winners: dict[int, int], class_id: int) -> frozenset[int]:
    seeds = frozenset(sp_id for sp_id, cls in winners.items() if cls == class_id)
    if not seeds:
        raise EmptySeedsError(
            f"every scribbled superpixel of class {class_id} was contested and won by another class"
        )
    return seeds


def seeds_from_scribbles(scr: ScribbleSet, sp: SuperpixelMap, class_id: int) -> frozenset[int]:
    """Seed superpixels of one class: scribbled by it and not won by another."""
    if class_id not in scr.classes_present:
        raise ValueError(f"class {class_id} has no scribbles")
    return _seeds_from_winners(scribbled_superpixel_classes(scr, sp), class_id)


def support_characteristic_vector(graph: AffinityGraph, support, fallback: np.ndarray) -> np.ndarray:
    """Weighted characteristic vector of an extracted support.

    For a dominant set the vector equalizes (Ax)_i over the support, so it
    is recovered from the payoff-equalizing linear system instead of the
    exponential weight recursion. Degenerate systems fall back to the
    solver state renormalized over the support.
    """
    idx = sorted(support)
    r = len(idx)
    system = np.zeros((r + 1, r + 1))
    system[:r, :r] = graph.a[np.ix_(idx, idx)]
    system[:r, r] = -1.0
    system[r, :r] = 1.0
    rhs = np.zeros(r + 1)
    rhs[r] = 1.0
    chi = np.zeros(graph.n)
    try:
        sol = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError:
        sol = None
    if sol is not None and (sol[:r] > 0.0).all():
        chi[idx] = sol[:r]
        return chi
    mass = fallback[idx]
    chi[idx] = mass / mass.sum()
    return chi


def propagate_class(
    graph: AffinityGraph,
    seeds,
    cfg: SolverConfig | None = None,
    class_id: int = 0,
) -> ClassSegments:
    """Extract the constrained dominant sets seeded by one class."""
    results = extract_cds_collection(graph, seeds, cfg)
    uds: set[int] = set()
    confidence = np.zeros(graph.n)
    for result in results:
        members = sorted(result.support)
        chi = support_characteristic_vector(graph, result.support, result.chi)
        confidence[members] = chi[members]
        uds.update(members)
    return ClassSegments(class_id=class_id, uds=frozenset(uds), confidence=confidence)


def assign_labels(segments: list[ClassSegments], graph: AffinityGraph) -> np.ndarray:
    """Resolve per-superpixel labels from the per-class extractions.

    Vertices covered by one class take it; overlaps go to the class with
    the larger characteristic-vector component (ties to the smaller class
    id). Remaining vertices are filled breadth-first from their
    highest-affinity labeled neighbor; vertices with no affinity path get
    the globally most-confident class.
    """
    if not segments:
        raise ValueError("need at least one class segment")
    segments = sorted(segments, key=lambda s: s.class_id)
    conf = np.stack([s.confidence for s in segments])
    class_ids = np.array([s.class_id for s in segments])
    n = graph.n
    labels = np.full(n, -1, dtype=np.int64)
    covered = conf.max(axis=0) > 0.0
    labels[covered] = class_ids[np.argmax(conf[:, covered], axis=0)]

    a = graph.a
    while True:
        unassigned = np.nonzero(labels < 0)[0]
        if unassigned.size == 0:
            return labels
        assigned = labels >= 0
        # Per class, each unassigned vertex's best affinity to that class's
        # labeled vertices; argmax over ascending class order is the tie rule.
        best = np.zeros((class_ids.size, unassigned.size))
        for row, cls in enumerate(class_ids):
            members = assigned & (labels == cls)
            if members.any():
                best[row] = a[np.ix_(unassigned, np.nonzero(members)[0])].max(axis=1)
        reachable = best.max(axis=0) > 0.0
        if not reachable.any():
            fallback = int(class_ids[int(np.argmax(conf.max(axis=1)))])
            log.warning(
                "%d superpixels unreachable from any labeled vertex; assigning class %d",
                unassigned.size, fallback,
            )
            labels[unassigned] = fallback
            return labels
        picks = class_ids[np.argmax(best[:, reachable], axis=0)]
        labels[unassigned[reachable]] = picks


def render_mask(sp: SuperpixelMap, labels) -> LabelMask:
    """Paint per-superpixel labels onto the pixel grid."""
    labels = np.asarray(labels)
    if labels.shape != (sp.count,):
        raise ValueError(f"expected {sp.count} superpixel labels, got shape {labels.shape}")
    return LabelMask(labels=labels[sp.labels])


def majority_vote(masks: list[LabelMask]) -> LabelMask:
    """Per-pixel plurality over equally sized masks; ties go to the
    smaller class id."""
    if not masks:
        raise ValueError("need at least one mask to vote over")
    shape = masks[0].labels.shape
    for m in masks[1:]:
        if m.labels.shape != shape:
            raise ValueError(f"mask shape mismatch: {m.labels.shape} vs {shape}")
    stacked = np.stack([m.labels for m in masks]).astype(np.int64)
    classes = np.unique(stacked)
    counts = np.stack([(stacked == c).sum(axis=0) for c in classes])
    winner = classes[np.argmax(counts, axis=0)]
    return LabelMask(labels=winner)


def vote_fraction(masks: list[LabelMask], winner: LabelMask) -> np.ndarray:
    """Fraction of masks agreeing with the winning label at each pixel."""
    stacked = np.stack([m.labels for m in masks]).astype(np.int64)
    return (stacked == winner.labels[None].astype(np.int64)).mean(axis=0)


@dataclass(frozen=True)
class SpaceArtifacts:
    """Scribble-independent products of one (color space, k) job."""

    space: ColorSpace
    params: FhParams
    superpixels: SuperpixelMap
    pairs: frozenset[tuple[int, int]]
    features: list
    affinities: dict[tuple[float, float], AffinityGraph]


@dataclass(frozen=True)
class JobResult:
    """One propagated map plus the intermediates diagnostics care about."""

    space: ColorSpace
    k: float
    sigma_fh: float
    sigma_c: float
    sigma_t: float
    mask: LabelMask
    superpixels: SuperpixelMap
    segments: list[ClassSegments]
    consistency: float


@dataclass(frozen=True)
class PipelineResult:
    """Voted mask, agreement fractions, and the surviving per-job maps."""

    mask: LabelMask
    votes: np.ndarray
    jobs: list[JobResult]
    sigma_fh: float
    failures: list[str]


def _sigma_candidates(cfg) -> list[tuple[float, float]]:
    cs = list(cfg.sigma_grid) if cfg.sigma_c == "best" else [float(cfg.sigma_c)]
    ts = list(cfg.sigma_grid) if cfg.sigma_t == "best" else [float(cfg.sigma_t)]
    return [(c, t) for c in cs for t in ts]


def precompute_artifacts(image, space: ColorSpace, params: FhParams, cfg) -> SpaceArtifacts:
    """Convert, smooth, segment, and build every candidate affinity graph."""
    channels = convert_color_space(image, space)
    smoothed = gaussian_smooth(channels, params.sigma_fh)
    sp = fh_segment(smoothed, replace(params, sigma_fh=0.0))
    pairs = adjacency(sp)
    feats = all_superpixel_features(smoothed, sp)
    affinities = {
        (sc, st): build_affinity(feats, pairs, sc, st)
        for sc, st in _sigma_candidates(cfg)
    }
    return SpaceArtifacts(
        space=space, params=params, superpixels=sp, pairs=pairs,
        features=feats, affinities=affinities,
    )


def _propagate_all_classes(graph: AffinityGraph, seed_sets: dict[int, frozenset[int]], solver: SolverConfig):
    segments = [
        propagate_class(graph, seeds, solver, class_id=cls)
        for cls, seeds in sorted(seed_sets.items())
    ]
    return segments, assign_labels(segments, graph)


def _grid_midpoint_rank(cfg):
    grid = sorted(set(cfg.sigma_grid))
    mid = grid[len(grid) // 2]

    def rank(pair):
        return (abs(pair[0] - mid) + abs(pair[1] - mid), pair)

    return rank


def propagate_on_artifacts(art: SpaceArtifacts, scr: ScribbleSet, cfg) -> JobResult:
    """Scribble-dependent half of one job: seeds, extraction, labeling.

    When several sigma candidates exist, each is scored by the fraction of
    scribbled superpixels whose predicted label matches their scribble
    class, and the best-scoring pair wins (ties resolved toward the grid
    midpoint).
    """
    winners = scribbled_superpixel_classes(scr, art.superpixels)
    seed_sets = {cls: _seeds_from_winners(winners, cls) for cls in scr.classes_present}
    solver = cfg.solver_config()

    scored = []
    for pair in sorted(art.affinities):
        graph = art.affinities[pair]
        segments, labels = _propagate_all_classes(graph, seed_sets, solver)
        consistency = float(np.mean([labels[sp_id] == cls for sp_id, cls in winners.items()]))
        scored.append((pair, segments, labels, consistency))
    best_score = max(item[3] for item in scored)
    rank = _grid_midpoint_rank(cfg)
    pair, segments, labels, consistency = min(
        (item for item in scored if item[3] == best_score),
        key=lambda item: rank(item[0]),
    )
    return JobResult(
        space=art.space,
        k=art.params.k,
        sigma_fh=art.params.sigma_fh,
        sigma_c=pair[0],
        sigma_t=pair[1],
        mask=render_mask(art.superpixels, labels),
        superpixels=art.superpixels,
        segments=segments,
        consistency=consistency,
    )


def segment_single(image, scr: ScribbleSet, space: ColorSpace, params: FhParams, cfg) -> LabelMask:
    """One (color space, k) propagation, start to finish."""
    return propagate_on_artifacts(precompute_artifacts(image, space, params, cfg), scr, cfg).mask


def precompute_pipeline(image, cfg) -> dict[float, list[SpaceArtifacts]]:
    """Artifacts for every (sigma_fh, space, k) combination in the config."""
    out: dict[float, list[SpaceArtifacts]] = {}
    for sigma_fh in cfg.sigma_fh_candidates():
        specs = [
            (space, FhParams(k=float(k), sigma_fh=sigma_fh, min_size=cfg.min_size))
            for space in cfg.color_spaces
            for k in cfg.k_values
        ]
        with ThreadPoolExecutor(max_workers=max(1, cfg.jobs)) as pool:
            out[sigma_fh] = list(pool.map(
                lambda item: precompute_artifacts(image, item[0], item[1], cfg), specs
            ))
    return out


def _run_jobs(artifacts: list[SpaceArtifacts], scr: ScribbleSet, cfg):
    def run(art: SpaceArtifacts):
        try:
            return propagate_on_artifacts(art, scr, cfg)
        except ScribbleSegError as exc:
            return f"{art.space.value}/k={art.params.k:g}: {exc}"

    with ThreadPoolExecutor(max_workers=max(1, cfg.jobs)) as pool:
        outcomes = list(pool.map(run, artifacts))
    jobs = [o for o in outcomes if isinstance(o, JobResult)]
    failures = [o for o in outcomes if isinstance(o, str)]
    for failure in failures:
        log.warning("propagation job failed and was dropped from the vote: %s", failure)
    return jobs, failures


def _vote_jobs(jobs: list[JobResult], cfg) -> LabelMask:
    if getattr(cfg, "two_stage_vote", False):
        by_space: dict[ColorSpace, list[LabelMask]] = {}
        for job in jobs:
            by_space.setdefault(job.space, []).append(job.mask)
        return majority_vote([majority_vote(masks) for _, masks in sorted(
            by_space.items(), key=lambda item: item[0].value)])
    return majority_vote([j.mask for j in jobs])


def propagate_pipeline(artifacts: dict[float, list[SpaceArtifacts]], scr: ScribbleSet, cfg) -> PipelineResult:
    """Scribble-dependent stages over precomputed artifacts, with the
    per-image sigma_fh selection when several candidates are configured."""
    best: PipelineResult | None = None
    best_score = -1.0
    for sigma_fh in sorted(artifacts):
        jobs, failures = _run_jobs(artifacts[sigma_fh], scr, cfg)
        if not jobs:
            continue
        masks = [j.mask for j in jobs]
        voted = _vote_jobs(jobs, cfg)
        result = PipelineResult(
            mask=voted,
            votes=vote_fraction(masks, voted),
            jobs=jobs,
            sigma_fh=sigma_fh,
            failures=failures,
        )
        marked = scr.strokes != UNLABELED
        score = float((voted.labels[marked] == scr.strokes[marked]).mean())
        if score > best_score:
            best, best_score = result, score
    if best is None:
        raise ScribbleSegError("every propagation job failed; no masks to vote over")
    return best


def run_pipeline(image, scr: ScribbleSet, cfg) -> PipelineResult:
    """Full pipeline with diagnostics: precompute, propagate, vote."""
    return propagate_pipeline(precompute_pipeline(image, cfg), scr, cfg)


def full_pipeline(image, scr: ScribbleSet, cfg) -> LabelMask:
    """Main entry point: scribbles in, dense mask out."""
    return run_pipeline(image, scr, cfg).mask
