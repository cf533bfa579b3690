"""Batch command-line interface.

Exit codes: 0 on success, 1 for input problems (files, formats, config),
2 for solver or diagnostic failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from . import io as sio
from .config import PipelineConfig, load_config, parse_config, save_config
from .errors import InputError, ScribbleSegError
from .features import ColorSpace
from .metrics import ConfusionMatrix, accumulate, format_report
from .propagation import majority_vote, precompute_pipeline, propagate_pipeline
from .superpixels import FhParams, fh_segment

_CONFIG_FLAGS = [
    "color_spaces", "k_values", "sigma_fh", "sigma_c", "sigma_t", "sigma_grid",
    "min_size", "n_classes", "ignore_label", "tolerance", "max_iterations",
    "alpha_margin", "jobs", "two_stage_vote",
]


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="flat key-value config file")
    group = parser.add_argument_group("config overrides (same keys as the config file)")
    for key in _CONFIG_FLAGS:
        group.add_argument(f"--{key.replace('_', '-')}", dest=f"cfg_{key}", metavar="V")


def _resolve_config(args: argparse.Namespace) -> PipelineConfig:
    cfg = PipelineConfig()
    if args.config is not None:
        cfg = load_config(args.config, cfg)
    overrides = [
        f"{key} = {getattr(args, f'cfg_{key}')}"
        for key in _CONFIG_FLAGS
        if getattr(args, f"cfg_{key}", None) is not None
    ]
    if overrides:
        cfg = parse_config("\n".join(overrides), cfg)
    return cfg


def _cmd_superpixels(args) -> int:
    image = sio.load_image(args.image)
    from .features import convert_color_space

    channels = convert_color_space(image, ColorSpace.parse(args.space))
    sp = fh_segment(channels, FhParams(k=args.k, sigma_fh=args.sigma_fh, min_size=args.min_size))
    Image.fromarray(sp.labels.astype(np.uint16)).save(args.out, format="PNG")
    print(f"{sp.count} superpixels -> {args.out}")
    return 0


def _write_diagnostics(diag_dir: Path, result) -> None:
    diag_dir.mkdir(parents=True, exist_ok=True)
    chosen = []
    for job in result.jobs:
        stem = f"{job.space.value}_k{job.k:g}"
        sio.save_mask(job.mask, diag_dir / f"{stem}.png")
        for seg in job.segments:
            raster = seg.confidence[job.superpixels.labels]
            scaled = np.clip(np.round(raster * 255.0), 0, 255).astype(np.uint8)
            Image.fromarray(scaled, mode="L").save(diag_dir / f"{stem}_class{seg.class_id}_conf.png")
        chosen.append({
            "space": job.space.value, "k": job.k, "sigma_fh": job.sigma_fh,
            "sigma_c": job.sigma_c, "sigma_t": job.sigma_t,
            "scribble_consistency": job.consistency,
        })
    votes = np.clip(np.round(result.votes * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(votes, mode="L").save(diag_dir / "vote_fraction.png")
    summary = {"sigma_fh": result.sigma_fh, "jobs": chosen, "failures": result.failures}
    (diag_dir / "jobs.json").write_text(json.dumps(summary, indent=2))


def _cmd_propagate(args) -> int:
    cfg = _resolve_config(args)
    image = sio.load_image(args.image)
    scribbles = sio.load_scribbles(args.scribbles, cfg.n_classes, shape=image.shape[:2])
    result = propagate_pipeline(precompute_pipeline(image, cfg), scribbles, cfg)
    sio.save_mask(result.mask, args.out)
    if args.diag is not None:
        _write_diagnostics(args.diag, result)
    dropped = f", {len(result.failures)} job(s) dropped" if result.failures else ""
    print(f"mask -> {args.out} ({len(result.jobs)} maps voted{dropped})")
    return 0


def _cmd_vote(args) -> int:
    masks = [sio.load_mask(p) for p in args.masks]
    try:
        voted = majority_vote(masks)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    sio.save_mask(voted, args.out)
    print(f"voted mask over {len(masks)} inputs -> {args.out}")
    return 0


def _cmd_eval(args) -> int:
    pred_dir, gt_dir = Path(args.pred), Path(args.gt)
    if not pred_dir.is_dir() or not gt_dir.is_dir():
        raise InputError("--pred and --gt must be directories")
    names = sorted(p.name for p in pred_dir.glob("*.png"))
    if not names:
        raise InputError(f"no .png predictions found in {pred_dir}")
    total = ConfusionMatrix.zeros(args.classes)
    for name in names:
        gt_path = gt_dir / name
        if not gt_path.exists():
            raise InputError(f"missing ground truth for {name}")
        pred = sio.load_mask(pred_dir / name)
        gt = sio.load_mask(gt_path)
        try:
            total = total + accumulate(pred, gt, args.classes, args.ignore)
        except ValueError as exc:
            raise InputError(f"{name}: {exc}") from exc
    print(f"evaluated {len(names)} image(s)")
    print(format_report(total))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    cfg = _resolve_config(args)
    uvicorn.run(create_app(cfg), host=args.host, port=args.port, log_level="info")
    return 0


def _cmd_demo(args) -> int:
    from .synthetic import three_region_image, three_region_strokes

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    image, gt, scribbles = three_region_image(size=args.size, seed=args.seed)
    sio.save_image(image, out / "image.png")
    sio.save_mask(gt, out / "gt.png")
    sio.save_scribbles_png(scribbles, out / "scribbles.png")
    strokes = three_region_strokes(args.size)
    (out / "scribbles.json").write_text(json.dumps(
        {"width": args.size, "height": args.size, "strokes": strokes}, indent=2))
    save_config(PipelineConfig(n_classes=3), out / "demo.cfg")
    print(f"demo fixture -> {out} (image.png, gt.png, scribbles.png, scribbles.json, demo.cfg)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scribbleseg",
        description="Scribble-driven segmentation via constrained dominant sets",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log debug detail")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("superpixels", help="segment one image into superpixels")
    p.add_argument("--image", type=Path, required=True)
    p.add_argument("--space", default="intensity")
    p.add_argument("--k", type=float, default=300.0)
    p.add_argument("--sigma-fh", type=float, default=0.8)
    p.add_argument("--min-size", type=int, default=20)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=_cmd_superpixels)

    p = sub.add_parser("propagate", help="propagate scribbles into a dense mask")
    p.add_argument("--image", type=Path, required=True)
    p.add_argument("--scribbles", type=Path, required=True, help="label PNG or stroke JSON")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--diag", type=Path, help="directory for per-job masks and confidences")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_propagate)

    p = sub.add_parser("vote", help="majority-vote over mask files")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("masks", nargs="+", type=Path)
    p.set_defaults(func=_cmd_vote)

    p = sub.add_parser("eval", help="evaluate predictions against ground truth")
    p.add_argument("--pred", required=True, help="directory of predicted masks")
    p.add_argument("--gt", required=True, help="directory of ground-truth masks")
    p.add_argument("--classes", type=int, default=21)
    p.add_argument("--ignore", type=int, default=255)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("serve", help="run the interactive HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8008)
    _add_config_flags(p)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("demo", help="generate the synthetic demo fixture")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--size", type=int, default=96)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ScribbleSegError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
