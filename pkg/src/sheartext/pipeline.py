"""End-to-end frame processing and the batch runner behind the CLI.

A frame runs through: decode -> gray -> working-grid resize -> iterative
separation -> SD features -> two-means pixel labeling -> presence-ratio
filter -> closing -> components -> line boxes in original coordinates.

Batch runs fan frames out to a process pool (results are gathered and
written in input order, so outputs are identical for any worker count)
and record a run manifest with per-stage timings.
"""

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from . import frames
from .frames import Rect, draw_boxes, load_frame, pseudo_color, resize_to_working, save_color, to_grayscale, write_rects
from .haar import dwt2_haar
from .refine import RefineConfig, close_3x3, extract_components, to_boxes, tpr_filter
from .separation import SeparationConfig, combined_map, separate
from .shearlets import build_shearlet_system, filter_filename, shearlet_analyze
from .textmap import FeatureMap, kmeans2, sd_map, select_text_cluster

TOOL_NAME = "sheartext"
TOOL_VERSION = "0.1.0"
THREADS_ENV = "SHEARTEXT_THREADS"

RASTER_EXTENSIONS = (".png", ".bmp", ".jpg", ".jpeg")


@dataclass
class PipelineConfig:
    """Every tunable of the pipeline; defaults match the reference parameter
    set (5 passes, weights 0.1/0.1/1.5/1.5, window 7, threshold 0.5,
    256-pixel working grid)."""

    working_size: int = frames.WORKING_SIZE
    iterations: int = 5
    subband_weights: tuple = (0.1, 0.1, 1.5, 1.5)
    lambda_max: float | None = None
    lambda_min: float = 0.0
    tpr_window: int = 7
    tpr_threshold: float = 0.5
    min_box: int = 8
    merge_overlap: float = 0.5
    merge_gap_factor: float = 1.0
    kmeans_sweeps: int = 100
    jobs: int = 1

    def separation(self):
        return SeparationConfig(
            iterations=self.iterations,
            subband_weights=self.subband_weights,
            lambda_max=self.lambda_max,
            lambda_min=self.lambda_min,
        )

    def refine(self):
        return RefineConfig(
            window=self.tpr_window,
            tpr_threshold=self.tpr_threshold,
            min_box=self.min_box,
            merge_overlap=self.merge_overlap,
            merge_gap_factor=self.merge_gap_factor,
        )

    def snapshot(self):
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = list(value) if isinstance(value, tuple) else value
        return out

    def effective_jobs(self):
        jobs = max(1, self.jobs)
        cap = os.environ.get(THREADS_ENV)
        if cap:
            jobs = min(jobs, max(1, int(cap)))
        return jobs


_BOOL_WORDS = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def parse_config_file(path):
    """Read a `key = value` file with `#` comments into a string mapping."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


def config_from_mapping(mapping, base=None):
    """Build a PipelineConfig from string values, checking names and types."""
    cfg = base or PipelineConfig()
    valid = {f.name: f for f in fields(PipelineConfig)}
    kwargs = cfg.snapshot()
    for key, value in mapping.items():
        if key not in valid:
            raise ValueError(f"unknown config key {key!r}")
        if value is None:
            continue
        if isinstance(value, str):
            if key == "subband_weights":
                value = tuple(float(p) for p in value.replace(",", " ").split())
            elif key == "lambda_max":
                value = None if value.lower() in ("", "auto", "none") else float(value)
            elif key in ("lambda_min", "tpr_threshold", "merge_overlap", "merge_gap_factor"):
                value = float(value)
            else:
                value = int(value)
        kwargs[key] = value
    kwargs["subband_weights"] = tuple(kwargs["subband_weights"])
    return PipelineConfig(**kwargs)


def load_pipeline_config(path=None, overrides=None):
    cfg = PipelineConfig()
    if path:
        cfg = config_from_mapping(parse_config_file(path), base=cfg)
    if overrides:
        cfg = config_from_mapping(overrides, base=cfg)
    # construct component configs now so bad values fail at startup
    cfg.separation()
    cfg.refine()
    return cfg


@dataclass
class FrameDetection:
    """Everything the detect path produces for one frame."""

    boxes: list
    cluster_mask: np.ndarray
    refined_mask: np.ndarray
    combined: np.ndarray
    timings_ms: dict = field(default_factory=dict)


class _StageClock:
    def __init__(self):
        self.timings = {}
        self._last = time.perf_counter()

    def lap(self, stage):
        now = time.perf_counter()
        self.timings[stage] = round((now - self._last) * 1000.0, 3)
        self._last = now


_SYSTEM_CACHE = {}


def _system_for(size, scales):
    key = (size, scales)
    if key not in _SYSTEM_CACHE:
        _SYSTEM_CACHE[key] = build_shearlet_system(size, scales)
    return _SYSTEM_CACHE[key]


def detect_frame(color_img, config=None, system=None):
    """Run the full detection pipeline on a decoded frame."""
    config = config or PipelineConfig()
    clock = _StageClock()

    gray = resize_to_working(to_grayscale(color_img), config.working_size)
    clock.lap("prepare")

    if system is None:
        system = _system_for(config.working_size, len(config.subband_weights))
    result = separate(gray, config.separation(), system)
    magnitudes = combined_map(result)
    clock.lap("separate")

    features = FeatureMap(sigma=sd_map(magnitudes), combined=magnitudes)
    clock.lap("features")

    labels = kmeans2(features, max_sweeps=config.kmeans_sweeps)
    cluster_mask = select_text_cluster(labels, features.combined)
    clock.lap("cluster")

    refine_cfg = config.refine()
    refined = close_3x3(tpr_filter(cluster_mask, refine_cfg))
    regions = extract_components(refined)
    boxes = to_boxes(regions, refine_cfg, color_img.shape[:2], config.working_size)
    clock.lap("refine")

    return FrameDetection(
        boxes=boxes,
        cluster_mask=cluster_mask,
        refined_mask=refined,
        combined=result.combined,
        timings_ms=clock.timings,
    )


def mask_to_image(mask):
    """Render a text mask the conventional way: text black on white."""
    out = np.where(np.asarray(mask, dtype=bool)[..., None], 0, 255).astype(np.uint8)
    return np.repeat(out, 3, axis=2)


def _detect_worker(args):
    path, config = args
    clock = _StageClock()
    try:
        color = load_frame(path)
        clock.lap("load")
        detection = detect_frame(color, config)
        timings = dict(clock.timings)
        timings.update(detection.timings_ms)
        return {
            "status": "ok",
            "input": path,
            "color": color,
            "detection": detection,
            "timings_ms": timings,
        }
    except Exception as exc:  # noqa: BLE001 - per-frame isolation is the contract
        return {"status": "error", "input": path, "error": f"{type(exc).__name__}: {exc}"}


def collect_inputs(inputs):
    """Expand files and directories into a sorted frame list."""
    paths = []
    for item in inputs:
        if os.path.isdir(item):
            for name in sorted(os.listdir(item)):
                if name.lower().endswith(RASTER_EXTENSIONS):
                    paths.append(os.path.join(item, name))
        else:
            paths.append(item)
    return paths


def _map_frames(paths, config):
    jobs = config.effective_jobs()
    work = [(p, config) for p in paths]
    if jobs == 1 or len(paths) <= 1:
        return [_detect_worker(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_detect_worker, work))


def run_detect(
    inputs,
    config=None,
    outdir=".",
    annotate=False,
    dump_cluster=False,
    dump_refined=False,
):
    """Process frames and write rect lists plus optional diagnostics.

    Returns the run manifest; entry order always follows input order.
    """
    config = config or PipelineConfig()
    paths = collect_inputs(inputs)
    os.makedirs(outdir, exist_ok=True)

    manifest = {
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "config": config.snapshot(),
        "frames": [],
    }
    for result in _map_frames(paths, config):
        entry = {"input": result["input"], "status": result["status"], "outputs": []}
        if result["status"] == "ok":
            stem = os.path.splitext(os.path.basename(result["input"]))[0]
            detection = result["detection"]
            clock = _StageClock()

            rect_path = os.path.join(outdir, f"{stem}.txt")
            write_rects(detection.boxes, rect_path)
            entry["outputs"].append(rect_path)
            if annotate:
                annotated_path = os.path.join(outdir, f"{stem}_boxes.png")
                save_color(draw_boxes(result["color"], detection.boxes), annotated_path)
                entry["outputs"].append(annotated_path)
            if dump_cluster:
                cluster_path = os.path.join(outdir, f"{stem}_cluster.png")
                save_color(mask_to_image(detection.cluster_mask), cluster_path)
                entry["outputs"].append(cluster_path)
            if dump_refined:
                refined_path = os.path.join(outdir, f"{stem}_refined.png")
                save_color(mask_to_image(detection.refined_mask), refined_path)
                entry["outputs"].append(refined_path)
            clock.lap("write")

            entry["timings_ms"] = dict(result["timings_ms"])
            entry["timings_ms"]["write"] = clock.timings["write"]
            entry["boxes"] = len(detection.boxes)
        else:
            entry["error"] = result["error"]
        manifest["frames"].append(entry)
    return manifest


SEPARATION_PANELS = ("points", "curves", "combined", "residual")
WAVELET_BAND_TAGS = ("H", "V", "D")


def dump_coefficient_planes(gray, system, outdir):
    """Pseudo-colored plane per transform filter, standard filenames.

    Shearlet planes are named shear_j{scale}_c{cone}_k{shear}.png, wavelet
    detail bands wave_l{level}_{H|V|D}.png (level 0 is the finest).
    """
    written = []
    planes = shearlet_analyze(gray, system)
    for key, plane in zip(system.keys, planes):
        out_path = os.path.join(outdir, filter_filename(key))
        save_color(pseudo_color(plane), out_path)
        written.append(out_path)
    pyr = dwt2_haar(gray)
    for level, bands in enumerate(pyr.details):
        for tag, band in zip(WAVELET_BAND_TAGS, bands):
            out_path = os.path.join(outdir, f"wave_l{level}_{tag}.png")
            save_color(pseudo_color(band), out_path)
            written.append(out_path)
    return written


def run_separate(path, config=None, outdir=".", dump_coefficients=False):
    """Write the four pseudo-colored separation panels for one frame."""
    config = config or PipelineConfig()
    os.makedirs(outdir, exist_ok=True)
    color = load_frame(path)
    gray = resize_to_working(to_grayscale(color), config.working_size)
    system = _system_for(config.working_size, len(config.subband_weights))
    result = separate(gray, config.separation(), system)

    stem = os.path.splitext(os.path.basename(path))[0]
    panels = {
        "points": result.point_part,
        "curves": result.curve_part,
        "combined": result.combined,
        "residual": result.residual,
    }
    written = []
    for name in SEPARATION_PANELS:
        out_path = os.path.join(outdir, f"{stem}_{name}.png")
        save_color(pseudo_color(panels[name]), out_path)
        written.append(out_path)
    if dump_coefficients:
        written.extend(dump_coefficient_planes(gray, system, outdir))
    return written


def stage_percentiles(manifest, quantiles=(0.1, 0.5, 0.9)):
    """Per-stage timing percentiles (ms) across the manifest's ok frames."""
    series = {}
    for entry in manifest["frames"]:
        if entry["status"] != "ok":
            continue
        for stage, ms in entry["timings_ms"].items():
            series.setdefault(stage, []).append(ms)
    stats = {}
    for stage, values in series.items():
        qs = np.quantile(np.asarray(values, dtype=np.float64), quantiles)
        stats[stage] = tuple(float(q) for q in qs)
    return stats
