"""Text localization in video frames from combined wavelet and shearlet
coefficients, with detection, separation diagnostics and evaluation tools."""

__version__ = "0.1.0"

from .evaluate import (
    EvalPair,
    best_match,
    block_rates,
    evaluate_pairs,
    fmeasure,
    match_score,
    precision,
    recall,
)
from .frames import (
    Rect,
    load_frame,
    pseudo_color,
    read_rects,
    resize_to_working,
    to_grayscale,
    write_annotated,
    write_rects,
)
from .haar import WaveletPyramid, dwt2_haar, idwt2_haar
from .pipeline import FrameDetection, PipelineConfig, detect_frame, run_detect, run_separate
from .refine import RefineConfig, close_3x3, extract_components, to_boxes, tpr_filter
from .separation import (
    SeparationConfig,
    SeparationResult,
    combined_map,
    separate,
    soft_threshold,
    weight_shearlet_bands,
    weight_wavelet_bands,
)
from .shearlets import (
    ShearletSystem,
    build_shearlet_system,
    shearlet_analyze,
    shearlet_synthesize,
)
from .textmap import FeatureMap, kmeans2, sd_map, select_text_cluster

__all__ = [
    "EvalPair",
    "FeatureMap",
    "FrameDetection",
    "PipelineConfig",
    "Rect",
    "RefineConfig",
    "SeparationConfig",
    "SeparationResult",
    "ShearletSystem",
    "WaveletPyramid",
    "best_match",
    "block_rates",
    "build_shearlet_system",
    "close_3x3",
    "combined_map",
    "detect_frame",
    "dwt2_haar",
    "evaluate_pairs",
    "extract_components",
    "fmeasure",
    "idwt2_haar",
    "kmeans2",
    "load_frame",
    "match_score",
    "precision",
    "pseudo_color",
    "read_rects",
    "recall",
    "resize_to_working",
    "run_detect",
    "run_separate",
    "sd_map",
    "select_text_cluster",
    "separate",
    "shearlet_analyze",
    "shearlet_synthesize",
    "soft_threshold",
    "to_boxes",
    "to_grayscale",
    "tpr_filter",
    "weight_shearlet_bands",
    "weight_wavelet_bands",
    "write_annotated",
    "write_rects",
]
