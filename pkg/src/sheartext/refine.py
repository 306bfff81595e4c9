"""Boundary refinement: presence-ratio filtering, closing, grouping, boxes.

The clustered pixel mask is cleaned in four steps: a sliding-window text
presence ratio removes isolated false positives, a 3x3 morphological
closing bridges small gaps, 8-connected components are extracted, and
their bounding boxes are size-filtered, merged along text lines and
mapped back to original image coordinates.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .frames import Rect, scale_rect

EIGHT_CONNECTED = np.ones((3, 3), dtype=np.int64)


@dataclass
class RefineConfig:
    window: int = 7
    tpr_threshold: float = 0.5
    min_box: int = 8
    merge_overlap: float = 0.5  # of the shorter box's height
    merge_gap_factor: float = 1.0  # of the taller box's height

    def __post_init__(self):
        if self.window < 3 or self.window % 2 == 0:
            raise ValueError(f"window must be odd and >= 3, got {self.window}")
        if not 0.0 <= self.tpr_threshold <= 1.0:
            raise ValueError(f"tpr_threshold must be in [0, 1], got {self.tpr_threshold}")
        if self.min_box < 1:
            raise ValueError(f"min_box must be >= 1, got {self.min_box}")


@dataclass
class Region:
    """One 8-connected component: its pixels (row, col) and bounding box."""

    pixels: np.ndarray
    bbox: Rect

    @property
    def size(self):
        return len(self.pixels)


def window_counts(mask, window):
    """Per-pixel count of true cells in the centered window (zeros outside)."""
    mask = np.asarray(mask, dtype=bool)
    r = window // 2
    padded = np.pad(mask.astype(np.int64), r, mode="constant")
    integral = np.zeros((padded.shape[0] + 1, padded.shape[1] + 1), dtype=np.int64)
    integral[1:, 1:] = padded.cumsum(axis=0).cumsum(axis=1)
    h, w = mask.shape
    return (
        integral[window : window + h, window : window + w]
        - integral[window : window + h, 0:w]
        - integral[0:h, window : window + w]
        + integral[0:h, 0:w]
    )


def tpr_filter(mask, config=None):
    """Keep a pixel iff the text fraction of its window reaches the threshold."""
    if config is None:
        config = RefineConfig()
    counts = window_counts(mask, config.window)
    return counts >= config.tpr_threshold * config.window * config.window


def _shift_reduce(mask, combine, init):
    h, w = mask.shape
    padded = np.pad(mask, 1, mode="constant", constant_values=False)
    out = np.full((h, w), init, dtype=bool)
    for i in range(3):
        for j in range(3):
            out = combine(out, padded[i : i + h, j : j + w])
    return out


def dilate_3x3(mask):
    return _shift_reduce(np.asarray(mask, dtype=bool), np.logical_or, False)


def erode_3x3(mask):
    return _shift_reduce(np.asarray(mask, dtype=bool), np.logical_and, True)


def close_3x3(mask):
    """Binary closing with a full 3x3 element; outside the frame is non-text."""
    return erode_3x3(dilate_3x3(mask))


def extract_components(mask):
    """All maximal 8-connected text components, in raster order."""
    mask = np.asarray(mask, dtype=bool)
    labeled, count = ndimage.label(mask, structure=EIGHT_CONNECTED)
    regions = []
    for idx, sl in enumerate(ndimage.find_objects(labeled, max_label=count), start=1):
        pixels = np.argwhere(labeled == idx)
        bbox = Rect(
            x=int(sl[1].start),
            y=int(sl[0].start),
            w=int(sl[1].stop - sl[1].start),
            h=int(sl[0].stop - sl[0].start),
        )
        regions.append(Region(pixels=pixels, bbox=bbox))
    return regions


def _mergeable(a, b, config):
    overlap = min(a.y2, b.y2) - max(a.y, b.y)
    if overlap < config.merge_overlap * min(a.h, b.h):
        return False
    gap = max(a.x, b.x) - min(a.x2, b.x2)
    return gap <= config.merge_gap_factor * max(a.h, b.h)


def _union(a, b):
    x = min(a.x, b.x)
    y = min(a.y, b.y)
    return Rect(x, y, max(a.x2, b.x2) - x, max(a.y2, b.y2) - y)


def merge_boxes(boxes, config):
    """Merge same-line boxes (enough vertical overlap, small horizontal gap)
    until no pair qualifies."""
    boxes = list(boxes)
    merged = True
    while merged:
        merged = False
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                if _mergeable(boxes[i], boxes[j], config):
                    boxes[i] = _union(boxes[i], boxes[j])
                    del boxes[j]
                    merged = True
                    break
            if merged:
                break
    return boxes


def to_boxes(regions, config, original_shape, working_size):
    """Size-filter regions, merge them into lines and rescale to the original.

    ``original_shape`` is the (height, width) of the frame before it was
    resampled onto the working grid.
    """
    kept = [
        r.bbox for r in regions if r.bbox.w >= config.min_box and r.bbox.h >= config.min_box
    ]
    merged = merge_boxes(kept, config)
    scaled = [scale_rect(b, working_size, original_shape) for b in merged]
    return sorted(scaled, key=lambda b: (b.y, b.x, b.w, b.h))
