"""Frame ingestion, gray conversion, resizing and the file formats of the toolkit.

Images are plain numpy arrays throughout: a color frame is an (H, W, 3)
uint8 array in RGB order, a gray frame is an (H, W) float64 array.  Gray
values start in [0, 255] but are not re-quantized after transforms.

Rectangles use original-image pixel coordinates.  The rect list file
format is one `x y w h` line per rectangle (non-negative integers,
space separated, `#` starts a comment line).
"""

import os
from typing import NamedTuple

import numpy as np
from PIL import Image, ImageDraw, UnidentifiedImageError

SUPPORTED_FORMATS = ("PNG", "BMP", "JPEG")

# ITU-R BT.601 luma weights, kept as exact integer numerators over 1000 so
# that gray pixels (v, v, v) map to v without rounding drift
_LUMA_NUM = (299.0, 587.0, 114.0)

WORKING_SIZE = 256


class DecodeError(Exception):
    """Raised when a raster file exists but cannot be decoded."""


class UnsupportedFormatError(Exception):
    """Raised when a raster file decodes to a format outside PNG/BMP/JPEG."""


class Rect(NamedTuple):
    """Axis-aligned rectangle: top-left corner plus extent, in pixels."""

    x: int
    y: int
    w: int
    h: int

    @property
    def x2(self):
        return self.x + self.w

    @property
    def y2(self):
        return self.y + self.h

    @property
    def area(self):
        return self.w * self.h


def load_frame(path):
    """Decode a PNG/BMP/JPEG file into an (H, W, 3) uint8 RGB array.

    Raises FileNotFoundError for a missing path, DecodeError for
    corrupt/undecodable data and UnsupportedFormatError for other
    raster formats.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    try:
        with Image.open(path) as im:
            fmt = im.format
            if fmt not in SUPPORTED_FORMATS:
                raise UnsupportedFormatError(f"{path}: {fmt} is not one of {SUPPORTED_FORMATS}")
            rgb = im.convert("RGB")
            arr = np.asarray(rgb, dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise DecodeError(f"{path}: unrecognized raster data") from exc
    except OSError as exc:
        raise DecodeError(f"{path}: {exc}") from exc
    return arr


def save_color(img, path):
    """Write an (H, W, 3) uint8 RGB array as PNG."""
    Image.fromarray(np.asarray(img, dtype=np.uint8), mode="RGB").save(path, format="PNG")


def to_grayscale(img):
    """Luminance of an RGB frame: Y = 0.299 R + 0.587 G + 0.114 B, float64."""
    img = np.asarray(img, dtype=np.float64)
    num = _LUMA_NUM[0] * img[..., 0] + _LUMA_NUM[1] * img[..., 1] + _LUMA_NUM[2] * img[..., 2]
    return num / 1000.0


def resize_bilinear(img, out_h, out_w):
    """Bilinear resample with half-pixel-center mapping and edge clamping.

    Each output pixel samples the input at
    ``src = (dst + 0.5) * (in_size / out_size) - 0.5`` and blends the four
    surrounding input pixels; coordinates are clamped to the image, so
    every output value is a convex combination of input values.
    """
    img = np.asarray(img, dtype=np.float64)
    in_h, in_w = img.shape

    def axis_coords(n_in, n_out):
        pos = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
        pos = np.clip(pos, 0.0, n_in - 1.0)
        lo = np.floor(pos).astype(np.intp)
        lo = np.minimum(lo, n_in - 2) if n_in > 1 else np.zeros_like(lo)
        frac = pos - lo
        return lo, frac

    ry, fy = axis_coords(in_h, out_h)
    rx, fx = axis_coords(in_w, out_w)
    fy = fy[:, None]
    fx = fx[None, :]
    tl = img[np.ix_(ry, rx)]
    tr = img[np.ix_(ry, rx + 1)] if in_w > 1 else tl
    bl = img[np.ix_(ry + 1, rx)] if in_h > 1 else tl
    br = img[np.ix_(ry + 1, rx + 1)] if in_h > 1 and in_w > 1 else tl
    top = tl * (1.0 - fx) + tr * fx
    bot = bl * (1.0 - fx) + br * fx
    return top * (1.0 - fy) + bot * fy


def resize_to_working(img, size=WORKING_SIZE):
    """Resize a gray frame to the square working grid (bilinear)."""
    img = np.asarray(img, dtype=np.float64)
    if img.shape == (size, size):
        return img.copy()
    return resize_bilinear(img, size, size)


def pseudo_color(values):
    """Render a coefficient map as a blue-to-red quantized RGB image.

    Values are min-max quantized into 256 bins; bin 0 maps to blue
    (0, 0, 255), bin 255 to red (255, 0, 0) with linear interpolation
    between.  A constant map has zero range and renders all blue.
    """
    values = np.asarray(values, dtype=np.float64)
    lo = float(values.min())
    hi = float(values.max())
    if hi > lo:
        bins = np.floor((values - lo) / (hi - lo) * 256.0).astype(np.int64)
        bins = np.clip(bins, 0, 255)
    else:
        bins = np.zeros(values.shape, dtype=np.int64)
    out = np.zeros(values.shape + (3,), dtype=np.uint8)
    out[..., 0] = bins
    out[..., 2] = 255 - bins
    return out


BOX_COLOR = (0, 255, 0)
BOX_THICKNESS = 2


def draw_boxes(img, boxes, color=BOX_COLOR, thickness=BOX_THICKNESS):
    """Overlay rectangle outlines (drawn just inside each rect, in order)."""
    out = np.array(img, dtype=np.uint8, copy=True)
    for r in boxes:
        band = min(thickness, r.w, r.h)
        out[r.y : r.y + band, r.x : r.x2] = color
        out[r.y2 - band : r.y2, r.x : r.x2] = color
        out[r.y : r.y2, r.x : r.x + band] = color
        out[r.y : r.y2, r.x2 - band : r.x2] = color
    return out


def write_annotated(img, boxes, path):
    """Write a PNG copy of the frame with box outlines overlaid."""
    save_color(draw_boxes(img, boxes), path)


def read_rects(path):
    """Parse a rect list file into a list of Rect."""
    rects = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"{path}:{lineno}: expected 'x y w h', got {line!r}")
            x, y, w, h = (int(p) for p in parts)
            if x < 0 or y < 0 or w <= 0 or h <= 0:
                raise ValueError(f"{path}:{lineno}: invalid rectangle {line!r}")
            rects.append(Rect(x, y, w, h))
    return rects


def write_rects(rects, path):
    """Write rectangles in the rect list file format."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in rects:
            fh.write(f"{r.x} {r.y} {r.w} {r.h}\n")


def scale_rect(r, from_size, to_shape):
    """Map a rect from the square working grid back to original image space.

    Uses floor/ceil so the scaled rect covers the same region, clamped to
    the original bounds.
    """
    orig_h, orig_w = to_shape
    sx = orig_w / from_size
    sy = orig_h / from_size
    x = int(np.floor(r.x * sx))
    y = int(np.floor(r.y * sy))
    x2 = int(np.ceil(r.x2 * sx))
    y2 = int(np.ceil(r.y2 * sy))
    x = max(0, min(x, orig_w - 1))
    y = max(0, min(y, orig_h - 1))
    x2 = max(x + 1, min(x2, orig_w))
    y2 = max(y + 1, min(y2, orig_h))
    return Rect(x, y, x2 - x, y2 - y)
