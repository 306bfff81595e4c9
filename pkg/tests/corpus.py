"""Synthetic fixtures shared across the test suite.

The frame corpus mimics broadcast stills: 256x256 frames with one to
three bold horizontal caption lines over gradient, smooth-field and
photographic backgrounds, plus the matching ground-truth line boxes.
"""

import numpy as np
from PIL import Image, ImageDraw, ImageFont

from sheartext.frames import Rect

CORPUS_SEED = 7
CORPUS_SIZE = 20
FRAME_SIDE = 256
FONT_SIZE = 22

CAPTIONS = [
    "BREAKING NEWS",
    "SPORTS REPORT",
    "LIVE UPDATE",
    "WORLD REPORT",
    "MARKET WATCH",
    "CHANNEL NINE",
    "WEATHER ALERT",
    "ELECTION NIGHT",
]

BRIGHT = (252, 252, 252)
DARK = (5, 5, 5)

_LINE_ROWS = (36, 108, 188)


def _photo_patch():
    from skimage import data

    return data.camera().astype(np.float64)


def _background(rng, kind):
    if kind == 0:
        yy, xx = np.mgrid[0:FRAME_SIDE, 0:FRAME_SIDE]
        a, b = rng.uniform(-1.0, 1.0, 2)
        g = a * xx + b * yy
        g = (g - g.min()) / (np.ptp(g) + 1e-9)
        lo, hi = sorted(rng.uniform(50.0, 180.0, 2))
        return lo + g * (hi - lo)
    if kind == 1:
        coarse = rng.uniform(50.0, 180.0, (8, 8)).astype(np.float32)
        im = Image.fromarray(coarse, mode="F").resize((FRAME_SIDE, FRAME_SIDE), Image.BILINEAR)
        return np.asarray(im, dtype=np.float64)
    photo = _photo_patch()
    y0 = int(rng.integers(0, photo.shape[0] - FRAME_SIDE))
    x0 = int(rng.integers(0, photo.shape[1] - FRAME_SIDE))
    crop = photo[y0 : y0 + FRAME_SIDE, x0 : x0 + FRAME_SIDE]
    # keep the photo's contrast below the caption contrast
    return 110.0 + (crop - crop.mean()) * 0.35


def caption_frame(rng, background_kind):
    """One synthetic frame: (H, W, 3) uint8 plus ground-truth Rects."""
    bg = _background(rng, background_kind)
    img = np.repeat(np.clip(bg, 0, 255)[:, :, None], 3, axis=2).astype(np.uint8)
    pil = Image.fromarray(img, "RGB")
    draw = ImageDraw.Draw(pil)
    font = ImageFont.load_default(size=FONT_SIZE)

    truths = []
    n_lines = 1 + int(rng.integers(0, 3))
    for y in rng.permutation(_LINE_ROWS)[:n_lines]:
        text = CAPTIONS[int(rng.integers(0, len(CAPTIONS)))]
        x = int(rng.integers(8, 50))
        bbox = draw.textbbox((x, int(y)), text, font=font, stroke_width=1)
        local = bg[max(0, bbox[1]) : bbox[3], max(0, bbox[0]) : bbox[2]]
        if local.max() <= 165.0:
            color = BRIGHT
        elif local.min() >= 90.0:
            color = DARK
        else:
            # mixed-brightness span: solid caption band, as broadcasters do
            draw.rectangle([bbox[0] - 3, bbox[1] - 3, bbox[2] + 3, bbox[3] + 3], fill=DARK)
            color = BRIGHT
        draw.text((x, int(y)), text, fill=color, font=font, stroke_width=1, stroke_fill=color)
        # annotator-style box: ink bounds with a small vertical margin
        truths.append(Rect(bbox[0], bbox[1] - 2, bbox[2] - bbox[0], bbox[3] - bbox[1] + 4))
    return np.asarray(pil), truths


def caption_corpus(n_frames=CORPUS_SIZE, seed=CORPUS_SEED):
    """The standard evaluation corpus: list of (frame, truth rects)."""
    rng = np.random.default_rng(seed)
    return [caption_frame(rng, i % 3) for i in range(n_frames)]


def dots_image(n_dots=40, seed=42):
    """Isolated bright pixels on black: the point-like extreme."""
    rng = np.random.default_rng(seed)
    img = np.zeros((FRAME_SIDE, FRAME_SIDE))
    idx = rng.integers(20, FRAME_SIDE - 20, size=(n_dots, 2))
    img[idx[:, 0], idx[:, 1]] = 255.0
    return img


def curve_image():
    """A smooth bright sine stroke on black: the curve-like extreme."""
    rows = np.arange(FRAME_SIDE)[:, None]
    centers = 128.0 + 60.0 * np.sin(np.arange(FRAME_SIDE) / FRAME_SIDE * 2.0 * np.pi)
    return 255.0 * np.exp(-((rows - centers[None, :]) ** 2) / (2.0 * 1.5**2))


def gradient_frame(value_low=60.0, value_high=190.0):
    """Plain gradient with one bright block, a minimal text-like frame."""
    img = np.outer(np.linspace(value_low, value_high, FRAME_SIDE), np.ones(FRAME_SIDE))
    img[100:116, 40:200] = 240.0
    return img
