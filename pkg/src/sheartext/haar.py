"""Orthonormal separable 2D Haar decomposition and its exact inverse.

Analysis filters are (1/sqrt2)(1, 1) and (1/sqrt2)(1, -1) with decimation
by 2 per axis.  Because the filters have length two, one decomposition
level is just an orthogonal mixing of disjoint 2x2 blocks:

    a b     A = (a+b+c+d)/2   H = (a-b+c-d)/2
    c d     V = (a+b-c-d)/2   D = (a-b-c+d)/2

The transform is critically sampled and satisfies Parseval's equality;
reconstruction is exact up to float rounding.
"""

from dataclasses import dataclass, field

import numpy as np

DEFAULT_LEVELS = 4


@dataclass
class WaveletPyramid:
    """Multilevel Haar coefficients.

    ``details[j]`` holds the (H, V, D) sub-bands produced by decomposition
    step j, so ``details[0]`` is the finest level (size N/2) and
    ``details[levels-1]`` the coarsest; ``approx`` is the remaining
    low-pass at the coarsest scale.
    """

    levels: int
    approx: np.ndarray
    details: list = field(default_factory=list)

    @property
    def shape(self):
        n = self.details[0][0].shape[0] * 2
        return (n, n)


def _split(a):
    tl = a[0::2, 0::2]
    tr = a[0::2, 1::2]
    bl = a[1::2, 0::2]
    br = a[1::2, 1::2]
    approx = (tl + tr + bl + br) / 2.0
    h = (tl - tr + bl - br) / 2.0
    v = (tl + tr - bl - br) / 2.0
    d = (tl - tr - bl + br) / 2.0
    return approx, h, v, d


def _merge(approx, h, v, d):
    n = approx.shape[0] * 2
    out = np.empty((n, n), dtype=np.float64)
    out[0::2, 0::2] = (approx + h + v + d) / 2.0
    out[0::2, 1::2] = (approx - h + v - d) / 2.0
    out[1::2, 0::2] = (approx + h - v - d) / 2.0
    out[1::2, 1::2] = (approx - h - v + d) / 2.0
    return out


def dwt2_haar(img, levels=DEFAULT_LEVELS):
    """Decompose a square power-of-two image into a WaveletPyramid."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or img.shape[0] != img.shape[1]:
        raise ValueError(f"expected a square image, got shape {img.shape}")
    n = img.shape[0]
    if n < 2 or n & (n - 1):
        raise ValueError(f"image side must be a power of two, got {n}")
    if not 1 <= levels <= 8:
        raise ValueError(f"levels must be in [1, 8], got {levels}")
    if n >> levels < 1:
        raise ValueError(f"{levels} levels is too deep for a {n}x{n} image")

    details = []
    approx = img
    for _ in range(levels):
        approx, h, v, d = _split(approx)
        details.append((h, v, d))
    return WaveletPyramid(levels=levels, approx=approx, details=details)


def idwt2_haar(pyr):
    """Rebuild the image from a WaveletPyramid (perfect reconstruction)."""
    approx = np.asarray(pyr.approx, dtype=np.float64)
    for h, v, d in reversed(pyr.details):
        if h.shape != approx.shape:
            raise ValueError(
                f"detail band shape {h.shape} does not match approx shape {approx.shape}"
            )
        approx = _merge(approx, h, v, d)
    return approx


def map_detail_bands(pyr, fn):
    """Apply ``fn(band, level)`` to every detail sub-band; approx is kept."""
    details = [tuple(fn(band, j) for band in bands) for j, bands in enumerate(pyr.details)]
    return WaveletPyramid(levels=pyr.levels, approx=pyr.approx.copy(), details=details)
