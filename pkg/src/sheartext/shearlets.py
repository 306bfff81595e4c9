"""Band-limited cone-adapted shearlet filter bank with FFT-domain transforms.

The system is built directly on the discrete frequency grid from smooth
Meyer-type windows:

* a radial low-pass window plus one Laplacian-pyramid-style radial band
  per scale (dyadic rise points, the finest band plateaus out to the grid
  corners so the whole square is covered);
* per scale, angular windows in the slope variable of each frequency cone
  (horizontal cone |fx| >= |fy|, vertical cone |fy| > |fx|), shear-translated
  in integer steps.  Interior windows vanish at the cone boundary; the two
  boundary windows of each cone roll off smoothly a little past the seam,
  so no frequency is left uncovered and nothing is double-counted.

All windows are real and symmetric under frequency negation, so spatial
atoms are real.  After assembly every filter is divided pointwise by
sqrt(sum of squared filters), which makes the tight-frame identity

    sum_f |filter_f(xi)|^2 == 1   at every grid frequency xi

exact up to float rounding.  Analysis is undecimated circular FFT
convolution, one full-size coefficient plane per filter; synthesis is the
adjoint, and the round trip reproduces the input by the identity above.

The shear range grows with scale: scale j uses k in [-K_j, K_j] with
K_j = 2**ceil(j/2), giving 2*(2*K_j + 1) directional filters per scale
over the two cones (45 filters in total for the default four scales,
low-pass included).
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

DEFAULT_SCALES = 4

_FAR = 1e30  # slope placeholder where the cone denominator is zero


class FilterKey(NamedTuple):
    """Identity of one filter: ('scaling', -1, '', 0) or ('band', j, cone, k)."""

    kind: str
    scale: int
    cone: str
    shear: int


def shear_range(scale):
    """Maximum |shear| at a scale: doubles every second scale."""
    return 2 ** math.ceil(scale / 2)


def meyer_ramp(x):
    """Meyer auxiliary polynomial on [0, 1]: smooth 0 -> 1 with flat ends."""
    x = np.clip(x, 0.0, 1.0)
    return x**4 * (35.0 - 84.0 * x + 70.0 * x**2 - 20.0 * x**3)


def _rise(t, lo, hi):
    """Smooth step from 0 (t <= lo) to 1 (t >= hi); sin/cos pair keeps
    sum-of-squares partitions exact."""
    return np.sin(0.5 * np.pi * meyer_ramp((t - lo) / (hi - lo)))


def _angular_bump(x):
    """Even Meyer bump on [-1, 1] with bump(0) = 1 and
    bump(x)^2 + bump(x - 1)^2 = 1 on [0, 1]."""
    ax = np.abs(x)
    out = np.cos(0.5 * np.pi * meyer_ramp(ax))
    return np.where(ax < 1.0, out, 0.0)


@dataclass
class ShearletSystem:
    """Precomputed frequency-domain filter bank for one grid size.

    ``filters`` is an (n_filters, size, size) float64 stack in FFT layout
    (DC at [0, 0]); ``keys[i]`` names filter i.  ``band_rise[j]`` is the
    radial point (Nyquist units) below which every scale-j filter is
    identically zero.
    """

    size: int
    scales: int
    filters: np.ndarray
    keys: list
    band_rise: list

    @property
    def n_filters(self):
        return self.filters.shape[0]

    def radial_grid(self):
        """|xi| / Nyquist for every FFT grid point."""
        f = np.fft.fftfreq(self.size, d=1.0 / self.size)
        fy = f[:, None]
        fx = f[None, :]
        return np.hypot(fx, fy) / (self.size / 2.0)

    def frame_sum(self):
        return np.sum(self.filters**2, axis=0)


def build_shearlet_system(size, scales=DEFAULT_SCALES):
    """Construct the normalized filter bank for a size x size grid."""
    if size < 4 or size & (size - 1):
        raise ValueError(f"grid side must be a power of two >= 4, got {size}")
    if scales < 1:
        raise ValueError(f"scales must be >= 1, got {scales}")
    if 2 ** (scales + 1) > size:
        raise ValueError(f"{scales} scales is too deep for a {size} grid")

    f = np.fft.fftfreq(size, d=1.0 / size)
    fy = f[:, None]
    fx = f[None, :]
    t = np.hypot(fx, fy) / (size / 2.0)

    # slope inside each cone; _FAR where the denominator vanishes so the
    # angular bump evaluates to zero there
    with np.errstate(divide="ignore", invalid="ignore"):
        slope_h = np.where(fx != 0.0, fy / fx, _FAR)
        slope_v = np.where(fy != 0.0, fx / fy, _FAR)

    # radial rise points c_j = 2**(j - scales + 1), c_{-1} = 2**-scales;
    # band j lives on [c_{j-1}, c_{j+1}], the finest band plateaus past 1
    c = [2.0 ** (j - scales + 1) for j in range(-1, scales)]
    steps = [_rise(t, c[j], c[j + 1]) for j in range(scales)]

    filters = [np.sqrt(np.maximum(1.0 - steps[0] ** 2, 0.0))]
    keys = [FilterKey("scaling", -1, "", 0)]

    for j in range(scales):
        if j + 1 < scales:
            band = np.sqrt(np.maximum(steps[j] ** 2 - steps[j + 1] ** 2, 0.0))
        else:
            band = steps[j]
        kmax = shear_range(j)
        for cone, slope in (("h", slope_h), ("v", slope_v)):
            for k in range(-kmax, kmax + 1):
                filters.append(band * _angular_bump(kmax * slope - k))
                keys.append(FilterKey("band", j, cone, k))

    stack = np.stack(filters)
    # Average each filter with its frequency-negated copy: on an even grid
    # the Nyquist row/column has no signed counterpart, which would leave
    # the windows slightly asymmetric and leak energy into the imaginary
    # part of the analysis planes.
    neg = (-np.arange(size)) % size
    stack = 0.5 * (stack + stack[:, neg[:, None], neg[None, :]])
    norm = np.sqrt(np.sum(stack**2, axis=0))
    stack /= norm
    return ShearletSystem(
        size=size,
        scales=scales,
        filters=stack,
        keys=keys,
        band_rise=c[:scales],
    )


def shearlet_analyze(img, system):
    """Undecimated coefficients: one real plane per filter (FFT convolution).

    Filters are real and even, so the planes are exactly real; the real
    FFT pair is used for speed.
    """
    img = np.asarray(img, dtype=np.float64)
    if img.shape != (system.size, system.size):
        raise ValueError(f"image shape {img.shape} does not match system size {system.size}")
    n = system.size
    half = system.filters[..., : n // 2 + 1]
    spectrum = np.fft.rfft2(img)
    return np.fft.irfft2(spectrum[None, :, :] * half, s=(n, n), axes=(-2, -1))


def shearlet_synthesize(coeffs, system):
    """Adjoint of analysis; inverts it exactly through the tight frame."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.shape != system.filters.shape:
        raise ValueError(
            f"coefficient shape {coeffs.shape} does not match system {system.filters.shape}"
        )
    n = system.size
    half = system.filters[..., : n // 2 + 1]
    spectra = np.fft.rfft2(coeffs, axes=(-2, -1))
    total = np.sum(spectra * half, axis=0)
    return np.fft.irfft2(total, s=(n, n))


def scale_slices(system):
    """Filter index ranges per scale (directional filters only)."""
    firsts = {}
    lasts = {}
    for i, key in enumerate(system.keys):
        if key.kind != "band":
            continue
        firsts.setdefault(key.scale, i)
        lasts[key.scale] = i
    return {j: slice(firsts[j], lasts[j] + 1) for j in firsts}


def filter_filename(key):
    """Dump filename for one filter's coefficient plane."""
    if key.kind == "scaling":
        return "shear_scaling.png"
    return f"shear_j{key.scale}_c{key.cone}_k{key.shear}.png"
