"""Iterative wavelet/shearlet separation of point-like and curve-like content.

Each pass analyzes the current residual with both dictionaries, soft
thresholds the coefficients, re-weights the four detail scales (the
wavelet approximation and the shearlet low-pass are dropped outright),
synthesizes one image per dictionary and subtracts their sum from the
residual.  The threshold falls linearly from ``lambda_max`` on the first
pass to ``lambda_min`` on the last, so early passes pick up only the
strongest structure and later passes sweep up the rest.

Both dictionaries are tight frames, so each pass damps the two weighted
reconstructions by the dictionary count before subtracting; without that
the update is expansive wherever the band weight exceeds 1/2 and the
residual can grow instead of shrink.

Accumulated wavelet reconstructions form the point-like part, shearlet
reconstructions the curve-like part; whatever neither dictionary claimed
stays in the residual, and the three add back to the input exactly.
"""

from dataclasses import dataclass

import numpy as np

from .haar import DEFAULT_LEVELS, WaveletPyramid, dwt2_haar, idwt2_haar
from .shearlets import (
    ShearletSystem,
    build_shearlet_system,
    scale_slices,
    shearlet_analyze,
    shearlet_synthesize,
)

DEFAULT_ITERATIONS = 5
DEFAULT_WEIGHTS = (0.1, 0.1, 1.5, 1.5)
LAMBDA_MAX_FRACTION = 0.9


@dataclass
class SeparationConfig:
    """Loop parameters; ``lambda_max=None`` derives the start threshold from
    the input as 0.9x the largest detail-coefficient magnitude."""

    iterations: int = DEFAULT_ITERATIONS
    subband_weights: tuple = DEFAULT_WEIGHTS
    lambda_max: float | None = None
    lambda_min: float = 0.0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        self.subband_weights = tuple(float(w) for w in self.subband_weights)
        if any(w < 0 for w in self.subband_weights):
            raise ValueError(f"weights must be >= 0, got {self.subband_weights}")
        if self.lambda_min < 0:
            raise ValueError(f"lambda_min must be >= 0, got {self.lambda_min}")
        if self.lambda_max is not None and self.lambda_max < self.lambda_min:
            raise ValueError(
                f"lambda_max ({self.lambda_max}) must be >= lambda_min ({self.lambda_min})"
            )


@dataclass
class SeparationResult:
    """Outputs of the loop; point + curve + residual re-add to the input.

    ``residual_norms`` records the L2 norm of the residual before the loop
    and after every pass, for convergence diagnostics.
    """

    point_part: np.ndarray
    curve_part: np.ndarray
    combined: np.ndarray
    residual: np.ndarray
    residual_norms: list = None


def soft_threshold(values, lam):
    """Elementwise sign(x) * max(|x| - lam, 0)."""
    if lam < 0:
        raise ValueError(f"threshold must be >= 0, got {lam}")
    if lam == 0.0:
        return np.asarray(values, dtype=np.float64).copy()
    values = np.asarray(values, dtype=np.float64)
    return np.sign(values) * np.maximum(np.abs(values) - lam, 0.0)


def weight_wavelet_bands(pyr, weights):
    """Scale each detail level by its low-to-high frequency weight.

    ``weights[0]`` hits the coarsest detail level, the last weight the
    finest; the approximation band is zeroed (it carries no text).
    """
    if len(weights) != pyr.levels:
        raise ValueError(f"expected {pyr.levels} weights, got {len(weights)}")
    details = [
        tuple(band * weights[pyr.levels - 1 - j] for band in bands)
        for j, bands in enumerate(pyr.details)
    ]
    return WaveletPyramid(levels=pyr.levels, approx=np.zeros_like(pyr.approx), details=details)


def weight_shearlet_bands(coeffs, system, weights):
    """Scale each shearlet scale by its weight; the low-pass plane is zeroed."""
    if len(weights) != system.scales:
        raise ValueError(f"expected {system.scales} weights, got {len(weights)}")
    out = np.array(coeffs, dtype=np.float64, copy=True)
    out[0] = 0.0
    for j, sl in scale_slices(system).items():
        out[sl] *= weights[j]
    return out


def threshold_schedule(lambda_max, lambda_min, iterations):
    """Linear ramp from lambda_max (first pass) to lambda_min (last pass)."""
    return np.linspace(lambda_max, lambda_min, iterations)


def _max_detail_magnitude(pyr, shearlet_coeffs):
    mags = [np.abs(band).max() for bands in pyr.details for band in bands]
    mags.append(np.abs(shearlet_coeffs[1:]).max())
    return max(mags)


def separate(img, config=None, system=None):
    """Run the separation loop on a square working-grid image."""
    img = np.asarray(img, dtype=np.float64)
    if config is None:
        config = SeparationConfig()
    if img.ndim != 2 or img.shape[0] != img.shape[1]:
        raise ValueError(f"expected a square image, got shape {img.shape}")
    if system is None:
        system = build_shearlet_system(img.shape[0], scales=len(config.subband_weights))
    if img.shape != (system.size, system.size):
        raise ValueError(f"image shape {img.shape} does not match system size {system.size}")

    levels = DEFAULT_LEVELS
    weights = config.subband_weights

    residual = img.copy()
    point = np.zeros_like(img)
    curve = np.zeros_like(img)

    pyr = dwt2_haar(residual, levels)
    shear = shearlet_analyze(residual, system)

    lam_max = config.lambda_max
    if lam_max is None:
        lam_max = LAMBDA_MAX_FRACTION * _max_detail_magnitude(pyr, shear)
        lam_max = max(lam_max, config.lambda_min)
    lambdas = threshold_schedule(lam_max, config.lambda_min, config.iterations)
    norms = [float(np.linalg.norm(residual))]

    for step, lam in enumerate(lambdas):
        if step > 0:
            pyr = dwt2_haar(residual, levels)
            shear = shearlet_analyze(residual, system)

        pyr_t = WaveletPyramid(
            levels=pyr.levels,
            approx=soft_threshold(pyr.approx, lam),
            details=[tuple(soft_threshold(b, lam) for b in bands) for bands in pyr.details],
        )
        shear_t = soft_threshold(shear, lam)

        # averaging over the two dictionaries keeps the update contractive
        w_part = idwt2_haar(weight_wavelet_bands(pyr_t, weights)) / 2.0
        s_part = shearlet_synthesize(weight_shearlet_bands(shear_t, system, weights), system) / 2.0

        point += w_part
        curve += s_part
        residual -= w_part + s_part
        norms.append(float(np.linalg.norm(residual)))

    return SeparationResult(
        point_part=point,
        curve_part=curve,
        combined=point + curve,
        residual=residual,
        residual_norms=norms,
    )


def combined_map(result):
    """Magnitude of the combined reconstruction, the per-pixel text feature."""
    return np.abs(result.combined)
