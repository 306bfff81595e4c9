import numpy as np
import pytest

from corpus import curve_image, dots_image, gradient_frame
from sheartext.haar import dwt2_haar
from sheartext.separation import (
    SeparationConfig,
    combined_map,
    separate,
    soft_threshold,
    threshold_schedule,
    weight_shearlet_bands,
    weight_wavelet_bands,
)
from sheartext.shearlets import scale_slices, shearlet_analyze


class TestSoftThreshold:
    def test_positive_above_threshold(self):
        assert soft_threshold(np.array([3.0]), 1.0)[0] == 2.0

    def test_dead_zone(self):
        assert soft_threshold(np.array([-0.5]), 1.0)[0] == 0.0

    def test_zero_threshold_is_identity(self, rng):
        x = rng.normal(size=(16, 16))
        assert np.array_equal(soft_threshold(x, 0.0), x)

    def test_negative_values_shrink_toward_zero(self):
        out = soft_threshold(np.array([-3.0, -1.0, 2.0]), 1.5)
        assert out.tolist() == [-1.5, 0.0, 0.5]

    def test_rejects_negative_threshold(self):
        with pytest.raises(ValueError):
            soft_threshold(np.array([1.0]), -0.1)


class TestWeighting:
    def test_unit_weights_keep_details(self, rng):
        pyr = dwt2_haar(rng.normal(size=(64, 64)), 4)
        out = weight_wavelet_bands(pyr, (1.0, 1.0, 1.0, 1.0))
        for got, want in zip(out.details, pyr.details):
            for g, w in zip(got, want):
                assert np.array_equal(g, w)
        assert np.abs(out.approx).max() == 0.0  # low-pass is always dropped

    def test_zero_weights_zero_details(self, rng):
        pyr = dwt2_haar(rng.normal(size=(64, 64)), 4)
        out = weight_wavelet_bands(pyr, (0.0, 0.0, 0.0, 0.0))
        assert all(np.abs(g).max() == 0.0 for bands in out.details for g in bands)

    def test_finest_wavelet_scale_gets_last_weight(self):
        pyr = dwt2_haar(np.zeros((64, 64)), 4)
        pyr.details[0][0][1, 1] = 1.0  # details[0] is the finest level
        out = weight_wavelet_bands(pyr, (0.1, 0.1, 1.5, 1.5))
        assert out.details[0][0][1, 1] == pytest.approx(1.5)

    def test_coarsest_wavelet_scale_gets_first_weight(self):
        pyr = dwt2_haar(np.zeros((64, 64)), 4)
        pyr.details[3][2][0, 0] = 1.0
        out = weight_wavelet_bands(pyr, (0.1, 0.2, 1.5, 1.5))
        assert out.details[3][2][0, 0] == pytest.approx(0.1)

    def test_weight_count_mismatch(self, rng):
        pyr = dwt2_haar(rng.normal(size=(64, 64)), 4)
        with pytest.raises(ValueError):
            weight_wavelet_bands(pyr, (1.0, 1.0))

    def test_shearlet_weights_by_scale(self, system64):
        coeffs = np.ones(system64.filters.shape)
        out = weight_shearlet_bands(coeffs, system64, (0.1, 0.2, 0.3, 1.5))
        assert np.abs(out[0]).max() == 0.0  # scaling plane dropped
        slices = scale_slices(system64)
        for j, weight in enumerate((0.1, 0.2, 0.3, 1.5)):
            assert np.allclose(out[slices[j]], weight)

    def test_shearlet_weight_count_mismatch(self, system64):
        with pytest.raises(ValueError):
            weight_shearlet_bands(np.ones(system64.filters.shape), system64, (1.0,))


class TestSchedule:
    def test_linear_ramp(self):
        assert threshold_schedule(8.0, 0.0, 5).tolist() == [8.0, 6.0, 4.0, 2.0, 0.0]

    def test_single_iteration_uses_lambda_max(self):
        assert threshold_schedule(8.0, 0.0, 1).tolist() == [8.0]


class TestSeparate:
    def test_zero_image(self, system256):
        res = separate(np.zeros((256, 256)), SeparationConfig(), system256)
        for plane in (res.point_part, res.curve_part, res.combined, res.residual):
            assert np.abs(plane).max() == 0.0

    def test_decomposition_is_exact(self, system256, rng):
        for img in (
            dots_image(),
            curve_image(),
            gradient_frame(),
            rng.normal(100, 30, size=(256, 256)),
        ):
            res = separate(img, SeparationConfig(), system256)
            err = np.abs(res.point_part + res.curve_part + res.residual - img).max()
            assert err < 1e-9
            assert np.array_equal(res.combined, res.point_part + res.curve_part)

    def test_dots_lean_wavelet_curves_lean_shearlet(self, system256):
        def wavelet_energy_fraction(img):
            res = separate(img, SeparationConfig(), system256)
            pw = np.sum(res.point_part**2)
            cw = np.sum(res.curve_part**2)
            return pw / (pw + cw)

        assert wavelet_energy_fraction(dots_image()) > wavelet_energy_fraction(curve_image())

    def test_residual_norm_never_increases(self, system256, rng):
        for img in (
            dots_image(),
            curve_image(),
            gradient_frame(),
            rng.normal(100.0, 40.0, size=(256, 256)),
        ):
            res = separate(img, SeparationConfig(), system256)
            norms = res.residual_norms
            assert len(norms) == SeparationConfig().iterations + 1
            for before, after in zip(norms, norms[1:]):
                assert after <= before + 1e-9

    def test_deterministic(self, system256):
        img = gradient_frame()
        a = separate(img, SeparationConfig(), system256)
        b = separate(img, SeparationConfig(), system256)
        assert np.array_equal(a.combined, b.combined)
        assert np.array_equal(a.residual, b.residual)

    def test_scaling_equivariance(self, system256):
        img = gradient_frame()
        alpha = 3.0
        base = separate(img, SeparationConfig(lambda_max=40.0, lambda_min=4.0), system256)
        scaled = separate(
            alpha * img,
            SeparationConfig(lambda_max=alpha * 40.0, lambda_min=alpha * 4.0),
            system256,
        )
        assert np.abs(scaled.combined - alpha * base.combined).max() < 1e-8
        assert np.abs(scaled.residual - alpha * base.residual).max() < 1e-8

    def test_wrong_size_rejected(self, system256):
        with pytest.raises(ValueError):
            separate(np.zeros((128, 128)), SeparationConfig(), system256)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SeparationConfig(iterations=0)
        with pytest.raises(ValueError):
            SeparationConfig(subband_weights=(-1.0, 0.1, 1.5, 1.5))
        with pytest.raises(ValueError):
            SeparationConfig(lambda_max=1.0, lambda_min=2.0)


class TestCombinedMap:
    def test_zero_result(self, system256):
        res = separate(np.zeros((256, 256)), SeparationConfig(), system256)
        assert np.abs(combined_map(res)).max() == 0.0

    def test_negative_entries_flip_sign(self, system256):
        res = separate(gradient_frame(), SeparationConfig(), system256)
        res.combined[10, 10] = -2.5
        assert combined_map(res)[10, 10] == 2.5

    def test_equals_magnitude_of_part_sum(self, system256):
        res = separate(gradient_frame(), SeparationConfig(), system256)
        assert np.array_equal(combined_map(res), np.abs(res.point_part + res.curve_part))
