import numpy as np
import pytest

from coocscale import (
    DivisibilityError,
    GuideParams,
    ImagePlane,
    bicubic_downscale,
    box_downscale,
    build_guide,
    gaussian_convolve,
    gaussian_kernel,
    lanczos_downscale,
    subsample_downscale,
)
from coocscale.resample import catmull_rom, lanczos3
from conftest import random_plane
from oracles import box_oracle, gaussian_2d_oracle, separable_2d_oracle

ALL_DOWNSCALERS = [box_downscale, subsample_downscale, bicubic_downscale, lanczos_downscale]


class TestBoxAndSubsample:
    def test_box_mean(self):
        out = box_downscale(ImagePlane(np.array([[1.0, 3.0], [5.0, 7.0]])), 2)
        assert out.values.tolist() == [[4.0]]

    def test_subsample_top_left(self):
        out = subsample_downscale(ImagePlane(np.array([[1.0, 3.0], [5.0, 7.0]])), 2)
        assert out.values.tolist() == [[1.0]]

    def test_subsample_index_arithmetic(self):
        grid = np.arange(16, dtype=float).reshape(4, 4)
        plane = ImagePlane(10 * (grid // 4) + grid % 4)
        out = subsample_downscale(plane, 2)
        assert out.values.tolist() == [[0.0, 2.0], [20.0, 22.0]]

    def test_box_matches_oracle(self, rng):
        for d in (2, 3, 4):
            plane = random_plane(rng, 4 * d, 3 * d)
            assert np.allclose(
                box_downscale(plane, d).values, box_oracle(plane.values, d), atol=1e-12
            )

    def test_box_respects_bounds(self, rng):
        plane = random_plane(rng, 12, 12)
        out = box_downscale(plane, 3)
        assert out.values.min() >= plane.values.min()
        assert out.values.max() <= plane.values.max()


class TestDimensions:
    @pytest.mark.parametrize(
        "w,h,d,ow,oh",
        [(300, 400, 2, 150, 200), (512, 768, 4, 128, 192), (704, 1024, 4, 176, 256)],
    )
    def test_output_dims(self, w, h, d, ow, oh):
        plane = ImagePlane.constant(h, w, 5.0)
        for op in ALL_DOWNSCALERS:
            out = op(plane, d)
            assert (out.width, out.height) == (ow, oh)

    def test_divisibility_errors(self, rng):
        plane = random_plane(rng, 9, 8)
        for op in ALL_DOWNSCALERS:
            with pytest.raises(DivisibilityError):
                op(plane, 2)

    def test_factor_below_two_rejected(self, rng):
        plane = random_plane(rng, 4, 4)
        with pytest.raises(ValueError):
            box_downscale(plane, 1)


class TestConstantFixedPoint:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_exact_for_all(self, d):
        plane = ImagePlane.constant(3 * d, 2 * d, 41.5)
        for op in ALL_DOWNSCALERS:
            out = op(plane, d)
            assert (out.values == 41.5).all(), op.__name__


class TestKernels:
    def test_catmull_rom_knots(self):
        assert catmull_rom(0.0) == 1.0
        assert catmull_rom(1.0) == 0.0
        assert catmull_rom(2.0) == 0.0
        assert catmull_rom(2.5) == 0.0
        assert catmull_rom(-0.5) == catmull_rom(0.5)

    def test_catmull_rom_partition_of_unity(self, rng):
        for x in rng.uniform(0.0, 1.0, size=20):
            total = sum(catmull_rom(x + n) for n in range(-3, 4))
            assert abs(total - 1.0) < 1e-12

    def test_lanczos3_knots(self):
        assert lanczos3(0.0) == 1.0
        for n in (1, 2, -1, -2):
            assert abs(lanczos3(float(n))) < 1e-12
        assert lanczos3(3.0) == 0.0
        assert lanczos3(-1.3) == lanczos3(1.3)


class TestSeparableAgainstBruteForce:
    def test_bicubic_impulse(self):
        grid = np.zeros((16, 16))
        grid[8, 8] = 255.0
        out = bicubic_downscale(ImagePlane(grid), 2)
        expected = separable_2d_oracle(grid, 2, catmull_rom, 2.0)
        assert np.allclose(out.values, expected, atol=1e-12)

    def test_lanczos_impulse(self):
        grid = np.zeros((24, 24))
        grid[12, 12] = 255.0
        out = lanczos_downscale(ImagePlane(grid), 2)
        expected = separable_2d_oracle(grid, 2, lanczos3, 3.0)
        assert np.allclose(out.values, expected, atol=1e-12)

    @pytest.mark.parametrize("d", [2, 4])
    def test_random_planes(self, rng, d):
        for _ in range(3):
            plane = random_plane(rng, 16, 16)
            bic = bicubic_downscale(plane, d)
            lan = lanczos_downscale(plane, d)
            assert np.allclose(
                bic.values, separable_2d_oracle(plane.values, d, catmull_rom, 2.0),
                atol=1e-10,
            )
            assert np.allclose(
                lan.values, separable_2d_oracle(plane.values, d, lanczos3, 3.0),
                atol=1e-10,
            )


class TestGaussian:
    def test_sigma_zero_is_identity(self, rng):
        plane = random_plane(rng, 5, 5)
        out = gaussian_convolve(plane, 0.0)
        assert (out.values == plane.values).all()

    def test_constant_exact(self):
        plane = ImagePlane.constant(6, 7, 99.25)
        out = gaussian_convolve(plane, 1.3)
        assert (out.values == 99.25).all()

    def test_kernel_normalized_and_sized(self):
        for sigma in (0.3, 0.5, 1.0, 2.2):
            k = gaussian_kernel(sigma)
            assert len(k) == 2 * int(np.ceil(3.0 * sigma)) + 1
            assert abs(k.sum() - 1.0) < 1e-12

    def test_impulse_row_matches_direct_evaluation(self):
        plane = ImagePlane(np.array([[0.0, 0.0, 255.0, 0.0, 0.0]]))
        out = gaussian_convolve(plane, 0.5)
        expected = gaussian_2d_oracle(plane.values, 0.5)
        assert np.allclose(out.values, expected, atol=1e-12)

    @pytest.mark.parametrize("sigma", [0.5, 1.1])
    def test_random_planes_match_oracle(self, rng, sigma):
        for _ in range(3):
            plane = random_plane(rng, 9, 11)
            out = gaussian_convolve(plane, sigma)
            assert np.allclose(out.values, gaussian_2d_oracle(plane.values, sigma), atol=1e-10)

    def test_preserves_bounds(self, rng):
        plane = random_plane(rng, 10, 10)
        out = gaussian_convolve(plane, 1.5)
        assert out.values.min() >= plane.values.min() - 1e-9
        assert out.values.max() <= plane.values.max() + 1e-9

    def test_negative_sigma_rejected(self, rng):
        with pytest.raises(ValueError):
            gaussian_convolve(random_plane(rng, 3, 3), -0.1)


class TestBuildGuide:
    def test_sigma_zero_equals_box(self, rng):
        plane = random_plane(rng, 8, 12)
        guide = build_guide(plane, GuideParams(2, 0.0))
        assert (guide.values == box_downscale(plane, 2).values).all()

    def test_dims(self, rng):
        guide = build_guide(random_plane(rng, 12, 8), GuideParams(4, 0.5))
        assert (guide.height, guide.width) == (3, 2)

    def test_constant(self):
        guide = build_guide(ImagePlane.constant(8, 8, 3.5), GuideParams(2, 0.5))
        assert (guide.values == 3.5).all()

    def test_matches_composition(self, rng):
        plane = random_plane(rng, 10, 6)
        guide = build_guide(plane, GuideParams(2, 0.7))
        manual = gaussian_convolve(box_downscale(plane, 2), 0.7)
        assert (guide.values == manual.values).all()

    def test_param_validation(self):
        with pytest.raises(ValueError):
            GuideParams(1)
        with pytest.raises(ValueError):
            GuideParams(2, -1.0)
