import numpy as np
import pytest

from coocscale import ImagePlane, RasterImage


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_plane(rng, height, width, levels=256) -> ImagePlane:
    """Random integer-valued plane, the common fuzzing input."""
    return ImagePlane(rng.integers(0, levels, size=(height, width)).astype(np.float64))


def random_image(rng, height, width, channels=3) -> RasterImage:
    return RasterImage.from_arrays(
        *(rng.integers(0, 256, size=(height, width)).astype(np.float64)
          for _ in range(channels))
    )
