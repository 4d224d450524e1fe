import numpy as np
import pytest

from cubicrypt.cipher import GrayImage
from cubicrypt.testimage import synthetic_test_image


@pytest.fixture(scope="session")
def test_image() -> GrayImage:
    return synthetic_test_image(256, 256)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20260819)


def random_image(rng: np.random.Generator, width: int = 256, height: int = 256) -> GrayImage:
    return GrayImage(pixels=rng.integers(0, 256, size=(height, width), dtype=np.uint8))
