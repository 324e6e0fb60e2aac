"""Shared fixtures: a fixed key bundle and a gallery of test images."""

import numpy as np
import pytest
from skimage import data as skdata

from lclmzy import KeyBundle, Raster

HEX_KEY = "0f1e2d3c4b5a69788796a5b4c3d2e1f00123456789abcdef"
DIGIT_KEY = "03517264"


@pytest.fixture(scope="session")
def bundle() -> KeyBundle:
    return KeyBundle(hex_key=HEX_KEY, digit_key=DIGIT_KEY)


def _gradient_h() -> np.ndarray:
    row = np.arange(240, dtype=np.uint8)
    plane = np.tile(row, (240, 1))
    return np.stack([plane, plane[::-1], plane.T], axis=2).astype(np.uint8)


def _gradient_v() -> np.ndarray:
    col = (np.arange(240, dtype=np.int64) * 255 // 239).astype(np.uint8)
    plane = np.tile(col[:, None], (1, 240))
    return np.stack([plane, 255 - plane, plane // 2], axis=2).astype(np.uint8)


def _checkerboard() -> np.ndarray:
    r, c = np.indices((240, 240))
    plane = (((r // 8) + (c // 8)) % 2 * 255).astype(np.uint8)
    return np.stack([plane, plane, 255 - plane], axis=2).astype(np.uint8)


def _stripes() -> np.ndarray:
    c = np.indices((240, 240))[1]
    plane = ((c % 16) * 16).astype(np.uint8)
    return np.stack([plane, np.roll(plane, 5, axis=1), np.roll(plane, 11, axis=1)], axis=2)


def _rings() -> np.ndarray:
    r, c = np.indices((240, 240), dtype=np.float64)
    d = np.sqrt((r - 120) ** 2 + (c - 120) ** 2)
    plane = (np.sin(d / 6.0) * 127 + 128).clip(0, 255).astype(np.int64)
    return np.stack([plane, (plane + 60) % 256, (plane + 120) % 256], axis=2).astype(np.uint8)


@pytest.fixture(scope="session")
def image_gallery() -> dict[str, Raster]:
    """At least ten images: flat, structured, random and photographic."""
    rng = np.random.default_rng(2024)
    gallery = {
        "constant_mid": Raster.from_array(np.full((240, 240, 3), 128, np.uint8)),
        "constant_zero": Raster.from_array(np.zeros((240, 240, 3), np.uint8)),
        "gradient_h": Raster.from_array(_gradient_h()),
        "gradient_v": Raster.from_array(_gradient_v()),
        "checkerboard": Raster.from_array(_checkerboard()),
        "stripes": Raster.from_array(_stripes()),
        "rings": Raster.from_array(_rings()),
        "random": Raster.from_array(rng.integers(0, 256, (240, 240, 3)).astype(np.uint8)),
        "random_large": Raster.from_array(rng.integers(0, 256, (300, 400, 3)).astype(np.uint8)),
        "photo_astronaut": Raster.from_array(skdata.astronaut()),
        "photo_chelsea": Raster.from_array(skdata.chelsea()),
        "photo_coffee": Raster.from_array(skdata.coffee()),
    }
    return gallery


@pytest.fixture(scope="session")
def photo(image_gallery) -> Raster:
    return image_gallery["photo_astronaut"]
