import pytest

from geoscene import CAMBRIDGE_BOUNDS, SceneFrame


@pytest.fixture
def bounds():
    return CAMBRIDGE_BOUNDS


@pytest.fixture
def frame():
    return SceneFrame.from_bounds(CAMBRIDGE_BOUNDS)
