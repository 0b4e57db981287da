import pytest

from mtpkit import transforms
from mtpkit.geometry import Dataset
from mtpkit.transforms import get_transformation_class, register_class
from tests.helpers import PitchShiftClass


@pytest.fixture
def three_points():
    return Dataset([(0, 0), (1, 0), (2, 1)])


@pytest.fixture
def palindrome():
    return Dataset([(0, 0), (1, 2), (2, 1), (3, 1), (4, 2), (5, 0)])


@pytest.fixture
def stretched():
    """A three-note pattern followed by a copy stretched to twice its duration."""
    return Dataset([(0, 0), (1, 2), (2, 1), (4, 0), (6, 2), (8, 1)])


@pytest.fixture
def line():
    return Dataset([(0, 0), (1, 0), (2, 0), (3, 0)])


@pytest.fixture
def f2t():
    return get_transformation_class("2T")


@pytest.fixture
def f2tr():
    return get_transformation_class("2TR")


@pytest.fixture
def f2str():
    return get_transformation_class("2STR")


@pytest.fixture
def pitch_shift(monkeypatch):
    monkeypatch.setattr(transforms, "REGISTRY", dict(transforms.REGISTRY))
    return register_class(PitchShiftClass())
