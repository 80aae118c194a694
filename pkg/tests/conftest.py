import numpy as np
import pytest

from src.core import make_frame
from src.triplet import TripletMass


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def frame_ab():
    return make_frame(["a", "b"])


@pytest.fixture
def frame_abc():
    return make_frame(["a", "b", "c"])


@pytest.fixture
def frame_xyzuv():
    """x, y, z, u, v at indexes 0..4"""
    return make_frame(["x", "y", "z", "u", "v"])


@pytest.fixture
def triplet_xy(frame_xyzuv):
    # {x}=0.5, {y}=0.3, frame=0.2
    return TripletMass.from_masses(frame_xyzuv, 0, 1, 0.5, 0.3)


@pytest.fixture
def tmp_json(tmp_path):
    return tmp_path / "evidence.json"
