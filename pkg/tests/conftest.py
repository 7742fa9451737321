import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent.parent))

from processors.dist_core import make_joint
from processors.instance_io import gen_random


WORKED = [[0.4, 0.1], [0.1, 0.4]]


@pytest.fixture
def worked():
    return make_joint(WORKED)


@pytest.fixture
def independent():
    return make_joint([[0.3, 0.3], [0.2, 0.2]])


@pytest.fixture
def point_mass():
    return make_joint([[1.0]])


@st.composite
def joints(draw, x_max=3, y_max=4):
    """Seeded Dirichlet joint tables of random shape"""
    x_size = draw(st.integers(1, x_max))
    y_size = draw(st.integers(1, y_max))
    seed = draw(st.integers(0, 2 ** 31 - 1))
    return gen_random(x_size, y_size, 1.0, seed).joint()
