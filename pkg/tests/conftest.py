import pytest

from xmas.fixtures import loop_net, red_blue
from xmas.state import initial_state


@pytest.fixture
def rb():
    return red_blue()


@pytest.fixture
def loop():
    return loop_net()


@pytest.fixture
def rb_red(rb):
    """q0 holds one red packet, everything else empty, silent source."""
    return initial_state(rb, {"q0": ["red"]})
