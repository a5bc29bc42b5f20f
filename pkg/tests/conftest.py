import pytest

from colex import gallery


@pytest.fixture
def running():
    return gallery.running_dfa()
