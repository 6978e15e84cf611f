import pytest

from instances import small_example


@pytest.fixture
def example_instance():
    return small_example()
