import pytest

from pricelab.catalog import sample_catalog


@pytest.fixture(scope="session")
def sample_specs():
    return sample_catalog()
