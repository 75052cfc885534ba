import pytest

from cssets import _accel


@pytest.fixture(params=_accel.available_backends())
def each_backend(request):
    """Run a test once per available kernel backend."""
    with _accel.use_backend(request.param):
        yield request.param
