import pytest

from mixbie import _backend


@pytest.fixture(params=sorted(_backend.BACKENDS))
def backend(request):
    """Run a test once per available kernel backend, restoring the default."""
    previous = _backend.set_backend(request.param)
    yield request.param
    _backend.set_backend(previous)
