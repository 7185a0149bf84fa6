import pytest

from ringres import _kernels

BACKENDS = ["python"] + (["cython"] if _kernels.compiled_backend is not None else [])
KERNELS = ("sin_power_sums", "discrete_ring_sum", "interaction_propagator")


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test with each available kernel backend active."""
    module = _kernels.python_backend if request.param == "python" else _kernels.compiled_backend
    for name in KERNELS:
        monkeypatch.setattr(_kernels, name, getattr(module, name))
    return request.param
