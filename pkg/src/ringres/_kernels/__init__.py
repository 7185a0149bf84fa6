"""Hot numerical kernels with a compiled core and a pure-Python fallback.

The Cython extension ``_ckernels`` is used when it imports; otherwise, or
when ``RINGRES_PURE_PYTHON`` is set to a non-empty value, the numpy
implementations in ``_pykernels`` are used.  ``BACKEND`` names the active one.
"""

import os

from . import _pykernels as python_backend

compiled_backend = None
if not os.environ.get("RINGRES_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

_active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

sin_power_sums = _active.sin_power_sums
discrete_ring_sum = _active.discrete_ring_sum
interaction_propagator = _active.interaction_propagator

__all__ = [
    "BACKEND",
    "compiled_backend",
    "python_backend",
    "sin_power_sums",
    "discrete_ring_sum",
    "interaction_propagator",
]
