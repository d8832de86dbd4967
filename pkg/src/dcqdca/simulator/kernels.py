"""Kernel selection.

``DCQDCA_BACKEND=numpy`` forces the numpy path; otherwise numba is used when it
imports cleanly.
"""

import logging
import os

from dcqdca.simulator import _numpy_kernels

logger = logging.getLogger(__name__)

BACKEND_ENV = "DCQDCA_BACKEND"


def _load():
    want = os.environ.get(BACKEND_ENV, "numba").lower()
    if want == "numpy":
        return "numpy", _numpy_kernels
    if want != "numba":
        raise ValueError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {want!r}")
    try:
        from dcqdca.simulator import _numba_kernels
    except ImportError:
        logger.warning("numba unavailable, using numpy kernels")
        return "numpy", _numpy_kernels
    return "numba", _numba_kernels


BACKEND, _mod = _load()

partial_mixer = _mod.partial_mixer
phase_separator = _mod.phase_separator
expectation = _mod.expectation
