"""Kernel backend selection.

The compiled extension is preferred; the pure-python twin is used when the
extension was not built. `BACKEND` records which one is active, and both
modules stay importable so the benchmark can compare them directly.
"""

from . import _pairwise_py

try:
    from . import _pairwise_kernel as _compiled
    BACKEND = "cython"
    _impl = _compiled
except ImportError:
    _compiled = None
    BACKEND = "python"
    _impl = _pairwise_py

pairwise_rhs_flat = _impl.pairwise_rhs_flat
closure_flat = _impl.closure_flat
EPS = _pairwise_py.EPS
