"""Hot numerical kernels with a compiled core and a NumPy fallback.

The Cython extension ``_core`` is preferred when it imported successfully;
the pure NumPy twin ``_ref`` is used otherwise, and always for dimensions
above 3 (the compiled loops are specialized to n <= 3).  Setting the
environment variable ``TORICMETRICS_PURE=1`` forces the fallback, which is
useful for benchmarking and for isolating extension bugs.
"""

import os

import numpy as np

from . import _ref

if os.environ.get("TORICMETRICS_PURE", "0") not in ("0", ""):
    _impl = _ref
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _ref

_COMPILED_MAX_DIM = 3


def _pick(n):
    return _impl if n <= _COMPILED_MAX_DIM else _ref


def backend_name():
    """Name of the active kernel backend: "cython" or "numpy"."""
    return _impl.NAME


def canonical_jets(U, lam, Y):
    return _pick(np.shape(Y)[1]).canonical_jets(U, lam, Y)


def cholesky_inverse(H):
    return _pick(np.shape(H)[1]).cholesky_inverse(H)


def inverse_hessian_jets(H, T3, T4):
    return _pick(np.shape(H)[1]).inverse_hessian_jets(H, T3, T4)


def curvature(H, T3, T4):
    return _pick(np.shape(H)[1]).curvature(H, T3, T4)


def curvature_logdet(H, T3, T4):
    return _pick(np.shape(H)[1]).curvature_logdet(H, T3, T4)
