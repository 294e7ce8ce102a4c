"""
Backend dispatch for the hot kernels.

The numba backend is used when numba imports cleanly and the environment
variable PAULIWALK_NO_NUMBA is unset/empty; otherwise the pure-numpy
fallback takes over. ``BACKEND`` records which one won.
"""

from __future__ import annotations

import os

import numpy as np

from ..errors import JacobiConvergenceError

HAS_NUMBA = False
if not os.environ.get("PAULIWALK_NO_NUMBA"):
    try:
        from . import numba_backend as _impl

        HAS_NUMBA = True
    except ImportError:
        from . import numpy_backend as _impl
else:
    from . import numpy_backend as _impl

BACKEND = "numba" if HAS_NUMBA else "numpy"

pb_weights = _impl.pb_weights
pb_log_weights = _impl.pb_log_weights
moment_dp = _impl.moment_dp
word_dp = _impl.word_dp


def jacobi_eigvals4(mats: np.ndarray) -> np.ndarray:
    """
    Eigenvalues of a batch of Hermitian 4x4 matrices, sorted descending.

    :param mats: shape (m, 4, 4), complex.
    :raises JacobiConvergenceError: a matrix failed to diagonalize within
        the sweep budget.
    """
    mats = np.ascontiguousarray(mats, dtype=np.complex128)
    evals, converged = _impl.jacobi_eigvals4_raw(mats)
    if not np.all(converged):
        bad = int(np.argmin(converged))
        raise JacobiConvergenceError(
            f"jacobi sweep budget exhausted on matrix {bad} of {mats.shape[0]}"
        )
    return evals
