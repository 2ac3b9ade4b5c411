"""Backend selection for the scalar family kernels.

The compiled extension is preferred; set ``RELQNG_PURE_PYTHON=1`` to force
the pure-Python implementation.
"""
import os

BACKEND = "python"

if os.environ.get("RELQNG_PURE_PYTHON", "") not in ("", "0"):
    from ._pykernels import *  # noqa: F401,F403
else:
    try:
        from ._ckernels import *  # noqa: F401,F403
        BACKEND = "cython"
    except ImportError:
        from ._pykernels import *  # noqa: F401,F403

from . import _pykernels as python_backend  # noqa: E402

__all__ = [
    "BACKEND",
    "DEFAULT_GRID",
    "DEFAULT_XTOL",
    "gaussian_entropy",
    "ng_closed_form",
    "ng_bracket",
    "ng_derivative_r",
    "ng_derivative_p",
    "minimize_over_r",
    "minimize_many",
    "python_backend",
]
