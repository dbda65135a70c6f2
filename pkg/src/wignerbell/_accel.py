"""Backend selection for the numeric kernels.

Kernels are compiled with numba when it is importable. Setting
``WIGNERBELL_DISABLE_NUMBA=1`` forces the pure-numpy implementations,
which is also the automatic fallback when numba is missing.
"""
import os
import warnings

_FLAG = "WIGNERBELL_DISABLE_NUMBA"


def _env_disabled():
    return os.environ.get(_FLAG, "").strip().lower() not in ("", "0", "false", "no")


try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kw):
        if len(args) == 1 and callable(args[0]) and not kw:
            return args[0]
        return lambda f: f

    warnings.warn("numba is not installed - falling back to numpy kernels")

USE_NUMBA = HAVE_NUMBA and not _env_disabled()
BACKEND = "numba" if USE_NUMBA else "numpy"
