"""Kernel backend selection.

Hot numeric kernels ship in two functionally identical flavours: numba
@njit loops and pure-numpy array code.  The numba flavour is used when
numba imports cleanly and the ``WEPSIM_NO_NUMBA`` environment variable is
unset; otherwise the numpy flavour is used.  Both flavours consume the
same uniform streams and apply floating point operations in the same
order, so results are bit-identical across backends.
"""
import os

DISABLE_ENV = "WEPSIM_NO_NUMBA"


def numba_disabled_by_env() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip().lower() in {"1", "true", "yes", "on"}


try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not numba_disabled_by_env()


def active_backend() -> str:
    """Name of the kernel backend in use, 'numba' or 'numpy'."""
    return "numba" if USE_NUMBA else "numpy"
