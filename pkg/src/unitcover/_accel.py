"""Numba toggle.

Set ``UNITCOVER_DISABLE_NUMBA=1`` to run every hot kernel through its
pure-numpy path instead of the jitted one.
"""
import os

USE_NUMBA = os.environ.get("UNITCOVER_DISABLE_NUMBA", "0").lower() not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if not USE_NUMBA:

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(fn):
            return fn

        return wrap


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
