"""Optional numba acceleration.

Set ``ARCCURVE_DISABLE_NUMBA=1`` to force the pure numpy/python paths.
"""
import os

USE_NUMBA = os.environ.get("ARCCURVE_DISABLE_NUMBA", "").lower() not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if not USE_NUMBA:

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def decorator(func):
            return func

        return decorator
