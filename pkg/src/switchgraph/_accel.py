"""Numba/numpy dispatch for the hot kernels.

Numba is used when it is importable and ``SWITCHGRAPH_NO_NUMBA`` is unset
(or set to ``0``/``""``).  Every accelerated kernel has a pure-numpy twin
with the same semantics, so the flag only trades speed.
"""

import os

USE_NUMBA = False
if not os.environ.get("SWITCHGRAPH_NO_NUMBA"):
    try:
        import numba  # noqa: F401

        USE_NUMBA = True
    except ImportError:
        USE_NUMBA = False


def maybe_njit(*args, **kwargs):
    """``numba.njit`` when acceleration is on, identity decorator otherwise."""
    if USE_NUMBA:
        import numba

        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def deco(f):
        return f

    return deco
