"""Kernel backend selection.

Hot loops live in ``_kernels`` and are compiled with numba by default.
Setting the environment variable ``POLARKIT_NO_NUMBA=1`` before import
selects the pure-Python/NumPy fallback: the same kernel bodies run
uncompiled. Results are bit-identical between backends; only speed
differs (see ``benchmarks/backend_bench.py``).
"""

from __future__ import annotations

import os

_DISABLED = os.environ.get("POLARKIT_NO_NUMBA", "").strip() in {"1", "true", "yes"}

if not _DISABLED:
    try:
        from numba import njit as _numba_njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover
        NUMBA_ENABLED = False
else:
    NUMBA_ENABLED = False

if NUMBA_ENABLED:

    def njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        kwargs.setdefault("nogil", True)
        return _numba_njit(*args, **kwargs)

else:

    def njit(*args, **kwargs):  # noqa: ARG001 - mirror numba's signature
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "python"
