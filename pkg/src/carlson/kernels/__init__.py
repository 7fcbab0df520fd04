"""Hot search kernels with a compiled path and a pure-numpy fallback.

The compiled path is used when numba imports and ``CARLSON_DISABLE_JIT`` is
unset (or ``0``).  Both paths return identical results; ``get(name, backend)``
exposes either one explicitly for tests and benchmarks.
"""

from __future__ import annotations

import os

from . import _numpy

try:  # pragma: no cover - depends on the environment
    from . import _numba
except ImportError:  # pragma: no cover
    _numba = None

NAMES = ("hj_first", "hj_scan", "carlson_dfs", "lambda_counter", "members_of")


def jit_available() -> bool:
    return _numba is not None


def jit_enabled() -> bool:
    flag = os.environ.get("CARLSON_DISABLE_JIT", "").strip().lower()
    return jit_available() and flag in ("", "0", "false", "no")


def backend() -> str:
    return "numba" if jit_enabled() else "numpy"


def get(name: str, which: str | None = None):
    if name not in NAMES:
        raise KeyError(name)
    which = which or backend()
    if which == "numba":
        if _numba is None:
            raise RuntimeError("numba is not installed")
        return getattr(_numba, name)
    if which == "numpy":
        return getattr(_numpy, name)
    raise ValueError(f"unknown backend {which!r}")


def hj_first(*args):
    return get("hj_first")(*args)


def hj_scan(*args):
    return get("hj_scan")(*args)


def carlson_dfs(*args):
    return get("carlson_dfs")(*args)
