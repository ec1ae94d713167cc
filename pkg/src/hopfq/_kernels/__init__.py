"""Kernel selection: compiled extension if available, pure Python otherwise.

Set ``HOPFQ_PURE=1`` in the environment to force the pure backend (used by
the benchmark and to debug suspected kernel mismatches).
"""

import os

from . import pure as _pure

if os.environ.get("HOPFQ_PURE"):
    _impl = _pure
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND
ts_mul = _impl.ts_mul
free_word_mul = _impl.free_word_mul
rref_fraction = _impl.rref_fraction
