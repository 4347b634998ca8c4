"""Kernel backend selection: compiled extension when available, else pure Python.

Set CUBIK_PURE_PYTHON=1 to force the fallback (used by the benchmark)."""

import os

if os.environ.get("CUBIK_PURE_PYTHON") == "1":
    from . import _speed_py as _impl
else:
    try:
        from . import _speed as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _speed_py as _impl

BACKEND = _impl.BACKEND
eval_length = _impl.eval_length
cd_minimize = _impl.cd_minimize
greedy_cover = _impl.greedy_cover
