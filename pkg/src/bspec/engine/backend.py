"""Selects the compiled kernels when importable, else the numpy fallback.

Set ``BS_BACKEND=python`` to force the fallback, ``BS_BACKEND=cython`` to
require the compiled module.
"""
import os

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _fallback}
if _compiled is not None:
    BACKENDS["cython"] = _compiled


def _select():
    want = os.environ.get("BS_BACKEND", "").strip().lower()
    if want == "python":
        return "python"
    if want == "cython":
        if _compiled is None:
            raise ImportError("BS_BACKEND=cython but bspec.engine._kernels is not built")
        return "cython"
    return "cython" if _compiled is not None else "python"


_active = _select()


def active() -> str:
    return _active


def kernels(name: str | None = None):
    return BACKENDS[name or _active]


def set_backend(name: str) -> None:
    global _active
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    _active = name


def default_threads() -> int:
    env = os.environ.get("BS_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            n = 0
        if n > 0:
            return n
    return os.cpu_count() or 1
