"""Select the compiled kernel extension when present, else the numpy fallback."""
import importlib

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

_active = _compiled if _compiled is not None else _kernels_py


def compiled_available():
    return _compiled is not None


def active():
    """Return the kernel module currently in use."""
    return _active


def name():
    return _active.BACKEND


def use(backend):
    """Switch kernels: ``"compiled"``, ``"python"`` or ``"auto"``."""
    global _active
    if backend == "python":
        _active = _kernels_py
    elif backend == "compiled":
        if _compiled is None:
            raise ImportError("fkinetic._kernels is not built")
        _active = _compiled
    elif backend == "auto":
        _active = _compiled if _compiled is not None else _kernels_py
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return _active


def reload_compiled():
    """Retry importing the extension, e.g. after an in-place build."""
    global _compiled
    try:
        _compiled = importlib.import_module(__package__ + "._kernels")
    except ImportError:
        _compiled = None
    return _compiled is not None
