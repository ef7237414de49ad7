"""Select the compiled or pure-numpy kernel backend at import time."""

import os

from mixbie import _pycore

BACKENDS = {"python": _pycore}

try:
    from mixbie import _core
except ImportError:  # extension not built
    _core = None
else:
    BACKENDS["cython"] = _core

if os.environ.get("MIXBIE_PURE_PYTHON", "") not in ("", "0") or _core is None:
    DEFAULT = "python"
else:
    DEFAULT = "cython"

_active = DEFAULT


def get(name=None):
    """Return the backend module called ``name`` (default: the active one)."""
    name = _active if name is None else name
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} is not available; have {sorted(BACKENDS)}") from None


def active():
    return _active


def set_backend(name):
    """Switch the active backend, returning the previous name."""
    global _active
    get(name)
    previous, _active = _active, name
    return previous
