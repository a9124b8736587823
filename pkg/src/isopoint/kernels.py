"""Backend selection for the hot loops.

The compiled extension is preferred. Set ``ISOPOINT_PURE_PYTHON=1`` to force the
numpy fallback (the test-suite runs both).
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

BACKENDS: dict[str, ModuleType] = {"python": _pykernels}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    BACKENDS["compiled"] = _ckernels

if os.environ.get("ISOPOINT_PURE_PYTHON") == "1" or _ckernels is None:
    BACKEND = "python"
else:
    BACKEND = "compiled"

_active = BACKENDS[BACKEND]


def backend() -> str:
    return BACKEND


def use(name: str) -> None:
    """Switch the active backend (``"compiled"`` or ``"python"``)."""
    global BACKEND, _active
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    BACKEND, _active = name, BACKENDS[name]


def closure_codes(gens, n, cap):
    return _active.closure_codes(gens, n, cap)


def orbit_labels(gens, n):
    return _active.orbit_labels(gens, n)


def closure_in_table(table, start, gens):
    return _active.closure_in_table(table, start, gens)
