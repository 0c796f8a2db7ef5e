"""Backend selection for the Monte Carlo counting kernels.

Two interchangeable implementations exist: a Cython extension built at
install time and a pure numpy/Python fallback.  Both consume the same
(key, trial range, parameters) arguments and return exactly equal counts,
so selection is a pure performance choice.

The backend is picked at import: the compiled module if it imported, else
the fallback.  Set ``CTXCALC_BACKEND`` to ``compiled`` or ``pure`` to force
one (forcing ``compiled`` without the extension raises), or call
``set_backend`` at runtime; the latter mainly serves tests and benchmarks.
"""

from __future__ import annotations

import os

from ..errors import ConfigError
from . import pure as _pure

try:
    from . import _compiled
except ImportError:
    _compiled = None

_MODULES = {"pure": _pure}
if _compiled is not None:
    _MODULES["compiled"] = _compiled


def _resolve(name: str):
    if name == "auto":
        return _MODULES.get("compiled", _pure), "compiled" if _compiled is not None else "pure"
    if name not in ("compiled", "pure"):
        raise ConfigError(f"unknown backend {name!r}, expected auto, compiled or pure")
    if name not in _MODULES:
        raise ConfigError("compiled backend requested but the extension is not built")
    return _MODULES[name], name


_active, _active_name = _resolve(os.environ.get("CTXCALC_BACKEND", "auto"))


def backend_name() -> str:
    """Name of the backend currently answering kernel calls."""
    return _active_name


def available_backends() -> tuple:
    return tuple(sorted(_MODULES))


def set_backend(name: str) -> str:
    """Switch the active backend; returns the resolved name."""
    global _active, _active_name
    _active, _active_name = _resolve(name)
    return _active_name


def count_zero_arrival(key: int, start: int, n: int, threshold: float) -> int:
    return _active.count_zero_arrival(key, start, n, threshold)


def count_joint(key: int, start: int, n: int,
                threshold_window: float, threshold_noise: float) -> int:
    return _active.count_joint(key, start, n, threshold_window, threshold_noise)


def count_race(key: int, start: int, n: int,
               rate_noise: float, rate_correct: float) -> int:
    return _active.count_race(key, start, n, rate_noise, rate_correct)
