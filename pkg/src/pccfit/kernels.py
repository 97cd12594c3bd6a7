"""Backend selection for the hot window-fit kernel.

The compiled extension is used when it imports; otherwise the numpy
implementation takes over.  ``set_backend`` switches explicitly, which the
tests and the benchmark use to compare both.
"""

from __future__ import annotations

import logging

from . import _fallback

log = logging.getLogger(__name__)

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None
    log.debug("compiled kernels unavailable, using numpy fallback")

_BACKENDS = {"python": _fallback}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

_active = _compiled if _compiled is not None else _fallback


def available() -> list[str]:
    return sorted(_BACKENDS)


def backend() -> str:
    return "compiled" if _active is _compiled and _compiled is not None else "python"


def set_backend(name: str) -> None:
    global _active
    try:
        _active = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {available()}") from None


def fit_window(x, y, lo, hi, n_grid=1024, rel_tol=1e-10):
    return _active.fit_window(x, y, lo, hi, n_grid, rel_tol)


def objective_many(ts, x, y, lo, hi):
    return _active.objective_many(ts, x, y, lo, hi)
