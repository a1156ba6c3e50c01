"""Monte Carlo simulator for the reflected CuSum statistic.

The per-step kernel exists twice: a compiled Cython extension and a
vectorized numpy fallback.  Selection happens here at import time; the
environment variable CTCUSUM_BACKEND ("cython" or "python") forces a
choice, and every engine entry point also accepts an explicit
``backend=`` argument so both can be exercised in one process.
"""

from __future__ import annotations

import os

from . import _kernel_py

_FORCED = os.environ.get("CTCUSUM_BACKEND", "auto").strip().lower() or "auto"

try:
    from . import _kernel
except ImportError:
    _kernel = None

if _FORCED == "auto":
    DEFAULT_BACKEND = "cython" if _kernel is not None else "python"
elif _FORCED == "cython":
    if _kernel is None:
        raise ImportError(
            "CTCUSUM_BACKEND=cython but the compiled kernel is not importable"
        )
    DEFAULT_BACKEND = "cython"
elif _FORCED == "python":
    DEFAULT_BACKEND = "python"
else:
    raise ImportError(f"CTCUSUM_BACKEND={_FORCED!r} is not one of cython/python/auto")


def available_backends() -> tuple:
    """Names of kernels importable in this environment."""
    return ("cython", "python") if _kernel is not None else ("python",)


def load_backend(name: str | None = None):
    """Resolve a backend module by name (None -> the import-time default)."""
    if name is None:
        name = DEFAULT_BACKEND
    if name == "python":
        return _kernel_py
    if name == "cython":
        if _kernel is None:
            raise ValueError("compiled kernel unavailable; rebuild or use 'python'")
        return _kernel
    raise ValueError(f"unknown backend {name!r}")


from .engine import (  # noqa: E402  (re-export after selection is set up)
    DesignCheck,
    Mode,
    SimConfig,
    SimEstimate,
    StudyLevel,
    convergence_study,
    default_horizon,
    default_step,
    estimate,
    make_config,
    run_path,
    step_increment,
    validate_design,
)

__all__ = [
    "DEFAULT_BACKEND",
    "available_backends",
    "load_backend",
    "Mode",
    "SimConfig",
    "SimEstimate",
    "StudyLevel",
    "DesignCheck",
    "step_increment",
    "run_path",
    "estimate",
    "validate_design",
    "convergence_study",
    "default_step",
    "default_horizon",
    "make_config",
]
