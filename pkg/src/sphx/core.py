"""Backend selection for the hot loops.

The compiled extension is used when it imports; set ``SPHX_BACKEND=python``
to force the numpy fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pycore


def _load() -> tuple[ModuleType, str]:
    if os.environ.get("SPHX_BACKEND", "").lower() == "python":
        return _pycore, "python"
    try:
        from . import _core  # type: ignore[attr-defined]
    except ImportError:
        return _pycore, "python"
    return _core, "cython"


backend, BACKEND = _load()

sl3_octant = backend.sl3_octant
circle_phi = backend.circle_phi
mehler_sum = backend.mehler_sum
su3_schur = backend.su3_schur


def get_backend(name: str) -> ModuleType:
    """Explicit access to one backend, for benchmarks and agreement tests."""
    if name == "python":
        return _pycore
    if name == "cython":
        from . import _core  # type: ignore[attr-defined]

        return _core
    raise ValueError(f"unknown backend {name!r}")
