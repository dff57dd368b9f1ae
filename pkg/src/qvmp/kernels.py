"""Kernel backend selection.

The compiled extension is preferred when present; the pure-NumPy fallback
is used otherwise. Set QVMP_KERNELS=python or QVMP_KERNELS=cython to force
a backend at import time.
"""
from __future__ import annotations

import os

from . import _kernels_py


def load_backend(name: str | None = None):
    """Return a kernel module by name ("cython", "python" or "auto")."""
    choice = (name or os.environ.get("QVMP_KERNELS") or "auto").lower()
    if choice == "auto":
        try:
            from . import _kernels  # type: ignore[attr-defined]

            return _kernels
        except ImportError:
            return _kernels_py
    if choice in ("cython", "compiled", "ext"):
        from . import _kernels  # type: ignore[attr-defined]

        return _kernels
    if choice in ("python", "numpy", "py"):
        return _kernels_py
    raise ValueError(f"unknown kernel backend {name!r}")


active = load_backend()


def available_backends() -> list[str]:
    names = []
    try:
        from . import _kernels  # type: ignore[attr-defined]  # noqa: F401

        names.append("cython")
    except ImportError:
        pass
    names.append("python")
    return names
