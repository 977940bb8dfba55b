"""Kernel backend selection.

The compiled extension is preferred when it imported successfully; the
NumPy fallback is always available. Set ``NLIJSA_BACKEND=python`` to force
the fallback (useful for benchmarking and debugging).
"""

import os

from . import _core_py

try:
    from . import _core
except ImportError:
    _core = None

if _core is not None and os.environ.get("NLIJSA_BACKEND", "").lower() != "python":
    _active = _core
    BACKEND = "compiled"
else:
    _active = _core_py
    BACKEND = "python"

modulation_matrix = _active.modulation_matrix
amplitude_matrix = _active.amplitude_matrix


def available_backends() -> dict:
    """Importable kernel modules keyed by backend name."""
    out = {"python": _core_py}
    if _core is not None:
        out["compiled"] = _core
    return out
