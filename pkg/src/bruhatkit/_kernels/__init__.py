"""Kernel backend selection.

The compiled core is used when the extension built; otherwise the numpy
fallback takes over transparently.  Set ``BRUHATKIT_PURE=1`` to force the
fallback (used by the backend benchmark and for debugging).
"""

from __future__ import annotations

import os

from . import fallback

if os.environ.get("BRUHATKIT_PURE"):
    active = fallback
else:
    try:
        from . import _core as active  # type: ignore[no-redef]
    except ImportError:
        active = fallback

BACKEND = active.BACKEND_NAME


def available_backends():
    """The importable kernel modules, keyed by backend name."""
    backends = {fallback.BACKEND_NAME: fallback}
    try:
        from . import _core
    except ImportError:
        pass
    else:
        backends[_core.BACKEND_NAME] = _core
    return backends
