"""Selects the Bessel core at import time: compiled extension or pure Python.

Set ORBITWALK_BACKEND=pure or ORBITWALK_BACKEND=compiled to force a choice;
by default the compiled core is used when it built successfully.
"""

from __future__ import annotations

import os

_requested = os.environ.get("ORBITWALK_BACKEND", "").strip().lower()
if _requested not in ("", "pure", "compiled"):
    raise ImportError(
        f"ORBITWALK_BACKEND={_requested!r} not understood; use 'pure' or 'compiled'"
    )

if _requested == "pure":
    from . import _core_py as core

    COMPILED = False
else:
    try:
        from . import _core as core  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        if _requested == "compiled":
            raise
        from . import _core_py as core  # type: ignore[no-redef]

        COMPILED = False

BACKEND_NAME = "compiled" if COMPILED else "pure"
