"""Matcher backend selection.

Prefers the compiled kernel when the extension built; falls back to the
pure-Python implementation otherwise.  ``SEMSLICE_FORCE_PY=1`` forces the
fallback (used by the benchmark and the parity tests).
"""

from __future__ import annotations

import os

if os.environ.get("SEMSLICE_FORCE_PY") == "1":
    from semslice import _match_py as _backend

    BACKEND = "python"
else:
    try:
        from semslice import _matchcore as _backend  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from semslice import _match_py as _backend  # type: ignore[no-redef]

        BACKEND = "python"

match_rules = _backend.match_rules
