"""Select the compiled kernel module, falling back to pure Python.

Set ``MOMENTKIT_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _core_py

NAME = "python"
core = _core_py

if os.environ.get("MOMENTKIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _core as _compiled
    except ImportError:
        pass
    else:
        core = _compiled
        NAME = "compiled"

difference_table = core.difference_table
scan_signs = core.scan_signs
lommel_h = core.lommel_h
