import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from momentkit import _core_py, backend  # noqa: E402

try:
    from momentkit import _core as _compiled
except ImportError:
    _compiled = None

BACKENDS = ["python"] + (["compiled"] if _compiled is not None else [])


@pytest.fixture(params=BACKENDS)
def core_backend(request, monkeypatch):
    """Run the test once per available kernel implementation."""
    mod = _core_py if request.param == "python" else _compiled
    for name in ("difference_table", "scan_signs", "lommel_h"):
        monkeypatch.setattr(backend, name, getattr(mod, name))
    return request.param
