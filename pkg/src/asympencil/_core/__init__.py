"""Hot loops of the frame transport.

The compiled extension ``_transport`` is used when it was built; otherwise
the pure-Python module of the same interface is used.  Setting the
environment variable ``ASYMPENCIL_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _transport_py as python_backend

compiled_backend = None
if not os.environ.get("ASYMPENCIL_PURE_PYTHON"):
    try:
        from . import _transport as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

double_reflection = backend.double_reflection
