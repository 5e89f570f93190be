"""Hot kernels with a compiled implementation and a pure-Python fallback.

The compiled module is used when it was built; set ``FEEC_WEIGHTS_PURE=1`` to
force the fallback.
"""

import os

from . import _bareiss_py

if os.environ.get("FEEC_WEIGHTS_PURE"):
    eliminate = _bareiss_py.eliminate
    BACKEND = "python"
else:
    try:
        from ._bareiss import eliminate  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        eliminate = _bareiss_py.eliminate
        BACKEND = "python"

__all__ = ["eliminate", "BACKEND"]
