"""Sampling kernels: compiled core with a pure numpy fallback.

Both kernels are bit-for-bit interchangeable. The compiled one is chosen
at import when it built successfully; set ``LIFTDESIGN_PURE=1`` (before
import) to force the fallback.
"""

import os

from . import _pure as pure

try:
    from . import _core as compiled
except ImportError:
    compiled = None

if compiled is not None and not os.environ.get("LIFTDESIGN_PURE"):
    active = compiled
else:
    active = pure


def backend_name() -> str:
    return "compiled" if active is compiled else "pure"
