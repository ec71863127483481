"""Pick the compiled kernels when importable, else the numpy fallback.

Set ``EXTREMAL_SPECTRAL_PURE=1`` to force the fallback.
"""
import os

if os.environ.get("EXTREMAL_SPECTRAL_PURE"):
    from . import _fallback as kernels
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
        BACKEND = "cython"
    except ImportError:
        from . import _fallback as kernels
        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
