"""Kernel selection.  Set HRLAB_PURE_PYTHON=1 to force the LAPACK fallback."""
import os

if os.environ.get("HRLAB_PURE_PYTHON"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        from . import _kernels_py as kernels

BACKEND = kernels.BACKEND
PentaLU = kernels.PentaLU
imex_step_kernel = kernels.imex_step


def load(name: str):
    """Kernel module by name, for side-by-side comparison."""
    if name == "python":
        from . import _kernels_py as mod
    elif name == "cython":
        from . import _kernels as mod
    else:
        raise ValueError(f"unknown backend {name!r}")
    return mod
