"""Kernel backend selection, resolved once at import.

Set VALVEBENCH_KERNELS=numpy|compiled|auto (default auto) before importing to
force a backend. `auto` prefers the compiled extension and silently falls back
to the numpy kernels when the extension was not built.
"""

import os

_choice = os.environ.get("VALVEBENCH_KERNELS", "auto")
if _choice not in ("auto", "compiled", "numpy"):
    raise ValueError(
        f"VALVEBENCH_KERNELS must be auto, compiled or numpy, got {_choice!r}"
    )

if _choice == "numpy":
    from . import _np_kernels as kernels
else:
    try:
        from . import _fast_kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        if _choice == "compiled":
            raise
        from . import _np_kernels as kernels  # type: ignore[no-redef]

BACKEND = kernels.NAME
