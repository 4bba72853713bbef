"""Backend selection for the reduction kernel.

The compiled extension ``_kernels_c`` handles prime fields; rational
arithmetic always runs on the pure-Python kernel.  Setting the environment
variable ``UNPROJ_LAB_PURE_PYTHON=1`` forces the fallback everywhere.
"""

import os

from . import _kernels_py

try:  # pragma: no cover - depends on the build
    from . import _kernels_c
except ImportError:  # pragma: no cover
    _kernels_c = None

FORCE_PYTHON = os.environ.get("UNPROJ_LAB_PURE_PYTHON", "") not in ("", "0")


def compiled_available() -> bool:
    return _kernels_c is not None


def backend_name(p: int) -> str:
    return "compiled" if _use_compiled(p) else "python"


def _use_compiled(p: int) -> bool:
    return _kernels_c is not None and not FORCE_PYTHON and 0 < p < (1 << 32)


def make_basis(layout, p: int, prefer=None):
    """A reducer set for the given monomial layout and characteristic."""
    use_c = _use_compiled(p) if prefer is None else (prefer == "compiled" and 0 < p < (1 << 32))
    if use_c:
        if _kernels_c is None:
            raise RuntimeError("compiled kernel not built")
        return _kernels_c.Basis(layout.guard, layout.cmask, p, layout.nfields)
    return _kernels_py.Basis(layout.guard, layout.cmask, p)
