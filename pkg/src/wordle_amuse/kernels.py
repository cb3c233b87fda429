"""Kernel backend selection.

Imports the compiled extension when it was built, otherwise the NumPy
fallback.  Set ``WORDLE_AMUSE_BACKEND=numpy`` or ``=cython`` to force a
choice (forcing ``cython`` without a built extension raises at import).
"""

import os

from . import _kernels_py

try:
    from . import _kernels
except ImportError:
    _kernels = None

_forced = os.environ.get("WORDLE_AMUSE_BACKEND", "").strip().lower()
if _forced in ("numpy", "python", "py"):
    _impl = _kernels_py
elif _forced in ("cython", "compiled", "cy"):
    if _kernels is None:
        raise RuntimeError(
            "WORDLE_AMUSE_BACKEND=cython but the compiled extension is not built"
        )
    _impl = _kernels
elif _forced:
    raise RuntimeError(f"unknown WORDLE_AMUSE_BACKEND value: {_forced!r}")
else:
    _impl = _kernels if _kernels is not None else _kernels_py

BACKEND_NAME = _impl.BACKEND_NAME
ALL_GREEN_CODE = _impl.ALL_GREEN_CODE

feedback_code = _impl.feedback_code
feedback_codes = _impl.feedback_codes
levenshtein = _impl.levenshtein


def available_backends():
    """Names of importable kernel implementations (for the benchmark)."""
    names = [_kernels_py.BACKEND_NAME]
    if _kernels is not None:
        names.append(_kernels.BACKEND_NAME)
    return names
