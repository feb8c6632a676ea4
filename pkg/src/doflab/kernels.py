"""Backend selection for the simulator's numeric kernels.

Prefers the compiled extension when it imported cleanly, otherwise the
NumPy reference. Set ``DOFLAB_KERNELS=numpy`` or ``=cython`` to force a
backend (forcing cython raises if the extension is unavailable).
"""

from __future__ import annotations

import os

_choice = os.environ.get("DOFLAB_KERNELS", "auto").strip().lower()

if _choice in ("auto", ""):
    try:
        from . import _kernels_cy as _impl

        backend = "cython"
    except ImportError:
        from . import _kernels_np as _impl

        backend = "numpy"
elif _choice == "cython":
    from . import _kernels_cy as _impl

    backend = "cython"
elif _choice == "numpy":
    from . import _kernels_np as _impl

    backend = "numpy"
else:
    raise ValueError(f"DOFLAB_KERNELS must be 'auto', 'numpy' or 'cython', got {_choice!r}")

logdet_rate_bits = _impl.logdet_rate_bits
numerical_rank = _impl.numerical_rank

__all__ = ["backend", "logdet_rate_bits", "numerical_rank"]
