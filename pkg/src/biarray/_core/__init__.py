"""Backend selection for the pairwise dipole kernels.

The compiled Cython extension is used when available; the pure-numpy twin is
the fallback.  Set BIARRAY_BACKEND=python to force the fallback (useful for
the backend benchmark and for debugging).
"""

import os

if os.environ.get("BIARRAY_BACKEND", "").lower() == "python":
    from ._numpy_backend import pair_coupling_matrix, scattered_field
    BACKEND = "python"
else:
    try:
        from ._greens import pair_coupling_matrix, scattered_field
        BACKEND = "compiled"
    except ImportError:  # extension not built
        from ._numpy_backend import pair_coupling_matrix, scattered_field
        BACKEND = "python"

__all__ = ["pair_coupling_matrix", "scattered_field", "BACKEND"]
