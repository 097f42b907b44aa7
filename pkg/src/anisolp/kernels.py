"""Kernel dispatch: compiled extension when importable, numpy otherwise.

Set ``ANISOLP_PURE_PYTHON=1`` to force the numpy path.
"""

import os

from . import _pykernels as python

if os.environ.get("ANISOLP_PURE_PYTHON", "") not in ("", "0"):
    compiled = None
else:
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None

_impl = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"

aniso_distance_many = _impl.aniso_distance_many
band_lq = _impl.band_lq

__all__ = ["BACKEND", "aniso_distance_many", "band_lq", "python", "compiled"]
