"""Hot loops: pair expansion, rolling peak statistics, Louvain local moving.

The compiled extension is used when it was built; set ``NEDSTREAM_PURE=1``
to force the pure-Python implementations.
"""
import os

from . import _pykernels as python

if os.environ.get("NEDSTREAM_PURE", "") not in ("", "0"):
    compiled = None
else:
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

_active = compiled if compiled is not None else python

BACKEND = _active.BACKEND
pair_contributions = _active.pair_contributions
rolling_peaks = _active.rolling_peaks
louvain_local_move = _active.louvain_local_move

__all__ = ["BACKEND", "compiled", "python", "pair_contributions", "rolling_peaks",
           "louvain_local_move"]
