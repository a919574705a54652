"""Hot inner loops of the pairing engine, with backend selection.

The singular-pairing sweeps (symmetric excision around a moving pole,
epsilon-smoothed boundary-value sums) are evaluated for every point of
every sampling grid at every ladder rung, which makes them the dominant
inner loop of the estimators.  A Cython extension provides them when
built; a numpy implementation with identical semantics is selected at
import when it is not.  Set MICROSPEC_PURE_PYTHON=1 to force the
fallback.
"""

import os

from . import _fallback

if os.environ.get("MICROSPEC_PURE_PYTHON") == "1":
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _sweeps as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

pv_excision_sweep = _impl.pv_excision_sweep
bv_epsilon_sweep = _impl.bv_epsilon_sweep

__all__ = ["pv_excision_sweep", "bv_epsilon_sweep", "BACKEND"]
