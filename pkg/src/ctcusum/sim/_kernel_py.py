"""Vectorized numpy fallback for the path-stepping kernel.

The reflected recursion y_{k+1} = max(0, y_k + du_k) is evaluated in
closed form over a whole block of steps (Lindley): with partial sums
S_k of the increments,

    y_k = max(y_0 + S_k, S_k - min_{1<=j<=k} S_j),

which a cumsum plus a running minimum deliver without a Python-level
loop.  Event detection (threshold hit, or a probabilistic crossing
between grid points) is then a couple of array scans.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

# Skip the crossing-probability exp() once the exponent argument makes the
# probability < ~4e-18; identical rule in the compiled kernel.
_BRIDGE_CUTOFF = 40.0


def reflected_path(y0: float, du: np.ndarray) -> np.ndarray:
    """Reflected trajectory after each increment, starting from y0 >= 0."""
    s = np.cumsum(du)
    return np.maximum(y0 + s, s - np.minimum.accumulate(s))


def run_block(y, h, drift, vol, bridge_scale, bridge, gauss, unif, limit):
    """Advance one path through at most ``limit`` steps of a draw block.

    Returns (event, index, y_end):
      event 0 -- block exhausted without crossing; y_end is the new state
      event 1 -- threshold reached at step ``index`` (0-based in block)
      event 2 -- between-grid crossing accepted at step ``index``
    """
    du = drift + vol * gauss[:limit]
    ypath = reflected_path(y, du)
    hard = np.nonzero(ypath >= h)[0]
    ihard = int(hard[0]) if hard.size else int(limit)
    if bridge and ihard > 0:
        ycur = ypath[:ihard]
        yprev = np.empty(ihard)
        yprev[0] = y
        yprev[1:] = ycur[:-1]
        a = bridge_scale * (h - yprev) * (h - ycur)
        prob = np.zeros(ihard)
        near = np.nonzero(a < _BRIDGE_CUTOFF)[0]
        if near.size:
            prob[near] = np.exp(-a[near])
            crossed = np.nonzero(unif[:ihard] < prob)[0]
            if crossed.size:
                return 2, int(crossed[0]), 0.0
    if ihard < limit:
        return 1, ihard, 0.0
    return 0, int(limit) - 1, float(ypath[-1])
