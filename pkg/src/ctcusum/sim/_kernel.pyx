# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled path-stepping kernel: the scalar reflected recursion.

Semantics match ctcusum.sim._kernel_py.run_block; this version walks the
block step by step with the GIL released.
"""

from libc.math cimport exp

BACKEND_NAME = "cython"

# Same crossing-probability cutoff as the numpy fallback.
DEF BRIDGE_CUTOFF = 40.0


def run_block(double y, double h, double drift, double vol, double bridge_scale,
              bint bridge, double[::1] gauss, double[::1] unif, Py_ssize_t limit):
    """Advance one path through at most ``limit`` steps of a draw block.

    Returns (event, index, y_end); see the fallback kernel for the contract.
    """
    cdef Py_ssize_t i
    cdef double ynew, a
    cdef int event = 0
    cdef Py_ssize_t idx = limit - 1
    with nogil:
        for i in range(limit):
            ynew = y + drift + vol * gauss[i]
            if ynew >= h:
                event = 1
                idx = i
                break
            if ynew < 0.0:
                ynew = 0.0
            if bridge:
                a = bridge_scale * (h - y) * (h - ynew)
                if a < BRIDGE_CUTOFF and unif[i] < exp(-a):
                    event = 2
                    idx = i
                    break
            y = ynew
    if event == 0:
        return 0, idx, y
    return event, idx, 0.0
