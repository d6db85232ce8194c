"""Compiled split scans for table merges.

Each kernel fills every cell by a direct scan over the left operand's share;
the right operand receives the remainder. Ties keep the smallest left share
(the first strictly better candidate wins).
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _combine(a, b, use_min):
    if use_min:
        return a if a < b else b
    return a + b


@njit(cache=True)
def merge_outer_kernel(left, right, use_min):
    nx, ny = left.shape
    out = np.empty((nx, ny))
    ysplit = np.empty((nx, ny), dtype=np.int32)
    for a in range(nx):
        for b in range(ny):
            best = -np.inf
            arg = 0
            for s in range(b + 1):
                v = _combine(left[a, s], right[a, b - s], use_min)
                if v > best:
                    best = v
                    arg = s
            out[a, b] = best
            ysplit[a, b] = arg
    return out, ysplit


@njit(cache=True)
def merge_inner_kernel(left, right, use_min):
    nx, ny = left.shape
    out = np.empty((nx, ny))
    xsplit = np.empty((nx, ny), dtype=np.int32)
    ysplit = np.empty((nx, ny), dtype=np.int32)
    for a in range(nx):
        for b in range(ny):
            best = -np.inf
            argx = 0
            argy = 0
            for sx in range(a + 1):
                for sy in range(b + 1):
                    v = _combine(left[sx, sy], right[a - sx, b - sy], use_min)
                    if v > best:
                        best = v
                        argx = sx
                        argy = sy
            out[a, b] = best
            xsplit[a, b] = argx
            ysplit[a, b] = argy
    return out, xsplit, ysplit
