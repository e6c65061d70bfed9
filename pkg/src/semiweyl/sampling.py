"""Deterministic low-discrepancy sampling of chart domains."""

from __future__ import annotations

import numpy as np

__all__ = ["halton_points", "PRIMES"]

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _radical_inverse(i, base):
    f = 1.0
    r = 0.0
    while i > 0:
        f /= base
        r += f * (i % base)
        i //= base
    return r


def halton_points(chart, count, seed=0, margin=0.02):
    """``count`` Halton points inside the chart box, offset by ``seed``.

    A small relative margin keeps samples strictly inside the open box.
    """
    lo = np.asarray(chart.lo, dtype=float)
    hi = np.asarray(chart.hi, dtype=float)
    span = hi - lo
    lo = lo + margin * span
    span = (1.0 - 2.0 * margin) * span
    dim = chart.dim
    if dim > len(PRIMES):
        raise ValueError("chart dimension too large for Halton sampling")
    start = 1 + 7919 * int(seed)
    pts = np.empty((count, dim))
    for k in range(count):
        i = start + k
        for d in range(dim):
            pts[k, d] = _radical_inverse(i, PRIMES[d])
    return lo + pts * span
