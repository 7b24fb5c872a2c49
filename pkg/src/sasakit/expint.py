"""Divided differences of exp and exponential moments of a simplex.

For a simplex T with vertices v_0..v_m and z_i = <c, v_i>,

    int_T exp(<c,v>) dv = m! |T| exp[z_0, ..., z_m]

and the first and second moments follow by differentiating in c: each
derivative appends one more node.  Clustered nodes are handled by a truncated
Taylor series about the cluster midpoint.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

TAYLOR_ORDER = 12
# absolute node spread below which a table entry is evaluated by Taylor series
TAYLOR_SPREAD = 0.25

_INV_FACT = [1.0 / math.factorial(k) for k in range(64)]


def _taylor(w: Sequence[float], order: int) -> float:
    """sum_{j<=order} h_j(w) / (k+j)!  with h_j the complete homogeneous polynomials."""
    k = len(w) - 1
    # h[j] accumulates h_j over the nodes seen so far
    h = [1.0] + [0.0] * order
    for wi in w:
        for j in range(1, order + 1):
            h[j] += wi * h[j - 1]
    return math.fsum(h[j] * _INV_FACT[k + j] for j in range(order + 1))


def exp_divided_difference(
    nodes: Sequence[float],
    shift: float = 0.0,
    spread: float = TAYLOR_SPREAD,
    order: int = TAYLOR_ORDER,
) -> float:
    """exp(-shift) * exp[nodes], the divided difference of exp over ``nodes``.

    Nodes may repeat.  A table entry whose node range is at most ``spread``
    is summed as a Taylor series; wider entries use the usual recursion.
    ``spread=0`` forces the recursion wherever nodes differ, ``spread=inf``
    forces the series for the whole table.
    """
    z = sorted(float(x) for x in nodes)
    k = len(z) - 1
    if k == 0:
        return math.exp(z[0] - shift)
    if z[-1] - z[0] <= spread:
        mid = 0.5 * (z[0] + z[-1])
        return math.exp(mid - shift) * _taylor([x - mid for x in z], order)
    row = [math.exp(x - shift) for x in z]
    for lev in range(1, k + 1):
        nxt = []
        for i in range(k + 1 - lev):
            lo, hi = z[i], z[i + lev]
            if hi - lo <= spread:
                mid = 0.5 * (lo + hi)
                nxt.append(math.exp(mid - shift) * _taylor([x - mid for x in z[i : i + lev + 1]], order))
            else:
                nxt.append((row[i + 1] - row[i]) / (hi - lo))
        row = nxt
    return row[0]


def simplex_exp_moments(verts: np.ndarray, volume: float, c: np.ndarray, shift: float = 0.0, spread: float = TAYLOR_SPREAD):
    """(i0, i1, i2) over one simplex, each scaled by exp(-shift).

    ``verts`` is (m+1, m); ``volume`` its m-dimensional volume.
    """
    m = verts.shape[1]
    z = [float(x) for x in verts @ c]
    scale = math.factorial(m) * volume
    i0 = scale * exp_divided_difference(z, shift, spread)
    e1 = [exp_divided_difference(z + [z[i]], shift, spread) for i in range(m + 1)]
    i1 = scale * (np.asarray(e1) @ verts)
    w = np.empty((m + 1, m + 1))
    for i in range(m + 1):
        for j in range(i, m + 1):
            e = exp_divided_difference(z + [z[i], z[j]], shift, spread)
            w[i, j] = w[j, i] = e
        w[i, i] *= 2.0
    i2 = scale * (verts.T @ w @ verts)
    return i0, i1, i2
