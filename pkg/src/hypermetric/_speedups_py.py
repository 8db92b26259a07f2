"""Pure-Python (numpy) fallback for the path-length kernel.

Same contract as the compiled version in _speedups.pyx: given polyline
vertices in a polydisc and quadrature nodes/weights on [0, 1], return the
metric length of the polyline, or -1.0 if any quadrature node leaves the
polydisc (nonpositive denominator).
"""

import numpy as np

COMPILED = False


def polyline_length(verts, centers, radii, nodes, weights):
    verts = np.asarray(verts, dtype=complex)
    if verts.ndim != 2 or verts.shape[0] < 2:
        return 0.0
    centers = np.asarray(centers, dtype=complex)
    radii = np.asarray(radii, dtype=float)
    nodes = np.asarray(nodes, dtype=float)
    weights = np.asarray(weights, dtype=float)

    seg = verts[1:] - verts[:-1]  # (m, n)
    z = verts[:-1, None, :] + nodes[None, :, None] * seg[:, None, :]  # (m, q, n)
    den = radii**2 - np.abs(z - centers) ** 2
    if np.any(den <= 0.0):
        return -1.0
    val = radii * np.abs(seg)[:, None, :] / den  # (m, q, n)
    e = val.max(axis=2)  # (m, q)
    return float((e @ weights).sum())
