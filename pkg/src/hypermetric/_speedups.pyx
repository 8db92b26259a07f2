# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled path-length kernel for polydisc model metrics.

Metric at (z, v): max_j rho_j |v_j| / (rho_j^2 - |z_j - c_j|^2).  Returns
the quadrature length of the polyline, or -1.0 if a node escapes.
"""

from libc.math cimport sqrt

COMPILED = True


def polyline_length(double complex[:, :] verts,
                    double complex[:] centers,
                    double[:] radii,
                    double[:] nodes,
                    double[:] weights):
    cdef Py_ssize_t m = verts.shape[0] - 1
    cdef Py_ssize_t n = verts.shape[1]
    cdef Py_ssize_t q = nodes.shape[0]
    cdef Py_ssize_t s, k, j
    cdef double total = 0.0, seg_len, t, best, val, den, rj, vre, vim, zre, zim
    cdef double complex z, v, c
    if m < 1:
        return 0.0
    for s in range(m):
        seg_len = 0.0
        for k in range(q):
            t = nodes[k]
            best = 0.0
            for j in range(n):
                v = verts[s + 1, j] - verts[s, j]
                z = verts[s, j] + t * v
                c = centers[j]
                rj = radii[j]
                zre = z.real - c.real
                zim = z.imag - c.imag
                den = rj * rj - (zre * zre + zim * zim)
                if den <= 0.0:
                    return -1.0
                vre = v.real
                vim = v.imag
                val = rj * sqrt(vre * vre + vim * vim) / den
                if val > best:
                    best = val
            seg_len += weights[k] * best
        total += seg_len
    return total
