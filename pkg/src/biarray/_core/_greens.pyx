# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pairwise dipole kernels (hot loops of the finite-array solver)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt, cos, sin, M_PI


cdef inline double complex _g(double dx, double dy, double dz) noexcept nogil:
    cdef double r = sqrt(dx * dx + dy * dy + dz * dz)
    cdef double rho = 2.0 * M_PI * r
    cdef double inv = 1.0 / rho
    cdef double rz2 = (dz / r) * (dz / r)
    cdef double trans = 0.5 * (1.0 - rz2)
    cdef double br = 1.0 - inv * inv + (-1.0 + 3.0 * inv * inv) * trans
    cdef double bi = inv - 3.0 * inv * trans
    cdef double cr = 0.75 * inv * cos(rho)
    cdef double ci = 0.75 * inv * sin(rho)
    return (cr * br - ci * bi) + 1j * (cr * bi + ci * br)


def pair_coupling_matrix(cnp.ndarray[double, ndim=2] positions not None):
    """(n, n) complex matrix of g(r_i - r_j); zero diagonal."""
    cdef Py_ssize_t n = positions.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.zeros((n, n), dtype=np.complex128)
    cdef double[:, ::1] pos = np.ascontiguousarray(positions)
    cdef double complex[:, ::1] o = out
    cdef Py_ssize_t i, j
    cdef double complex g
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                g = _g(pos[i, 0] - pos[j, 0], pos[i, 1] - pos[j, 1],
                       pos[i, 2] - pos[j, 2])
                o[i, j] = g
                o[j, i] = g
    return out


def scattered_field(cnp.ndarray[double, ndim=2] source_positions not None,
                    cnp.ndarray[cnp.complex128_t, ndim=1] amplitudes not None,
                    cnp.ndarray[double, ndim=2] points not None):
    """Sum_n g(point - r_n) b_n evaluated at each point."""
    cdef Py_ssize_t n = source_positions.shape[0]
    cdef Py_ssize_t npts = points.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(npts, dtype=np.complex128)
    cdef double[:, ::1] src = np.ascontiguousarray(source_positions)
    cdef double[:, ::1] pts = np.ascontiguousarray(points)
    cdef double complex[::1] amp = np.ascontiguousarray(amplitudes)
    cdef double complex[::1] o = out
    cdef Py_ssize_t p, i
    cdef double complex acc
    with nogil:
        for p in range(npts):
            acc = 0.0
            for i in range(n):
                acc = acc + _g(pts[p, 0] - src[i, 0], pts[p, 1] - src[i, 1],
                               pts[p, 2] - src[i, 2]) * amp[i]
            o[p] = acc
    return out
