"""Pure-numpy implementation of the pairwise dipole kernels.

Drop-in twin of the compiled extension; chunked broadcasting keeps peak
memory bounded for large arrays.
"""

import numpy as np

_CHUNK = 512


def _kernel_block(diff):
    """Scalar dipole kernel g for displacement vectors diff (..., 3).

    g = (3/4) e^{i rho}/rho [ (1 + i/rho - 1/rho^2)
                              + (-1 - 3i/rho + 3/rho^2) (1 - rz^2)/2 ]
    with rho = k |diff| and rz the z direction cosine; circular in-plane
    polarization contracted out.  Units: gamma = 1, lengths in wavelengths.
    """
    r = np.sqrt(np.sum(diff * diff, axis=-1))
    rho = 2.0 * np.pi * r
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / rho
        rz2 = (diff[..., 2] / r) ** 2
        trans = 0.5 * (1.0 - rz2)
        out = (
            0.75 * np.exp(1j * rho) * inv
            * ((1.0 + 1j * inv - inv**2)
               + (-1.0 - 3j * inv + 3.0 * inv**2) * trans)
        )
    return out


def pair_coupling_matrix(positions):
    """(n, n) complex matrix of g(r_i - r_j); zero diagonal."""
    positions = np.ascontiguousarray(positions, dtype=float)
    n = positions.shape[0]
    out = np.empty((n, n), dtype=complex)
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        diff = positions[start:stop, None, :] - positions[None, :, :]
        out[start:stop] = _kernel_block(diff)
    np.fill_diagonal(out, 0.0)
    return out


def scattered_field(source_positions, amplitudes, points):
    """Sum_n g(point - r_n) b_n evaluated at each point."""
    source_positions = np.ascontiguousarray(source_positions, dtype=float)
    amplitudes = np.ascontiguousarray(amplitudes, dtype=complex)
    points = np.ascontiguousarray(points, dtype=float)
    out = np.empty(points.shape[0], dtype=complex)
    for start in range(0, points.shape[0], _CHUNK):
        stop = min(start + _CHUNK, points.shape[0])
        diff = points[start:stop, None, :] - source_positions[None, :, :]
        out[start:stop] = _kernel_block(diff) @ amplitudes
    return out
