"""Single-layer lattice geometry: reciprocal vectors, diffraction orders and
their coupling rates, and the radiative set.

Units: lengths in units of the wavelength (so k = 2*pi), rates in units of the
single-atom free-space decay rate gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

K = 2.0 * math.pi
SQUARE_ANGLE = math.pi / 2
TRIANGULAR_ANGLE = math.pi / 3


class GrazingOrderError(ValueError):
    """A diffraction order sits exactly on the light cone (|Q| = k), where its
    coupling rate diverges."""


@dataclass(frozen=True)
class LayerGeometry:
    """One 2D Bravais lattice layer.

    The atomic dipoles are fixed to the circular in-plane orientation
    (x + i y)/sqrt(2); there is no polarization degree of freedom here.
    """

    spacing: float
    lattice_angle: float = SQUARE_ANGLE

    def __post_init__(self):
        if not self.spacing > 0:
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        if not 0 < self.lattice_angle < math.pi:
            raise ValueError(
                f"lattice_angle must lie in (0, pi), got {self.lattice_angle}"
            )

    @classmethod
    def square(cls, spacing: float) -> "LayerGeometry":
        return cls(spacing, SQUARE_ANGLE)

    @classmethod
    def triangular(cls, spacing: float) -> "LayerGeometry":
        return cls(spacing, TRIANGULAR_ANGLE)


@dataclass(frozen=True)
class DiffractionOrder:
    """A single diffraction channel of the layer lattice."""

    index: tuple
    q_vec: tuple          # in-plane wavevector, units of k = 2*pi
    kz: complex           # longitudinal wavevector; real > 0 or +i|kz|
    coupling: complex     # Gamma_m; real > 0 radiative, imaginary evanescent
    radiative: bool


def make_geometry(kind: str, spacing: float) -> LayerGeometry:
    """Build a LayerGeometry from a kind string ('square' or 'triangular')."""
    if kind == "square":
        return LayerGeometry.square(spacing)
    if kind == "triangular":
        return LayerGeometry.triangular(spacing)
    raise ValueError(f"unknown lattice kind {kind!r}")


def gamma_1d(geom: LayerGeometry) -> float:
    """Collective emission rate of one infinite layer into the normal mode."""
    return 3.0 / (4.0 * math.pi * math.sin(geom.lattice_angle) * geom.spacing**2)


def reciprocal_vector(geom: LayerGeometry, m: tuple) -> np.ndarray:
    """Reciprocal-lattice vector Q_m of the oblique lattice."""
    m1, m2 = m
    psi = geom.lattice_angle
    qx = float(m1)
    qy = -m1 / math.tan(psi) + m2 / math.sin(psi)
    return (2.0 * math.pi / geom.spacing) * np.array([qx, qy])


def order_coupling(geom: LayerGeometry, m: tuple, grazing_tol: float = 1e-12
                   ) -> DiffractionOrder:
    """Classify order m and compute its coupling rate Gamma_m.

    The dipole orientation is circular, so |Q . e|^2 = |Q|^2 / 2.  kz takes
    the principal branch: real and >= 0 for radiative orders, +i|kz| for
    evanescent ones (decaying with distance).
    """
    q_vec = reciprocal_vector(geom, m)
    q_norm = float(np.hypot(q_vec[0], q_vec[1]))
    if abs(q_norm - K) < grazing_tol * K:
        raise GrazingOrderError(
            f"order {m} is grazing (|Q|/k = {q_norm / K!r}) for spacing "
            f"{geom.spacing}"
        )
    g1d = gamma_1d(geom)
    pol_factor = 1.0 - q_norm**2 / (2.0 * K**2)
    if q_norm < K:
        kz = complex(math.sqrt(K**2 - q_norm**2), 0.0)
        coupling = complex(g1d * pol_factor / (kz.real / K), 0.0)
        radiative = True
    else:
        kz = complex(0.0, math.sqrt(q_norm**2 - K**2))
        coupling = g1d * pol_factor / (kz / K)
        radiative = False
    return DiffractionOrder(
        index=(int(m[0]), int(m[1])),
        q_vec=(float(q_vec[0]), float(q_vec[1])),
        kz=kz,
        coupling=coupling,
        radiative=radiative,
    )


def _enumeration_bound(geom: LayerGeometry) -> int:
    # No radiative order can have |m1| or |m2| beyond this for any spacing.
    return int(math.ceil(geom.spacing * (1.0 + 1.0 / math.sin(geom.lattice_angle)))) + 1


def radiative_orders(geom: LayerGeometry, exclude_zero: bool = False
                     ) -> list[DiffractionOrder]:
    """All radiative diffraction orders, sorted by |Q| then lexicographic m."""
    bound = _enumeration_bound(geom)
    found = []
    for m1 in range(-bound, bound + 1):
        for m2 in range(-bound, bound + 1):
            if exclude_zero and m1 == 0 and m2 == 0:
                continue
            q_vec = reciprocal_vector(geom, (m1, m2))
            q_norm = float(np.hypot(q_vec[0], q_vec[1]))
            if q_norm < K * (1.0 + 1e-12):
                # grazing check happens inside order_coupling
                found.append(order_coupling(geom, (m1, m2)))
    found.sort(key=lambda o: (np.hypot(*o.q_vec), o.index))
    return found


def evanescent_orders(geom: LayerGeometry, interlayer_spacing: float,
                      cutoff: float = 1e-14) -> list[DiffractionOrder]:
    """Evanescent orders whose interlayer contribution exceeds `cutoff`.

    Keeps every m with |Gamma_m| exp(-|kz| a_z) >= cutoff; the enumeration box
    is sized so that no such order can be missed.
    """
    if not interlayer_spacing > 0:
        raise ValueError("interlayer_spacing must be positive")
    # |Gamma_m| grows ~ linearly with |Q| while the decay is exponential; a
    # generous |Q| ceiling from the cutoff equation |Q| exp(-|Q| a_z) ~ cutoff.
    q_max = K + max(5.0, -math.log(cutoff)) / interlayer_spacing + 10.0
    bound = int(math.ceil(
        q_max * geom.spacing / (2.0 * math.pi)
        * (1.0 + 1.0 / math.sin(geom.lattice_angle))
    )) + 1
    found = []
    for m1 in range(-bound, bound + 1):
        for m2 in range(-bound, bound + 1):
            q_vec = reciprocal_vector(geom, (m1, m2))
            q_norm = float(np.hypot(q_vec[0], q_vec[1]))
            if q_norm <= K * (1.0 + 1e-12):
                continue
            order = order_coupling(geom, (m1, m2))
            weight = abs(order.coupling) * math.exp(-order.kz.imag * interlayer_spacing)
            if weight >= cutoff:
                found.append(order)
    found.sort(key=lambda o: (np.hypot(*o.q_vec), o.index))
    return found
