"""Bilayer effective interface: interlayer kernel, collective-mode
parameters, analytic plane-wave scattering, and efficiency maps.

The divergent single-layer lattice self-energy is never computed; all
collective shifts are the convergent interlayer part, and detunings are
measured relative to the single-layer resonance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .iface1d import (
    InterfaceParams,
    ModeCoefficients,
    ScatteringResult,
)
from .lattice import (
    K,
    LayerGeometry,
    evanescent_orders,
    gamma_1d,
    radiative_orders,
)

Q_VALUES = (0.0, math.pi)


@dataclass(frozen=True)
class BilayerConfig:
    """Two identical layers separated by `interlayer_spacing` along z.

    lateral_shift is the in-plane offset of layer 2 in units of the lattice
    spacing (Cartesian components, e.g. (0.5, 0.5)).  gauge_origin z_c sets
    the phase reference of the +/- mode weights; 0 is the bilayer midpoint.
    """

    layer: LayerGeometry
    interlayer_spacing: float
    lateral_shift: tuple = (0.0, 0.0)
    gauge_origin: float = 0.0
    individual_loss: float = 0.0

    def __post_init__(self):
        if not self.interlayer_spacing > 0:
            raise ValueError("interlayer_spacing must be positive")
        if self.individual_loss < 0:
            raise ValueError("individual_loss must be >= 0")


@dataclass(frozen=True)
class CollectiveMode:
    """One of the two bilayer eigenmodes (in-phase q=0 or out-of-phase q=pi)."""

    q: float
    coefficients: ModeCoefficients
    params: InterfaceParams
    diffraction_loss: float = 0.0


def _sign(q: float) -> float:
    if q == 0.0:
        return 1.0
    if q == math.pi:
        return -1.0
    raise ValueError(f"q must be 0 or pi, got {q}")


def _shift_phase(order, cfg: BilayerConfig) -> float:
    # Q_m . d with d = lateral_shift * a; the 2*pi/a prefactor of Q cancels a.
    qx, qy = order.q_vec
    dx, dy = cfg.lateral_shift
    return math.cos((qx * dx + qy * dy) * cfg.layer.spacing)


def interlayer_kernel(cfg: BilayerConfig, order_cutoff: float = 1e-14
                      ) -> np.ndarray:
    """2x2 dipole-dipole kernel between the layer collective dipoles.

    Diagonal: radiative orders only (the evanescent diagonal is the
    a_z-independent single-layer self-energy, dropped by convention).
    Off-diagonal: all orders, with the lateral-shift phase symmetrized over
    +-m pairs into cos(Q_m . d), truncated at `order_cutoff`.
    """
    az = cfg.interlayer_spacing
    rad = radiative_orders(cfg.layer)
    evan = evanescent_orders(cfg.layer, az, cutoff=order_cutoff)
    diag = sum(o.coupling / 2.0 for o in rad)
    off = 0.0 + 0.0j
    for o in rad:
        off += (o.coupling / 2.0) * _shift_phase(o, cfg) * np.exp(1j * o.kz * az)
    for o in evan:
        off += (o.coupling / 2.0) * _shift_phase(o, cfg) * np.exp(1j * o.kz * az)
    return np.array([[diag, off], [off, diag]], dtype=complex)


def mode_coefficients(q: float, gauge_origin: float = 0.0) -> ModeCoefficients:
    """Target-mode weights of mode q with the phase reference at z_c."""
    phase = np.exp(1j * K * gauge_origin)
    if _sign(q) > 0:
        return ModeCoefficients(phase / math.sqrt(2), (1.0 / phase) / math.sqrt(2))
    return ModeCoefficients(-1j * phase / math.sqrt(2), 1j * (1.0 / phase) / math.sqrt(2))


def coupling_rate(cfg: BilayerConfig, q: float) -> float:
    """Target-mode coupling Gamma_q of mode q (zeroth diffraction order only).

    Cheap arithmetic path: no diffraction-order enumeration, usable in tight
    parameter sweeps.
    """
    s = _sign(q)
    raw = gamma_1d(cfg.layer) * (1.0 + s * math.cos(K * cfg.interlayer_spacing))
    return max(raw, 0.0)


def effective_params(cfg: BilayerConfig, q: float) -> CollectiveMode:
    """Effective 1D-model parameters (Gamma_q, gamma_loss, Delta_q) of mode q.

    Gamma_q comes from the zeroth order alone; the diffraction loss sums the
    higher radiative orders with the interlayer interference bracket; the
    shift is the convergent interlayer part (radiative sine terms plus
    decaying evanescent terms), all generalized by the lateral-shift phase.
    """
    s = _sign(q)
    az = cfg.interlayer_spacing
    g1d = gamma_1d(cfg.layer)
    coupling = coupling_rate(cfg, q)

    diff_loss = 0.0
    shift = 0.0
    for o in radiative_orders(cfg.layer):
        phase = _shift_phase(o, cfg)
        kz = o.kz.real
        gm = o.coupling.real
        shift += s * (gm / 2.0) * phase * math.sin(kz * az)
        if o.index != (0, 0):
            diff_loss += gm * (1.0 + s * phase * math.cos(kz * az))
    for o in evanescent_orders(cfg.layer, az):
        phase = _shift_phase(o, cfg)
        shift += s * (o.coupling.imag / 2.0) * phase * math.exp(-o.kz.imag * az)
    diff_loss = max(diff_loss, 0.0)

    params = InterfaceParams(
        coupling_rate=coupling,
        loss_rate=diff_loss + cfg.individual_loss,
        collective_shift=shift,
    )
    return CollectiveMode(
        q=q,
        coefficients=mode_coefficients(q, cfg.gauge_origin),
        params=params,
        diffraction_loss=diff_loss,
    )


def _mode_response(mode: CollectiveMode, delta: float) -> complex:
    """Gamma_q / (2 D_q) with D_q the steady-state denominator."""
    p = mode.params
    if p.coupling_rate == 0.0:
        return 0.0 + 0.0j
    denom = complex((p.coupling_rate + p.loss_rate) / 2.0,
                    -(delta - p.collective_shift))
    return p.coupling_rate / (2.0 * denom)


def analytic_scattering(cfg: BilayerConfig, delta: float) -> ScatteringResult:
    """Composite plane-wave (r, t) of the infinite bilayer at detuning delta.

    Both collective modes are driven by a one-sided input; their responses
    superpose into t = 1 - A_0 - A_pi and r_+ = -e^{2ikz_c} (A_0 - A_pi),
    which satisfies the gauge relation r_+ = r_- e^{4ikz_c} identically.
    """
    a0 = _mode_response(effective_params(cfg, 0.0), delta)
    api = _mode_response(effective_params(cfg, math.pi), delta)
    gauge = np.exp(2j * K * cfg.gauge_origin)
    t = 1.0 - a0 - api
    r_plus = -gauge * (a0 - api)
    r_minus = r_plus / gauge**2
    return ScatteringResult(r_plus=r_plus, r_minus=r_minus, t_plus=t, t_minus=t)


@dataclass
class EfficiencyMap:
    """Efficiency r_q on an (a_z, a) grid; grazing points are NaN."""

    az_values: np.ndarray
    a_values: np.ndarray
    q: float
    values: np.ndarray = field(repr=False)

    def rows(self):
        """Row-major (a_z, a, r_q) triples for CSV export."""
        for i, az in enumerate(self.az_values):
            for j, a in enumerate(self.a_values):
                yield az, a, self.values[i, j]


def efficiency_map(cfg_template: BilayerConfig, q: float,
                   az_values, a_values) -> EfficiencyMap:
    """r_q over an (a_z, a) grid, at resonance, from the effective parameters.

    Geometry kind, lateral shift, and individual loss are taken from the
    template config; its spacings are ignored.
    """
    az_values = np.asarray(az_values, dtype=float)
    a_values = np.asarray(a_values, dtype=float)
    s = _sign(q)
    gs = cfg_template.individual_loss
    out = np.empty((az_values.size, a_values.size))
    for j, a in enumerate(a_values):
        geom = LayerGeometry(a, cfg_template.layer.lattice_angle)
        g1d = gamma_1d(geom)
        try:
            orders = radiative_orders(geom, exclude_zero=True)
        except Exception:
            out[:, j] = np.nan
            continue
        coupling = g1d * (1.0 + s * np.cos(K * az_values))
        diff = np.zeros_like(az_values)
        for o in orders:
            qx, qy = o.q_vec
            dx, dy = cfg_template.lateral_shift
            phase = math.cos((qx * dx + qy * dy) * a)
            diff += o.coupling.real * (1.0 + s * phase * np.cos(o.kz.real * az_values))
        total = coupling + diff + gs
        with np.errstate(invalid="ignore", divide="ignore"):
            out[:, j] = np.where(total > 0, coupling / total, 0.0)
    return EfficiencyMap(az_values=az_values, a_values=a_values, q=q, values=out)
