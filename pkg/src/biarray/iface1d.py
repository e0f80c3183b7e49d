"""Minimal two-sided 1D model of a quantum interface.

A single collective dipole couples at rate Gamma_q to a target mode built
from right- and left-propagating fields with complex weights (c_plus,
c_minus), decays into loss channels at rate gamma_loss, and carries a
collective shift Delta_q.  All rates are in units of the single-atom decay
gamma; the steady state is classical (linear response).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass


@dataclass(frozen=True)
class InterfaceParams:
    """Effective parameters (Gamma_q, gamma_loss, Delta_q) of the 1D model."""

    coupling_rate: float
    loss_rate: float
    collective_shift: float = 0.0

    def __post_init__(self):
        if self.coupling_rate < 0:
            raise ValueError(f"coupling_rate must be >= 0, got {self.coupling_rate}")
        if self.loss_rate < 0:
            raise ValueError(f"loss_rate must be >= 0, got {self.loss_rate}")


@dataclass(frozen=True)
class ModeCoefficients:
    """Weights of the +/- propagating fields in the target mode."""

    c_plus: complex
    c_minus: complex

    def __post_init__(self):
        norm = abs(self.c_plus) ** 2 + abs(self.c_minus) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"|c_plus|^2 + |c_minus|^2 = {norm}, expected 1")


@dataclass(frozen=True)
class ScatteringResult:
    """Plane-wave scattering coefficients of a two-sided 1D scatterer.

    r_plus is the reflection of a +-propagating input (appearing in the
    outgoing - field); t_plus its transmission.  Likewise for -.
    """

    r_plus: complex
    r_minus: complex
    t_plus: complex
    t_minus: complex


@dataclass(frozen=True)
class SteadyStateResponse:
    dipole_amplitude: complex
    out_plus: complex
    out_minus: complex


def _denominator(params: InterfaceParams, detuning: float) -> complex:
    return complex(
        (params.coupling_rate + params.loss_rate) / 2.0,
        -(detuning - params.collective_shift),
    )


def steady_state_response(params: InterfaceParams, coeffs: ModeCoefficients,
                          detuning: float, side: str = "+",
                          amplitude: complex = 1.0) -> SteadyStateResponse:
    """Steady state under a monochromatic plane-wave input from one side.

    The input couples to the dipole through the target-mode projection
    c_side * amplitude; the dipole re-emits into both directions with the
    conjugate weights.  Output amplitudes are quoted at the carrier
    (exp(+-ikz) stripped).
    """
    if side not in ("+", "-"):
        raise ValueError(f"side must be '+' or '-', got {side!r}")
    denom = _denominator(params, detuning)
    if denom == 0:
        raise ZeroDivisionError(
            "singular steady state: zero total rate at resonance"
        )
    c_in = coeffs.c_plus if side == "+" else coeffs.c_minus
    root = cmath.sqrt(params.coupling_rate)
    dipole = 1j * root * c_in * amplitude / denom
    emit_plus = 1j * root * coeffs.c_plus.conjugate() * dipole
    emit_minus = 1j * root * coeffs.c_minus.conjugate() * dipole
    out_plus = emit_plus + (amplitude if side == "+" else 0.0)
    out_minus = emit_minus + (amplitude if side == "-" else 0.0)
    return SteadyStateResponse(dipole, out_plus, out_minus)


def scattering_from_params(params: InterfaceParams, coeffs: ModeCoefficients,
                           detuning: float) -> ScatteringResult:
    """Compose the steady-state response of both input sides into (r, t)."""
    from_plus = steady_state_response(params, coeffs, detuning, side="+")
    from_minus = steady_state_response(params, coeffs, detuning, side="-")
    return ScatteringResult(
        r_plus=from_plus.out_minus,
        r_minus=from_minus.out_plus,
        t_plus=from_plus.out_plus,
        t_minus=from_minus.out_minus,
    )


def efficiency_from_params(params: InterfaceParams) -> float:
    """Interface efficiency Gamma_q / (Gamma_q + gamma_loss)."""
    total = params.coupling_rate + params.loss_rate
    if total <= 0:
        raise ValueError("efficiency undefined: both rates are zero")
    return params.coupling_rate / total


def efficiency_from_scattering(scattering: ScatteringResult,
                               coeffs: ModeCoefficients,
                               side: str = "+") -> complex:
    """Efficiency from the scattering observables of the chosen input side.

    The value is complex in general; evaluated at resonance the imaginary
    part is a small diagnostic residual and the real part is the physical
    efficiency.
    """
    if side == "+":
        if coeffs.c_plus == 0:
            raise ZeroDivisionError("c_plus is zero on the chosen side")
        ratio = coeffs.c_minus / coeffs.c_plus
        return 0.5 * (1.0 - scattering.t_plus - scattering.r_plus * ratio)
    if side == "-":
        if coeffs.c_minus == 0:
            raise ZeroDivisionError("c_minus is zero on the chosen side")
        ratio = coeffs.c_plus / coeffs.c_minus
        return 0.5 * (1.0 - scattering.t_minus - scattering.r_minus * ratio)
    raise ValueError(f"side must be '+' or '-', got {side!r}")
