import math

import numpy as np
import pytest

from biarray.bilayer import (
    BilayerConfig,
    analytic_scattering,
    effective_params,
    efficiency_map,
    interlayer_kernel,
    mode_coefficients,
)
from biarray.iface1d import efficiency_from_params
from biarray.lattice import K, gamma_1d, make_geometry


def cfg(kind="square", a=0.8, az=1.0, shift=(0.0, 0.0), gs=0.0):
    return BilayerConfig(
        layer=make_geometry(kind, a), interlayer_spacing=az,
        lateral_shift=shift, individual_loss=gs,
    )


def test_config_validation():
    with pytest.raises(ValueError):
        cfg(az=-0.5)
    with pytest.raises(ValueError):
        cfg(gs=-0.1)


def test_bragg_spacing_bright_dark():
    # a_z = lambda: in-phase mode fully bright, out-of-phase fully dark
    c = cfg(az=1.0)
    g1d = gamma_1d(c.layer)
    bright = effective_params(c, 0.0)
    dark = effective_params(c, math.pi)
    assert bright.params.coupling_rate == pytest.approx(2.0 * g1d)
    assert dark.params.coupling_rate == pytest.approx(0.0, abs=1e-12)


def test_half_wavelength_swaps_modes():
    c = cfg(az=0.5)
    assert effective_params(c, 0.0).params.coupling_rate == pytest.approx(0.0, abs=1e-12)
    assert effective_params(c, math.pi).params.coupling_rate == pytest.approx(
        2.0 * gamma_1d(c.layer))


def test_coupling_sum_rule():
    rng = np.random.default_rng(11)
    for _ in range(200):
        c = cfg(a=rng.uniform(0.3, 0.95), az=rng.uniform(0.05, 3.0),
                shift=(rng.uniform(0, 1), rng.uniform(0, 1)))
        g1d = gamma_1d(c.layer)
        total = sum(effective_params(c, q).params.coupling_rate
                    for q in (0.0, math.pi))
        assert abs(total - 2.0 * g1d) < 1e-12 * g1d


def test_subwavelength_no_diffraction_loss():
    c = cfg(a=0.9, az=0.7)
    for q in (0.0, math.pi):
        assert effective_params(c, q).diffraction_loss == 0.0


def test_superwavelength_diffraction_loss_positive():
    c = cfg(a=1.28, az=1.0)
    losses = [effective_params(c, q).diffraction_loss for q in (0.0, math.pi)]
    assert max(losses) > 0.0


def test_kernel_eigenvalues_give_effective_rates():
    # the 2x2 kernel has eigenvectors (1, +-1)/sqrt(2); twice the real part of
    # the eigenvalue is the total radiative rate, the imaginary part the shift
    c = cfg(a=1.28, az=0.8, shift=(0.3, 0.1))
    kern = interlayer_kernel(c)
    assert kern[0, 0] == kern[1, 1]
    assert kern[0, 1] == kern[1, 0]
    for q, sign in ((0.0, 1.0), (math.pi, -1.0)):
        lam = kern[0, 0] + sign * kern[0, 1]
        mode = effective_params(c, q)
        total = mode.params.coupling_rate + mode.diffraction_loss
        assert 2.0 * lam.real == pytest.approx(total, abs=1e-10)
        assert lam.imag == pytest.approx(mode.params.collective_shift, abs=1e-10)


def test_mode_coefficients_normalized_and_orthogonal():
    for zc in (0.0, 0.17):
        c0 = mode_coefficients(0.0, zc)
        cpi = mode_coefficients(math.pi, zc)
        overlap = (c0.c_plus * cpi.c_plus.conjugate()
                   + c0.c_minus * cpi.c_minus.conjugate())
        assert abs(overlap) < 1e-12


def test_analytic_scattering_unitary_subwavelength():
    c = cfg(a=0.8, az=0.6)
    for delta in np.linspace(-2, 2, 100):
        sc = analytic_scattering(c, float(delta))
        assert abs(abs(sc.r_plus) ** 2 + abs(sc.t_plus) ** 2 - 1.0) < 1e-10


def test_analytic_scattering_gauge_relation():
    c = cfg(a=0.8, az=0.6)
    shifted = BilayerConfig(layer=c.layer, interlayer_spacing=0.6,
                            gauge_origin=0.23)
    sc = analytic_scattering(shifted, 0.4)
    gauge = np.exp(4j * K * 0.23)
    assert sc.r_plus == pytest.approx(sc.r_minus * gauge, abs=1e-12)
    # transmission is gauge independent
    base = analytic_scattering(c, 0.4)
    assert sc.t_plus == pytest.approx(base.t_plus, abs=1e-12)


def test_scattering_resonant_on_dark_mode_only():
    # at a_z = lambda only q=0 responds; driving at its shifted resonance
    # gives full reflection when lossless
    c = cfg(a=0.8, az=1.0)
    shift = effective_params(c, 0.0).params.collective_shift
    sc = analytic_scattering(c, shift)
    assert abs(sc.r_plus) == pytest.approx(1.0, abs=1e-12)
    assert abs(sc.t_plus) == pytest.approx(0.0, abs=1e-12)


def test_efficiency_from_map_matches_params():
    c = cfg(a=1.28, az=0.8, gs=0.05)
    emap = efficiency_map(c, 0.0, [0.8], [1.28])
    mode = effective_params(c, 0.0)
    assert emap.values[0, 0] == pytest.approx(
        efficiency_from_params(mode.params), abs=1e-12)


def test_efficiency_map_grazing_is_nan():
    c = cfg()
    emap = efficiency_map(c, 0.0, [0.8], [1.0])
    assert math.isnan(emap.values[0, 0])


def test_efficiency_map_rows_order():
    c = cfg()
    emap = efficiency_map(c, 0.0, [0.5, 0.6], [0.8, 0.9])
    rows = list(emap.rows())
    assert len(rows) == 4
    assert rows[0][:2] == (0.5, 0.8)
    assert rows[-1][:2] == (0.6, 0.9)
