import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biarray.lattice import (
    K,
    GrazingOrderError,
    LayerGeometry,
    evanescent_orders,
    gamma_1d,
    make_geometry,
    order_coupling,
    radiative_orders,
    reciprocal_vector,
)


def test_gamma_1d_square_values():
    # 3 / (4 pi sin(psi) a^2)
    geom = LayerGeometry.square(0.8)
    assert gamma_1d(geom) == pytest.approx(3.0 / (4.0 * math.pi * 0.64))


def test_gamma_1d_triangular_denser():
    sq = LayerGeometry.square(0.8)
    tr = LayerGeometry.triangular(0.8)
    assert gamma_1d(tr) > gamma_1d(sq)


def test_make_geometry_kinds():
    assert make_geometry("square", 1.0).lattice_angle == math.pi / 2
    assert make_geometry("triangular", 1.0).lattice_angle == pytest.approx(math.pi / 3)
    with pytest.raises(ValueError):
        make_geometry("hexagonal", 1.0)


def test_invalid_geometry():
    with pytest.raises(ValueError):
        LayerGeometry(-1.0)
    with pytest.raises(ValueError):
        LayerGeometry(1.0, lattice_angle=math.pi)


def test_reciprocal_vector_square():
    geom = LayerGeometry.square(0.5)
    q = reciprocal_vector(geom, (1, 0))
    assert q == pytest.approx([2.0 * math.pi / 0.5, 0.0])
    q = reciprocal_vector(geom, (0, 1))
    assert q == pytest.approx([0.0, 2.0 * math.pi / 0.5])


def test_reciprocal_vector_is_dual_basis():
    # Q_m . a_n = 2 pi m_n for the direct-lattice basis vectors
    geom = LayerGeometry.triangular(0.7)
    psi = geom.lattice_angle
    a1 = np.array([geom.spacing, 0.0])
    a2 = geom.spacing * np.array([math.cos(psi), math.sin(psi)])
    for m in [(1, 0), (0, 1), (2, -1), (-1, 3)]:
        q = reciprocal_vector(geom, m)
        assert np.dot(q, a1) == pytest.approx(2.0 * math.pi * m[0], abs=1e-12)
        assert np.dot(q, a2) == pytest.approx(2.0 * math.pi * m[1], abs=1e-12)


def test_zeroth_order_is_gamma_1d():
    geom = LayerGeometry.square(0.8)
    order = order_coupling(geom, (0, 0))
    assert order.radiative
    assert order.kz == pytest.approx(K)
    assert order.coupling.real == pytest.approx(gamma_1d(geom))
    assert order.coupling.imag == 0.0


def test_radiative_order_coupling_value():
    # |Q|/k = 1/a for the square first shell; circular polarization halves |Q.e|^2
    a = 1.28
    geom = LayerGeometry.square(a)
    order = order_coupling(geom, (1, 0))
    ratio = 1.0 / a
    kz_over_k = math.sqrt(1.0 - ratio**2)
    expect = gamma_1d(geom) * (1.0 - ratio**2 / 2.0) / kz_over_k
    assert order.radiative
    assert order.coupling.real == pytest.approx(expect)


def test_evanescent_order_imaginary_coupling():
    geom = LayerGeometry.square(0.8)
    order = order_coupling(geom, (1, 0))
    assert not order.radiative
    assert order.kz.real == 0.0 and order.kz.imag > 0.0
    assert order.coupling.real == 0.0


def test_grazing_order_raises():
    geom = LayerGeometry.square(1.0)
    with pytest.raises(GrazingOrderError):
        order_coupling(geom, (1, 0))


def test_radiative_orders_subwavelength_only_zero():
    geom = LayerGeometry.square(0.9)
    orders = radiative_orders(geom)
    assert [o.index for o in orders] == [(0, 0)]


def test_radiative_orders_counts():
    # square a in (1, sqrt(2)): one extra shell of 4; a in (sqrt(2), 2): two shells
    assert len(radiative_orders(LayerGeometry.square(1.2))) == 5
    assert len(radiative_orders(LayerGeometry.square(1.6))) == 9
    # triangular first shell has 6 members
    assert len(radiative_orders(LayerGeometry.triangular(1.3))) == 7


def test_radiative_orders_sorted_by_shell():
    orders = radiative_orders(LayerGeometry.square(1.6), exclude_zero=True)
    norms = [np.hypot(*o.q_vec) for o in orders]
    assert norms == sorted(norms)


def test_evanescent_orders_cutoff_shrinks_set():
    geom = LayerGeometry.square(0.8)
    many = evanescent_orders(geom, 0.3, cutoff=1e-14)
    few = evanescent_orders(geom, 3.0, cutoff=1e-14)
    assert len(many) > len(few) > 0


@settings(max_examples=50, deadline=None)
@given(
    a=st.floats(0.3, 2.0),
    m1=st.integers(-3, 3),
    m2=st.integers(-3, 3),
)
def test_order_symmetry_under_negation(a, m1, m2):
    # Gamma_m depends on |Q| only, so m and -m are degenerate
    geom = LayerGeometry.square(a)
    try:
        plus = order_coupling(geom, (m1, m2))
        minus = order_coupling(geom, (-m1, -m2))
    except GrazingOrderError:
        return
    assert abs(plus.coupling - minus.coupling) < 1e-12 * max(1.0, abs(plus.coupling))
    assert plus.radiative == minus.radiative
