import math
import warnings

import numpy as np
import pytest

from biarray.bilayer import BilayerConfig, effective_params
from biarray.designs import (
    BRAGG_BENCHMARKS,
    escape_estimate,
    find_resonant_sets,
    resonant_curve,
)
from biarray.lattice import gamma_1d, make_geometry


def residual(kind, a, az, q, shift=(0.0, 0.0)):
    cfg = BilayerConfig(layer=make_geometry(kind, a), interlayer_spacing=az,
                        lateral_shift=shift)
    mode = effective_params(cfg, q)
    return mode.diffraction_loss / gamma_1d(cfg.layer)


def test_curve_degenerate_branch_rejected():
    with pytest.raises(ValueError):
        resonant_curve("square", math.pi, 0)
    with pytest.raises(ValueError):
        resonant_curve("triangular", math.pi, 0)


def test_curve_domain_guard():
    curve = resonant_curve("square", 0.0, 0)
    with pytest.raises(ValueError):
        curve.a_of_az(curve.az_min * 0.99)


def test_curve_starts_at_window_edge():
    # at a_z -> infinity the curve approaches the shell-opening spacing
    for kind, edge in (("square", 1.0), ("triangular", 2.0 / math.sqrt(3.0))):
        curve = resonant_curve(kind, 0.0, 0)
        assert curve.a_of_az(1e6) == pytest.approx(edge, rel=1e-9)


def test_curve_cancels_first_shell():
    for kind in ("square", "triangular"):
        for q, ncs in ((0.0, (0, 1)), (math.pi, (1, 2))):
            for nc in ncs:
                curve = resonant_curve(kind, q, nc)
                for az, a in curve.sample(25):
                    assert residual(kind, a, az, q) < 1e-12


def test_starred_points_near_curve():
    assert residual("square", 1.28, 0.80, 0.0) < 1e-3
    assert residual("triangular", 1.70, 0.68, 0.0) < 1e-3


def test_sample_count_and_monotonicity():
    curve = resonant_curve("square", 0.0, 1)
    pts = curve.sample(40)
    assert pts.shape == (40, 2)
    # a decreases toward the window edge as a_z grows
    assert np.all(np.diff(pts[:, 1]) < 0)


def test_find_sets_square_shifted():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sets = find_resonant_sets(
            "square", (0.5, 0.5), 0.0,
            (math.sqrt(2.0) + 1e-6, 2.0 - 1e-6), (0.5, 3.0),
        )
    assert sets
    best = min(sets, key=lambda s: abs(s.a - 1.53) + abs(s.az - 1.32))
    assert abs(best.a - 1.53) < 0.02
    assert abs(best.az - 1.32) < 0.02
    assert best.residual < 1e-9


def test_find_sets_triangular_unshifted():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sets = find_resonant_sets(
            "triangular", (0.0, 0.0), math.pi,
            (2.0 + 1e-6, 4.0 / math.sqrt(3.0) - 1e-6), (0.5, 3.0),
        )
    assert sets
    best = min(sets, key=lambda s: abs(s.a - 2.21) + abs(s.az - 2.35))
    assert abs(best.a - 2.21) < 0.02
    assert abs(best.az - 2.35) < 0.02
    assert best.residual < 1e-9


def test_find_sets_rejects_bad_window():
    with pytest.raises(ValueError):
        find_resonant_sets("square", (0.5, 0.5), 0.0, (0.5, 1.0), (0.5, 3.0))


def test_find_sets_rejects_degeneracy_breaking_shift():
    with pytest.raises(ValueError):
        find_resonant_sets("square", (0.3, 0.0), 0.0,
                           (math.sqrt(2.0) + 1e-6, 2.0 - 1e-6), (0.5, 3.0))


def test_bragg_benchmarks_cancel_both_shells():
    for kind, bench in BRAGG_BENCHMARKS.items():
        res = residual(kind, bench["a"], bench["az"], bench["q"],
                       bench["lateral_shift"])
        assert res < 1e-3


def test_escape_estimate_scaling():
    geom = make_geometry("square", 1.28)
    small = escape_estimate(geom, 0.8, 400, (1, 0))
    large = escape_estimate(geom, 0.8, 1600, (1, 0))
    # bounce count scales linearly with N, inefficiency scale inversely
    assert large.bounces == pytest.approx(4.0 * small.bounces)
    assert large.inefficiency_scale == pytest.approx(
        small.inefficiency_scale / 4.0)


def test_escape_estimate_rejects_evanescent():
    geom = make_geometry("square", 0.8)
    with pytest.raises(ValueError):
        escape_estimate(geom, 0.8, 400, (1, 0))
