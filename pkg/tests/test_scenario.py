import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fdd2d.errors import InvalidGeometry
from fdd2d.scenario import (CellLayout, Geometry, RadioConfig, build_params, path_gain,
                            random_drop, reference_geometry)
from fdd2d.units import dbm_to_mw, mw_to_dbm


def test_dbm_conversion():
    assert dbm_to_mw(23.0) == pytest.approx(199.526, abs=1e-3)


def test_noise_power():
    assert mw_to_dbm(RadioConfig().sigma2_mW) == pytest.approx(-121.447, abs=1e-3)


def test_distance_doubling():
    assert path_gain(200.0) / path_gain(100.0) == pytest.approx(2 ** -3.8, rel=1e-12)
    assert 2 ** -3.8 == pytest.approx(0.0718, abs=1e-4)


def test_friis_anchor():
    assert path_gain(1.0) == pytest.approx((299792458 / (4 * math.pi * 2e9)) ** 2, rel=1e-12)


def test_build_params_reference():
    p = build_params(reference_geometry(), RadioConfig())
    assert p.P_S == pytest.approx(199.526, abs=1e-3)
    assert p.theta == pytest.approx(10 ** -9.2)
    assert p.phi_SB == pytest.approx(path_gain(30.0))
    assert p.phi_CD == pytest.approx(path_gain(75.0))
    assert p.sigma2_B == p.sigma2_C == p.sigma2_D
    # beta read against noise: RSI / noise = beta (p / noise)^lam
    s = p.sigma2_C
    assert p.beta * p.P_C ** p.lam / s == pytest.approx((p.P_C / s) ** p.lam, rel=1e-12)


def test_beta_literal_units():
    p = build_params(reference_geometry(), RadioConfig(beta=0.3, beta_unit="mW"))
    assert p.beta == 0.3
    with pytest.raises(ValueError):
        RadioConfig(beta_unit="dB")


def test_coincident_nodes_rejected():
    g = Geometry((0, 0), (50, 0), (50, 0), (200, 0))
    with pytest.raises(InvalidGeometry):
        build_params(g, RadioConfig())
    with pytest.raises(InvalidGeometry):
        path_gain(0.0)


def test_geometry_invariants():
    with pytest.raises(InvalidGeometry):
        Geometry((0, 0), (10, 0), (50, 0), (200, 0))  # CU inside the exclusion disc
    with pytest.raises(InvalidGeometry):
        Geometry((0, 0), (100, 0), (50, 0), (200, 0), pathloss_exponent=2.0)
    with pytest.raises(InvalidGeometry):
        Geometry((0, 0), (100, 0), (50, 0), (200, 0), d2d_distance=120.0)
    assert Geometry((0, 0), (100, 0), (50, 0), (200, 0)).d2d_distance == 150.0


def test_drop_determinism():
    assert random_drop(CellLayout(), 17) == random_drop(CellLayout(), 17)
    assert random_drop(CellLayout(), 17) != random_drop(CellLayout(), 18)


def test_drops_respect_layout():
    lay = CellLayout()
    for seed in range(10_000):
        g = random_drop(lay, seed)
        for pt in (g.S, g.C, g.D):
            r = math.hypot(*pt)
            assert lay.min_bs_distance <= r <= lay.cell_radius
        assert lay.d2d_min <= g.d2d_distance <= lay.d2d_max
        mid = (0.5 * (g.S[0] + g.D[0]), 0.5 * (g.S[1] + g.D[1]))
        assert math.dist(g.C, mid) <= 0.5 * g.d2d_distance + 1e-9


def test_ring_layout_gives_up():
    lay = CellLayout(cell_radius=200.0, min_bs_distance=200.0)
    with pytest.raises(InvalidGeometry):
        random_drop(lay, 0, max_attempts=200)


def test_bad_layouts():
    with pytest.raises(InvalidGeometry):
        CellLayout(min_bs_distance=300.0)
    with pytest.raises(InvalidGeometry):
        CellLayout(d2d_min=400.0)
    with pytest.raises(InvalidGeometry):
        CellLayout(pathloss_exponent=1.5)


@given(st.floats(-150, 60))
def test_unit_round_trip(x):
    assert abs(mw_to_dbm(dbm_to_mw(x)) - x) <= 1e-9


@given(st.integers(0, 2**31 - 1), st.floats(0, 30), st.floats(-1, 1), st.floats(0, 1))
def test_built_params_are_valid(seed, p_dbm, log_beta, lam):
    g = random_drop(CellLayout(), seed)
    p = build_params(g, RadioConfig(P_C_dBm=p_dbm, beta=10 ** log_beta, lam=lam))
    assert all(v > 0 for v in (p.phi_SB, p.phi_SC, p.phi_CB, p.phi_CD, p.P_C, p.P_S, p.beta))
    assert np.isfinite([p.phi_SB, p.beta, p.P_C]).all()
