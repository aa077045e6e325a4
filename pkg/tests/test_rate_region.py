import math

import numpy as np
import pytest

from fdd2d import model
from fdd2d.errors import InfeasibleTarget
from fdd2d.model import ChannelState, PowerAllocation
from fdd2d.presets import fixed_gain_channels, fixed_gain_params
from fdd2d.rate_region import f1, max_uplink_rate, pareto_boundary, pareto_point

from conftest import random_channels, random_instance, unit_params


def constrained_grid_max(pr, ch, R, n=1000):
    a = np.linspace(0, 1, n)[:, None]
    p = np.linspace(0, pr.P_C, n)[None, :]
    g_SC, _, g_CDS, g_CB = model._sinrs(pr, ch.h_SB, ch.h_SC, ch.h_CB, ch.h_CD, a, p)
    rd = model.rate(np.minimum(np.broadcast_to(g_SC, g_CB.shape), g_CDS))
    ok = model.rate(g_CB) >= R
    return float(rd[ok].max()) if ok.any() else -math.inf


def test_max_uplink_rate_examples():
    pr = unit_params(P_C=10.0, theta=0.1, P_S=1.0)
    assert max_uplink_rate(pr, ChannelState(0.5, 1.0, 0.0, 1.0)) == 0.0
    # P_C h_CB = I + sigma2_B  ->  exactly one bit
    ch = ChannelState(0.5, 1.0, (0.1 + 1.0) / 10.0, 1.0)
    assert max_uplink_rate(pr, ch) == pytest.approx(1.0, rel=1e-15)


def test_max_uplink_rate_consistent_with_model(rng):
    for _ in range(200):
        pr, _, _ = random_instance(rng)
        ch = random_channels(pr, rng)
        rb = model.rate_bundle(pr, ch, PowerAllocation(1.0, pr.P_C))
        assert max_uplink_rate(pr, ch) == rb.R_B


def test_extreme_points():
    pr, ch = fixed_gain_params(0.0), fixed_gain_channels()
    top = pareto_point(pr, ch, max_uplink_rate(pr, ch))
    assert top.R_D == 0.0 and top.alpha == 1.0 and top.p_C == pr.P_C
    zero = pareto_point(pr, ch, 0.0)
    assert zero.alpha == 0.0
    # alpha = 0: R_D is the best balance of the two hops over p_C
    p = np.linspace(0, pr.P_C, 200_001)
    g_SC, _, g_CDS, _ = model._sinrs(pr, ch.h_SB, ch.h_SC, ch.h_CB, ch.h_CD, 0.0, p)
    assert zero.R_D >= model.rate(np.minimum(g_SC, g_CDS).max()) - 1e-9


def test_infeasible_target():
    pr, ch = fixed_gain_params(0.0), fixed_gain_channels()
    with pytest.raises(InfeasibleTarget):
        pareto_point(pr, ch, max_uplink_rate(pr, ch) + 0.01)
    with pytest.raises(ValueError):
        pareto_point(pr, ch, -1.0)


def test_boundary_two_points_are_extremes():
    pr, ch = fixed_gain_params(0.5), fixed_gain_channels()
    pts = pareto_boundary(pr, ch, 2)
    assert [p.R_B_target for p in pts] == [0.0, max_uplink_rate(pr, ch)]
    assert pts[-1].R_D == 0.0
    with pytest.raises(ValueError):
        pareto_boundary(pr, ch, 1)


def test_geometric_spacing():
    pr, ch = fixed_gain_params(0.5), fixed_gain_channels()
    pts = pareto_boundary(pr, ch, 12, geometric=True)
    r = np.array([p.R_B_target for p in pts])
    assert r[0] == 0.0 and r[-1] == max_uplink_rate(pr, ch)
    assert np.all(np.diff(r) > 0)
    assert r[-2] >= 0.999 * r[-1] and r[len(r) // 2] >= 0.9 * r[-1]


def test_reproduces_targets_and_balance(rng):
    n = 0
    while n < 300:
        pr, _, _ = random_instance(rng)
        ch = random_channels(pr, rng)
        rmax = max_uplink_rate(pr, ch)
        if rmax < 1e-6:
            continue
        R = float(rng.uniform(0, rmax))
        pt = pareto_point(pr, ch, R)
        rb = model.rate_bundle(pr, ch, PowerAllocation(pt.alpha, pt.p_C))
        assert rb.R_B == pytest.approx(R, abs=1e-6)
        assert rb.R_D == pt.R_D
        if pt.case == "root":
            assert abs(rb.R_SC - rb.R_CDS) <= 1e-6
        n += 1


def test_f1_strictly_increasing(rng):
    for _ in range(300):
        pr, _, _ = random_instance(rng)
        ch = random_channels(pr, rng)
        rmax = max_uplink_rate(pr, ch)
        R = float(rng.uniform(0, rmax))
        lo = (model.dt_interference(pr, ch.h_SB) + pr.sigma2_B) * math.expm1(R * math.log(2)) / ch.h_CB
        if lo >= pr.P_C:
            continue
        xs = np.linspace(lo, pr.P_C, 200)
        vals = np.array([f1(pr, ch, R, x, lo) for x in xs])
        assert np.all(np.diff(vals) > 0)


@pytest.mark.parametrize("lam", [0.0, 0.5])
def test_interior_point_matches_grid(lam):
    pr, ch = fixed_gain_params(lam), fixed_gain_channels()
    rmax = max_uplink_rate(pr, ch)
    for frac in (0.2, 0.5, 0.8, 0.95):
        R = frac * rmax
        pt = pareto_point(pr, ch, R)
        assert pt.R_D >= constrained_grid_max(pr, ch, R) - 1e-9


def test_grid_oracle_random_geometry(rng):
    for _ in range(20):
        pr, _, _ = random_instance(rng)
        ch = random_channels(pr, rng)
        R = float(rng.uniform(0, max_uplink_rate(pr, ch)))
        pt = pareto_point(pr, ch, R)
        assert pt.R_D >= constrained_grid_max(pr, ch, R, n=600) - 1e-9


def test_boundary_nonincreasing_and_lambda_ordering():
    ch = fixed_gain_channels()
    b0 = pareto_boundary(fixed_gain_params(0.0), ch, 20)
    b5 = pareto_boundary(fixed_gain_params(0.5), ch, 20)
    # near alpha = 1 the split carries ~1e-16 absolute error, so 1 - alpha (and
    # R_CD,S) is only good to ~1e-6 relative when 1 - alpha ~ 1e-10
    for b in (b0, b5):
        rd = [p.R_D for p in b]
        assert all(y <= x + 1e-6 for x, y in zip(rd, rd[1:]))
    # same uplink maximum, lam = 0 region encloses lam = 0.5
    assert [p.R_B_target for p in b0] == [p.R_B_target for p in b5]
    assert all(p.R_D >= q.R_D - 1e-12 for p, q in zip(b0, b5))
