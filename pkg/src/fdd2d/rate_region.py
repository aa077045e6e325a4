"""Pareto boundary of the (uplink rate, D2D rate) region for one channel state.

For a target uplink rate R on [0, R_B^max] the CU power must be at least

    p_lo = (I + sigma2_B)(2**R - 1) / h_CB

and the smallest split meeting the target is

    alpha(p) = (1 - 2**-R)(1 + (I + sigma2_B) / (p h_CB)).

With that split, R_SC falls and R_CD,S rises in p, so the D2D rate peaks
where they meet. Their difference has the sign of

    F1(x) = h_CB [2**-R h_CD (x - p_lo) s(x) - p_S h_SC sigma2_D],

with s(x) = beta x**lam + sigma2_C. F1 is strictly increasing on x >= p_lo.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import model
from .errors import InfeasibleTarget
from .model import ChannelState, NetworkParams, PowerAllocation
from .numerics import Interval, bisect

RATE_TOL = 1e-12


@dataclass(frozen=True)
class ParetoPoint:
    R_B_target: float
    alpha: float
    p_C: float
    R_D: float
    case: str = "root"


def max_uplink_rate(params: NetworkParams, ch: ChannelState) -> float:
    interf = model.dt_interference(params, ch.h_SB)
    return model.rate(params.P_C * ch.h_CB / (interf + params.sigma2_B))


def f1(params: NetworkParams, ch: ChannelState, R: float, x: float, p_lo: float | None = None) -> float:
    interf = model.dt_interference(params, ch.h_SB)
    p_S = model.dt_transmit_power(params, ch.h_SB)
    if p_lo is None:
        p_lo = (interf + params.sigma2_B) * math.expm1(R * model.LN2) / ch.h_CB if R > 0 else 0.0
    s = params.beta * x ** params.lam + params.sigma2_C
    return ch.h_CB * (2.0 ** -R * ch.h_CD * (x - p_lo) * s - p_S * ch.h_SC * params.sigma2_D)


def split_for_target(params: NetworkParams, ch: ChannelState, R: float, p_C: float) -> float:
    if R <= 0:
        return 0.0
    interf = model.dt_interference(params, ch.h_SB)
    a = -math.expm1(-R * model.LN2) * (1.0 + (interf + params.sigma2_B) / (p_C * ch.h_CB))
    return min(max(a, 0.0), 1.0)


def _point(params, ch, R, alpha, p_C, case):
    rb = model.rate_bundle(params, ch, PowerAllocation(alpha, p_C))
    return ParetoPoint(R, alpha, p_C, rb.R_D, case)


def pareto_point(params: NetworkParams, ch: ChannelState, R_B_target: float) -> ParetoPoint:
    R_max = max_uplink_rate(params, ch)
    R = float(R_B_target)
    if R < 0:
        raise ValueError("R_B_target must be >= 0")
    if R > R_max + RATE_TOL * max(1.0, R_max):
        raise InfeasibleTarget(f"target {R!r} exceeds R_B^max = {R_max!r}")
    R = min(R, R_max)

    if R == 0.0:
        p_lo = 0.0
    else:
        interf = model.dt_interference(params, ch.h_SB)
        p_lo = (interf + params.sigma2_B) * math.expm1(R * model.LN2) / ch.h_CB
    if R == R_max or p_lo >= params.P_C:
        # the whole budget is needed for the uplink stream
        return _point(params, ch, R, 1.0 if R > 0 else 0.0, params.P_C, "full_uplink")

    g = lambda x: f1(params, ch, R, x, p_lo)
    if g(p_lo) >= 0:
        p, case = p_lo, "lower"
    elif g(params.P_C) <= 0:
        p, case = params.P_C, "budget"
    else:
        p, case = bisect(g, Interval(p_lo, params.P_C), tol=1e-15), "root"
    if p == 0.0:
        # R = 0 and a degenerate first hop: any power works, report the budget
        p = params.P_C
    return _point(params, ch, R, split_for_target(params, ch, R, p), p, case)


def pareto_boundary(params: NetworkParams, ch: ChannelState, n_points: int,
                    geometric: bool = False) -> list[ParetoPoint]:
    """Boundary points on a target grid over [0, R_B^max].

    The grid is uniform in rate; ``geometric=True`` instead packs points
    geometrically towards R_B^max, where the D2D rate falls fastest.
    """
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    R_max = max_uplink_rate(params, ch)
    if geometric:
        gaps = np.geomspace(1.0, 1e-3, n_points - 1)
        targets = np.append(R_max * (1.0 - gaps), R_max)
        targets[0] = 0.0
    else:
        targets = np.linspace(0.0, R_max, n_points)
    return [pareto_point(params, ch, float(r)) for r in targets]
