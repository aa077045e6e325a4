"""Max-min rate power allocation for one channel state.

Let p_bar be the CU power at which the first hop rate equals the full-power
relayed rate (alpha = 0), i.e. the root of

    F2(x) = h_CD beta x**(1+lam) + h_CD sigma2_C x - sigma2_D p_S h_SC.

Case 1 (p_bar < P_C): for p >= p_bar the split

    alpha_bar(p) = 1 - sigma2_D p_S h_SC / (s(p) p h_CD)

equalises R_CD,S with R_SC, and R_B(alpha_bar(p), p) increases in p while
R_SC decreases. Their crossing p_breve is the optimum if it lies inside
[p_bar, P_C]. If R_B is still below R_SC at P_C, the power is fixed at the
budget and alpha is raised beyond alpha_bar(P_C) until R_B meets R_CD,S.

Case 2 (p_bar >= P_C): full power, and alpha balances R_B with R_CD,S.

All sign tests compare SINRs, avoiding log1p cancellation.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from . import model
from .errors import DegenerateChannel
from .model import ChannelState, NetworkParams, PowerAllocation
from .numerics import Interval, bisect

ROOT_TOL = 1e-15


class MaxMinCase(enum.Enum):
    Case1_LimitedBySC = "Case1_LimitedBySC"
    Case1_Balanced = "Case1_Balanced"
    Case1_LimitedByB = "Case1_LimitedByB"
    Case2_Balanced = "Case2_Balanced"
    Degenerate = "Degenerate"


@dataclass(frozen=True)
class MaxMinSolution:
    alpha_star: float
    p_C_star: float
    R_min_star: float
    case_taken: MaxMinCase
    p_C_bar: float = float("nan")


def _relay_load(params, ch):
    return params.sigma2_D * model.dt_transmit_power(params, ch.h_SB) * ch.h_SC


def pc_bar(params: NetworkParams, ch: ChannelState) -> float:
    c = _relay_load(params, ch)
    if ch.h_CD == 0 or c == 0:
        raise DegenerateChannel("p_bar undefined when h_CD = 0 or p_S h_SC = 0")
    h, b, lam = ch.h_CD, params.beta, params.lam

    def F2(x):
        return h * b * x ** (1.0 + lam) + h * params.sigma2_C * x - c

    # either term alone reaching c bounds the root from above
    hi = c / (h * params.sigma2_C)
    if b > 0:
        hi = min(hi, (c / (h * b)) ** (1.0 / (1.0 + lam)))
    # pad against rounding in F2(hi), which is ~0 when one term dominates
    return bisect(F2, Interval(0.0, hi * (1.0 + 1e-9)), tol=ROOT_TOL)


def alpha_bar(params: NetworkParams, ch: ChannelState, p_C: float) -> float:
    s = params.beta * p_C ** params.lam + params.sigma2_C
    a = 1.0 - _relay_load(params, ch) / (s * p_C * ch.h_CD)
    return min(max(a, 0.0), 1.0)


def _sinr(params, ch, alpha, p):
    return model.sinr_bundle(params, ch, PowerAllocation(alpha, p))


def _balance_alpha(params, ch, p, lo):
    """alpha in [lo, 1] where gamma_CB = gamma_CD,S at power p."""
    def F4(a):
        g = _sinr(params, ch, a, p)
        return g.gamma_CB - g.gamma_CDS
    if lo >= 1.0:
        return 1.0
    return bisect(F4, Interval(lo, 1.0), tol=ROOT_TOL)


def _solution(params, ch, alpha, p, case, p_bar=float("nan")):
    rb = model.rate_bundle(params, ch, PowerAllocation(alpha, p))
    return MaxMinSolution(alpha, p, rb.R_min, case, p_bar)


def solve_maxmin(params: NetworkParams, ch: ChannelState) -> MaxMinSolution:
    P = params.P_C
    if ch.h_CD == 0 or _relay_load(params, ch) == 0:
        # the D2D link cannot carry anything; give everything to the uplink
        return _solution(params, ch, 1.0, P, MaxMinCase.Degenerate)

    p_bar = pc_bar(params, ch)
    if p_bar >= P:
        alpha = _balance_alpha(params, ch, P, 0.0)
        return _solution(params, ch, alpha, P, MaxMinCase.Case2_Balanced, p_bar)

    def F3(p):
        g = _sinr(params, ch, alpha_bar(params, ch, p), p)
        return g.gamma_CB - g.gamma_SC

    if F3(p_bar) >= 0:
        return _solution(params, ch, alpha_bar(params, ch, p_bar), p_bar,
                         MaxMinCase.Case1_LimitedBySC, p_bar)
    if F3(P) <= 0:
        lo = alpha_bar(params, ch, P)
        alpha = _balance_alpha(params, ch, P, lo)
        return _solution(params, ch, alpha, P, MaxMinCase.Case1_LimitedByB, p_bar)
    p = bisect(F3, Interval(p_bar, P), tol=ROOT_TOL)
    return _solution(params, ch, alpha_bar(params, ch, p), p, MaxMinCase.Case1_Balanced, p_bar)
