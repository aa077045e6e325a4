"""Power allocation minimising the upper bound on the joint outage.

With the worst-case interference bound the success probability factorises as

    j(p) exp(-G p**lam - H / p - I),   j(p) = E / (C p**lam + D) + F,

where only H depends on alpha. Minimising H over alpha gives a split that
does not depend on p_C; the optimal p_C then follows from the sign of a
generalized polynomial Q(p) which has the sign of d(bound)/dp.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .analysis import alpha_branch_point, alpha_floor, outage_upper_bound
from .model import NetworkParams, PowerAllocation, QosTargets
from .numerics import Interval, bisect, bracket_upward

ALPHA_MARGIN = 1e-12
SEARCH_FACTOR = 1e3


class AlphaBranch(enum.Enum):
    AlphaFirstBranch = "AlphaFirstBranch"
    AlphaInteriorRoot = "AlphaInteriorRoot"


class PcCase(enum.Enum):
    NoRoot_FullPower = "NoRoot_FullPower"
    RootOutside_FullPower = "RootOutside_FullPower"
    RootInside = "RootInside"


@dataclass(frozen=True)
class OutageOptSolution:
    alpha_opt: float
    p_C_opt: float
    p_out_bound: float
    branch: AlphaBranch
    pc_case: PcCase


@dataclass(frozen=True)
class BoundConstants:
    C: float
    D: float
    E: float
    F: float
    G: float
    H: float
    I: float
    lam: float

    def q(self, p: float) -> float:
        C, D, E, F, G, H, lam = self.C, self.D, self.E, self.F, self.G, self.H, self.lam
        y = p ** lam
        yp = y * p
        return (lam * C * C * F * G * yp * y * y
                + lam * C * (2 * D * F + E) * G * yp * y
                + lam * (D * D * F * G + D * E * G + C * E) * yp
                - C * C * F * H * y * y
                - C * (2 * D * F + E) * H * y
                - D * (D * F + E) * H)

    def bound(self, p: float) -> float:
        y = p ** self.lam
        j = self.E / (self.C * y + self.D) + self.F
        return 1.0 - j * math.exp(-self.G * y - self.H / p - self.I)


def alpha_candidates(params: NetworkParams, targets: QosTargets) -> tuple[float, float]:
    xi_B, xi_D = targets.xi_B, targets.xi_D
    K = alpha_floor(xi_B)
    M = math.sqrt(params.phi_CD * (params.theta + params.sigma2_B) * K
                  / (params.phi_CB * xi_D * params.sigma2_D))
    return alpha_branch_point(xi_B, xi_D), (K + M) / (1.0 + M)


def alpha_objective(params: NetworkParams, targets: QosTargets, alpha: float) -> float:
    """p_C * H(alpha): the only alpha-dependent part of the bound exponent."""
    xi_B, xi_D = targets.xi_B, targets.xi_D
    a = alpha * (1 + xi_B) - xi_B
    up = xi_B * (params.theta + params.sigma2_B) / (params.phi_CB * a)
    if alpha <= alpha_branch_point(xi_B, xi_D):
        return up + xi_B * params.sigma2_D / (params.phi_CD * a)
    return up + xi_D * params.sigma2_D / (params.phi_CD * (1.0 - alpha))


def optimal_alpha(params: NetworkParams, targets: QosTargets) -> tuple[float, AlphaBranch]:
    a1, a2 = alpha_candidates(params, targets)
    if a2 > a1:
        return a2, AlphaBranch.AlphaInteriorRoot
    return a1, AlphaBranch.AlphaFirstBranch


def bound_constants(params: NetworkParams, targets: QosTargets, alpha: float) -> BoundConstants:
    pr, xi_D = params, targets.xi_D
    u = pr.theta / (pr.phi_SB * pr.P_S)
    return BoundConstants(
        C=pr.phi_SB * xi_D * pr.beta,
        D=pr.phi_SB * xi_D * pr.sigma2_C + pr.phi_SC * pr.theta,
        E=pr.phi_SC * pr.theta * math.exp(-u),
        F=-math.expm1(-u),
        G=xi_D * pr.beta / (pr.phi_SC * pr.P_S),
        H=alpha_objective(params, targets, alpha),
        I=xi_D * pr.sigma2_C / (pr.phi_SC * pr.P_S),
        lam=pr.lam,
    )


def optimal_pc(params: NetworkParams, targets: QosTargets, alpha: float) -> tuple[float, PcCase]:
    K = alpha_floor(targets.xi_B)
    if not (K + ALPHA_MARGIN < alpha < 1.0):
        raise ValueError(f"alpha must lie strictly inside ({K!r}, 1), got {alpha!r}")
    consts = bound_constants(params, targets, alpha)
    limit = SEARCH_FACTOR * params.P_C
    start = params.P_C * 1e-12
    if consts.q(start) >= 0:
        cell = Interval(0.0, start)
    else:
        cell = bracket_upward(consts.q, start, limit=limit)
    if cell is None:
        return params.P_C, PcCase.NoRoot_FullPower
    root = bisect(consts.q, cell, tol=1e-13)
    if root > params.P_C:
        return params.P_C, PcCase.RootOutside_FullPower
    return root, PcCase.RootInside


def solve_min_outage(params: NetworkParams, targets: QosTargets) -> OutageOptSolution:
    alpha, branch = optimal_alpha(params, targets)
    p, case = optimal_pc(params, targets, alpha)
    value = outage_upper_bound(params, PowerAllocation(alpha, p), targets)
    return OutageOptSolution(alpha, p, value, branch, case)
