"""Closed-form joint outage probability, its worst-case-interference upper
bound, the high-power asymptote and the half-duplex baseline.

Notation used throughout::

    a   = alpha (1 + xi_B) - xi_B          effective uplink share after SIC
    K   = xi_B / (1 + xi_B)                alpha <= K means certain outage
    s   = beta p_C**lam + sigma2_C         noise-plus-RSI at the relay
    u   = theta / (phi_SB P_S)             P(h_SB < theta / P_S) = 1 - e^-u
    K_B = phi_CB p_C a

The first hop and the uplink both depend on h_SB, so their joint success
probability splits over the two power-control branches:

    Q2  = P(gamma_SC >= xi_D, h_SB >= theta/P_S)
    Q1  = P(gamma_CB >= xi_B | h_SB >= theta/P_S)     (interference is theta)
    Q3  = P(gamma_SC >= xi_D | h_SB <  theta/P_S)     (p_S = P_S)
    Q4  = P(gamma_CB >= xi_B, h_SB < theta/P_S)

so that P1 = Q2 Q1 and P2 = Q4 Q3. The second hop factor P3 only involves
h_CD and is independent of the rest.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateInput
from .model import NetworkParams, PowerAllocation, QosTargets, _scalar

EXP_FLOOR = -745.0


def _exp(x):
    """exp with arguments below the double range flushed to exactly 0."""
    x = np.asarray(x, dtype=float)
    return np.where(x < EXP_FLOOR, 0.0, np.exp(np.maximum(x, EXP_FLOOR)))


def alpha_floor(xi_B: float) -> float:
    """K = xi_B / (1 + xi_B); for alpha <= K the uplink can never be decoded."""
    return xi_B / (1.0 + xi_B)


def alpha_branch_point(xi_B: float, xi_D: float) -> float:
    """Split factor at which the two SIC thresholds at the D2D receiver coincide."""
    return (xi_B * xi_D + xi_B) / (xi_B * xi_D + xi_B + xi_D)


@dataclass(frozen=True)
class OutageBreakdown:
    P1: float
    P2: float
    P3: float
    p_out: float

    def __post_init__(self):
        total = np.asarray(self.P1) + np.asarray(self.P2)
        assert np.all((total >= 0) & (total <= 1 + 1e-12))


def outage_terms(params: NetworkParams, alpha, p_C, xi_B: float, xi_D: float) -> dict:
    """All factors of the closed form, broadcasting over ``alpha`` and ``p_C``.

    Entries with ``alpha <= K`` are returned with every success factor 0.
    ``p_C`` must be positive wherever ``alpha > K``.
    """
    alpha = np.asarray(alpha, dtype=float)
    p_C = np.asarray(p_C, dtype=float)
    pr = params
    K = alpha_floor(xi_B)
    live = alpha > K
    if np.any(live & (p_C <= 0)):
        raise DegenerateInput("closed form needs p_C > 0 when alpha > xi_B/(1+xi_B)")

    a = alpha * (1.0 + xi_B) - xi_B
    p = np.where(live, p_C, 1.0)
    a = np.where(live, a, 1.0)
    s = pr.beta * np.power(p, pr.lam) + pr.sigma2_C
    u = pr.theta / (pr.phi_SB * pr.P_S)
    K_B = pr.phi_CB * p * a
    sat_sc = -xi_D * s / (pr.phi_SC * pr.P_S)

    Q2 = pr.phi_SC * pr.theta / (pr.phi_SB * xi_D * s + pr.phi_SC * pr.theta) * _exp(sat_sc - u)
    Q1 = _exp(-xi_B * (pr.theta + pr.sigma2_B) / K_B)
    Q3 = _exp(sat_sc)
    # 1 - exp(-x) via expm1 keeps precision when theta / P_S is tiny
    Q4 = (K_B / (pr.phi_SB * xi_B * pr.P_S + K_B) * _exp(-xi_B * pr.sigma2_B / K_B)
          * -np.expm1(-(pr.theta / pr.P_S) * (xi_B * pr.P_S / K_B + 1.0 / pr.phi_SB)))
    sat_prob = -math.expm1(-u)

    first = alpha <= alpha_branch_point(xi_B, xi_D)
    with np.errstate(divide="ignore"):
        thr = np.where(first, xi_B / (pr.phi_CD * p * a),
                       xi_D / (pr.phi_CD * p * (1.0 - alpha)))
    P3 = _exp(-pr.sigma2_D * thr)

    z = lambda x: np.where(live, x, 0.0)
    return dict(Q1=z(Q1), Q2=z(Q2), Q3=z(Q3), Q4=z(Q4), P3=z(P3),
                sat_prob=sat_prob, inv_prob=math.exp(-u),
                P1=z(Q2 * Q1), P2=z(Q4 * Q3), P2_bound=z(Q3 * Q1 * sat_prob))


def _check(params, alloc, targets):
    alloc.check(params)
    if alloc.p_C <= 0 and alloc.alpha > alpha_floor(targets.xi_B):
        raise DegenerateInput("closed form needs p_C > 0 when alpha > xi_B/(1+xi_B)")


def outage_exact(params: NetworkParams, alloc: PowerAllocation, targets: QosTargets) -> OutageBreakdown:
    _check(params, alloc, targets)
    t = outage_terms(params, alloc.alpha, alloc.p_C, targets.xi_B, targets.xi_D)
    P1, P2, P3 = (_scalar(t[k]) for k in ("P1", "P2", "P3"))
    return OutageBreakdown(P1, P2, P3, 1.0 - (P1 + P2) * P3)


def outage_upper_bound(params: NetworkParams, alloc: PowerAllocation, targets: QosTargets) -> float:
    """Upper bound with the BS interference replaced by theta on both branches."""
    _check(params, alloc, targets)
    t = outage_terms(params, alloc.alpha, alloc.p_C, targets.xi_B, targets.xi_D)
    return _scalar(1.0 - (t["P1"] + t["P2_bound"]) * t["P3"])


def outage_exact_grid(params, alpha, p_C, xi_B, xi_D):
    t = outage_terms(params, alpha, p_C, xi_B, xi_D)
    return 1.0 - (t["P1"] + t["P2"]) * t["P3"]


def outage_bound_grid(params, alpha, p_C, xi_B, xi_D):
    t = outage_terms(params, alpha, p_C, xi_B, xi_D)
    return 1.0 - (t["P1"] + t["P2_bound"]) * t["P3"]


def outage_asymptotic(params: NetworkParams, targets: QosTargets, p_C) -> float:
    """Large-p_C approximation ``1 - (1 - e^-u) exp(-xi_D beta p_C^lam / (phi_SC P_S))``.

    Only the saturated-DT branch survives, the receiver noise at the relay is
    dropped, and the result does not depend on alpha. Note that this
    expression neglects the successful channel-inversion term, which for
    lam = 0 tends to a positive constant; the exact outage then stays strictly
    below this value at any finite power.
    """
    p_C = np.asarray(p_C, dtype=float)
    if np.any(p_C <= 0):
        raise DegenerateInput("asymptote needs p_C > 0")
    u = params.theta / (params.phi_SB * params.P_S)
    return _scalar(1.0 - (-math.expm1(-u)) * _exp(
        -targets.xi_D * params.beta * np.power(p_C, params.lam) / (params.phi_SC * params.P_S)))


def asymptote_residual(params: NetworkParams, targets: QosTargets) -> float:
    """lam = 0 limit of (asymptote - exact) as p_C grows: the channel-inversion
    success term plus the sigma2_C correction of the saturated term."""
    pr, xi_D = params, targets.xi_D
    s = pr.beta + pr.sigma2_C
    u = pr.theta / (pr.phi_SB * pr.P_S)
    A = pr.phi_SC * pr.theta / (pr.phi_SB * xi_D * s + pr.phi_SC * pr.theta) * math.exp(
        -xi_D * s / (pr.phi_SC * pr.P_S) - u)
    sat = -math.expm1(-u)
    return A + sat * (math.exp(-xi_D * s / (pr.phi_SC * pr.P_S))
                      - math.exp(-xi_D * pr.beta / (pr.phi_SC * pr.P_S)))


@dataclass(frozen=True)
class LinkOutages:
    uplink: float
    d2d: float
    joint: float


def link_outages(params: NetworkParams, alloc: PowerAllocation, targets: QosTargets) -> LinkOutages:
    """Per-link outage split of the same closed form.

    The uplink event is gamma_CB < xi_B. The D2D event is failure of the first
    hop or of either SIC stage at the D2D receiver.
    """
    _check(params, alloc, targets)
    t = outage_terms(params, alloc.alpha, alloc.p_C, targets.xi_B, targets.xi_D)
    up = t["inv_prob"] * t["Q1"] + t["Q4"]
    d2d = (t["Q2"] + t["sat_prob"] * t["Q3"]) * t["P3"]
    joint = 1.0 - (t["P1"] + t["P2"]) * t["P3"]
    return LinkOutages(_scalar(1.0 - up), _scalar(1.0 - d2d), _scalar(joint))


# ------------------------------------------------------------------ HD

def hd_transform(params: NetworkParams, targets: QosTargets) -> tuple[NetworkParams, QosTargets]:
    """Half-duplex baseline as an equivalent FD problem.

    The relay listens and transmits in two equal orthogonal phases: no RSI
    (beta = 0), and each link must carry twice its target rate over half the
    time, which maps xi_i to 2**(2 eta_i) - 1. Topology, DT power control and
    decoding order are unchanged, including the DT interference at the BS.
    """
    return replace(params, beta=0.0), QosTargets(2.0 * targets.eta_B, 2.0 * targets.eta_D)


def hd_outage_exact(params: NetworkParams, alloc: PowerAllocation, targets: QosTargets) -> float:
    hp, ht = hd_transform(params, targets)
    return outage_exact(hp, alloc, ht).p_out


def hd_baseline_outage(params: NetworkParams, alloc: PowerAllocation, targets: QosTargets,
                       trials: int, seed: int = 0, workers: int = 1) -> float:
    """Monte Carlo estimate of the half-duplex joint outage (see hd_transform)."""
    from .montecarlo import estimate_joint_outage

    hp, ht = hd_transform(params, targets)
    return estimate_joint_outage(hp, alloc, ht, trials, seed, workers=workers).mean
