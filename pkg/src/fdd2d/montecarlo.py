"""Monte Carlo and brute-force oracles.

Trials are processed in fixed-size blocks. Block ``b`` draws from its own
generator seeded by ``SeedSequence(seed, spawn_key=(b,))``, so each block's
samples depend only on (seed, b). Per-block results are integers or are
reduced in block order, which makes every estimate bit-identical for any
worker count.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import model
from .analysis import alpha_floor, outage_bound_grid, outage_exact_grid
from .maxmin import solve_maxmin
from .model import ChannelState, NetworkParams, PowerAllocation, QosTargets

BLOCK = 1 << 16


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_err: float
    trials: int
    seed: int

    @classmethod
    def bernoulli(cls, hits: int, trials: int, seed: int) -> "Estimate":
        if trials < 1:
            raise ValueError("trials must be >= 1")
        m = hits / trials
        return cls(m, math.sqrt(m * (1.0 - m) / trials), trials, seed)


def block_rng(seed: int, block: int, stream: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block, stream)))


def run_blocks(fn, trials: int, seed: int, workers: int = 1) -> list:
    """Apply ``fn(rng, n, block)`` to every block; results in block order."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n_blocks = -(-trials // BLOCK)
    jobs = [(b, min(BLOCK, trials - b * BLOCK)) for b in range(n_blocks)]
    call = lambda job: fn(block_rng(seed, job[0]), job[1], job[0])
    if workers <= 1 or n_blocks == 1:
        return [call(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(call, jobs))


def _batch_sinrs(params, alloc, rng, n):
    ch = model.draw_channels(params, rng, n)
    return ch, model._sinrs(params, ch.h_SB, ch.h_SC, ch.h_CB, ch.h_CD, alloc.alpha, alloc.p_C)


def estimate_joint_outage(params: NetworkParams, alloc: PowerAllocation, targets: QosTargets,
                          trials: int, seed: int, workers: int = 1) -> Estimate:
    """Fraction of trials in which the uplink or the cooperative D2D link fails.

    Success needs all four decodings: the BS decodes the uplink, the relay
    decodes the DT, and the D2D receiver first decodes the uplink stream and
    then the relayed stream.
    """
    alloc.check(params)
    xi_B, xi_D = targets.xi_B, targets.xi_D

    def block(rng, n, _):
        _, (g_SC, g_CDC, g_CDS, g_CB) = _batch_sinrs(params, alloc, rng, n)
        ok = (g_CB >= xi_B) & (g_SC >= xi_D) & (g_CDC >= xi_B) & (g_CDS >= xi_D)
        return n - int(np.count_nonzero(ok))

    fails = sum(run_blocks(block, trials, seed, workers))
    return Estimate.bernoulli(fails, trials, seed)


def estimate_outage_factors(params: NetworkParams, alloc: PowerAllocation, targets: QosTargets,
                            trials: int, seed: int, workers: int = 1) -> dict[str, Estimate]:
    """Direct estimates of each factor of the closed form and of the per-link outages.

    P1, P2: first hop and uplink both succeed, with the DT on the
    channel-inversion branch (P1) or saturated at P_S (P2). P3: both SIC
    stages at the D2D receiver succeed.
    """
    alloc.check(params)
    xi_B, xi_D = targets.xi_B, targets.xi_D
    keys = ("P1", "P2", "P3", "uplink", "d2d", "joint")

    def block(rng, n, _):
        ch, (g_SC, g_CDC, g_CDS, g_CB) = _batch_sinrs(params, alloc, rng, n)
        inv = ch.h_SB * params.P_S >= params.theta
        first = (g_SC >= xi_D) & (g_CB >= xi_B)
        second = (g_CDC >= xi_B) & (g_CDS >= xi_D)
        up = g_CB >= xi_B
        d2d = (g_SC >= xi_D) & second
        c = np.count_nonzero
        return (c(first & inv), c(first & ~inv), c(second),
                n - c(up), n - c(d2d), n - c(first & second))

    sums = np.sum(np.array(run_blocks(block, trials, seed, workers), dtype=np.int64), axis=0)
    return {k: Estimate.bernoulli(int(v), trials, seed) for k, v in zip(keys, sums)}


# ------------------------------------------------------------ average rates

class Strategy(enum.Enum):
    JOA = "JOA"
    RFA = "RFA"


@dataclass(frozen=True)
class AverageRates:
    R_B: float
    R_D: float
    R_min: float
    R_sum: float
    p_out: float  # fraction of trials missing the QoS targets
    trials: int


def _allocate(params, ch, strategy, alpha_rand):
    if strategy is Strategy.JOA:
        sol = solve_maxmin(params, ch)
        return PowerAllocation(sol.alpha_star, sol.p_C_star)
    return PowerAllocation(alpha_rand, params.P_C)


def average_rates(params: NetworkParams, strategy: Strategy, targets: QosTargets,
                  trials: int, seed: int, workers: int = 1) -> AverageRates:
    """Strategy-averaged rates over i.i.d. channel draws.

    JOA solves the max-min problem per draw. RFA uses full power with alpha
    drawn uniformly on [0, 1] from a stream separate from the channels, so two
    strategies run with the same seed see identical channels.
    """
    strategy = Strategy(strategy)
    xi_B, xi_D = targets.xi_B, targets.xi_D

    def block(rng, n, b):
        ch = model.draw_channels(params, rng, n)
        alphas = block_rng(seed, b, stream=1).uniform(0.0, 1.0, n)
        acc = np.zeros(5)
        for i in range(n):
            c = ChannelState(float(ch.h_SB[i]), float(ch.h_SC[i]), float(ch.h_CB[i]), float(ch.h_CD[i]))
            alloc = _allocate(params, c, strategy, float(alphas[i]))
            g = model.sinr_bundle(params, c, alloc)
            rb = model.RateBundle.from_links(model.rate(g.gamma_CB), model.rate(g.gamma_SC),
                                             model.rate(g.gamma_CDS))
            ok = (g.gamma_CB >= xi_B and g.gamma_SC >= xi_D
                  and g.gamma_CDC >= xi_B and g.gamma_CDS >= xi_D)
            acc += (rb.R_B, rb.R_D, rb.R_min, rb.R_sum, 0.0 if ok else 1.0)
        return acc

    tot = np.zeros(5)
    for part in run_blocks(block, trials, seed, workers):
        tot += part
    m = tot / trials
    return AverageRates(*(float(x) for x in m), trials)


# ------------------------------------------------------------- grid search

def grid_search_maxmin(params: NetworkParams, ch: ChannelState, n_alpha: int, n_pc: int):
    """Exhaustive max of R_min over the uniform grid [0,1] x [0,P_C].

    R_min is monotone in the smallest of the three link SINRs, so the search
    runs on SINRs and converts only the winner. Ties go to the first index.
    """
    if n_alpha < 2 or n_pc < 2:
        raise ValueError("grid sizes must be >= 2")
    alphas = np.linspace(0.0, 1.0, n_alpha)[:, None]
    pcs = np.linspace(0.0, params.P_C, n_pc)[None, :]
    g_SC, _, g_CDS, g_CB = model._sinrs(params, ch.h_SB, ch.h_SC, ch.h_CB, ch.h_CD, alphas, pcs)
    low = np.minimum(np.minimum(g_CB, g_CDS), np.broadcast_to(g_SC, g_CB.shape))
    i, j = np.unravel_index(int(np.argmax(low)), low.shape)
    return float(alphas[i, 0]), float(pcs[0, j]), model.rate(float(low[i, j]))


class Objective(enum.Enum):
    Exact = "Exact"
    Bound = "Bound"


def outage_grid_axes(params: NetworkParams, targets: QosTargets, n_alpha: int, n_pc: int):
    """alpha at cell midpoints of (K, 1); p_C = P_C (j+1)/n_pc."""
    K = alpha_floor(targets.xi_B)
    alphas = K + (np.arange(n_alpha) + 0.5) * (1.0 - K) / n_alpha
    pcs = params.P_C * (np.arange(n_pc) + 1.0) / n_pc
    return alphas, pcs


def grid_search_outage(params: NetworkParams, targets: QosTargets, objective: Objective,
                       n_alpha: int, n_pc: int):
    if n_alpha < 1 or n_pc < 2:
        raise ValueError("grid sizes too small")
    f = outage_exact_grid if Objective(objective) is Objective.Exact else outage_bound_grid
    alphas, pcs = outage_grid_axes(params, targets, n_alpha, n_pc)
    vals = f(params, alphas[:, None], pcs[None, :], targets.xi_B, targets.xi_D)
    i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
    return float(alphas[i]), float(pcs[j]), float(vals[i, j])
