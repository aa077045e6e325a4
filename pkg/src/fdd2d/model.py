"""Domain types and the SINR / rate layer of the cooperative FD D2D link.

Nodes: B (base station), C (cellular user, full-duplex DF relay), S (D2D
transmitter), D (D2D receiver). All powers are linear mW, all gains linear.

The array-valued helpers (prefixed ``_``) broadcast over numpy inputs and are
what the Monte Carlo and grid-search code use; the public operations wrap
them for the scalar dataclass interface.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateInput

LN2 = math.log(2.0)


def _scalar(x):
    """Collapse 0-d arrays to float; leave real arrays alone."""
    if isinstance(x, np.ndarray) and x.ndim == 0:
        return float(x)
    if isinstance(x, np.generic):
        return float(x)
    return x


@dataclass(frozen=True)
class NetworkParams:
    """Statistical description of the network.

    ``phi_*`` are average channel power gains, ``sigma2_*`` receiver noise
    powers (mW), ``beta``/``lam`` the residual self-interference law
    ``beta * p_C**lam`` (mW), ``theta`` the interference threshold at the BS
    (mW) and ``P_S``/``P_C`` the transmit power budgets (mW).
    """

    phi_SB: float
    phi_SC: float
    phi_CB: float
    phi_CD: float
    sigma2_B: float
    sigma2_C: float
    sigma2_D: float
    beta: float
    lam: float
    theta: float
    P_S: float
    P_C: float

    def __post_init__(self):
        for name in ("phi_SB", "phi_SC", "phi_CB", "phi_CD",
                     "sigma2_B", "sigma2_C", "sigma2_D", "theta", "P_S", "P_C"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise ValueError(f"beta must be >= 0, got {self.beta!r}")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lam must lie in [0, 1], got {self.lam!r}")


@dataclass(frozen=True)
class ChannelState:
    """One fading realization (or a batch, when the fields are arrays)."""

    h_SB: float
    h_SC: float
    h_CB: float
    h_CD: float

    def __post_init__(self):
        for name in ("h_SB", "h_SC", "h_CB", "h_CD"):
            v = np.asarray(getattr(self, name), dtype=float)
            if not (np.all(np.isfinite(v)) and np.all(v >= 0)):
                raise ValueError(f"{name} must be finite and >= 0")


@dataclass(frozen=True)
class PowerAllocation:
    alpha: float
    p_C: float

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if not (math.isfinite(self.p_C) and self.p_C >= 0):
            raise ValueError(f"p_C must be finite and >= 0, got {self.p_C!r}")

    def check(self, params: NetworkParams, rtol: float = 1e-12) -> "PowerAllocation":
        if self.p_C > params.P_C * (1 + rtol):
            raise ValueError(f"p_C={self.p_C!r} exceeds the CU budget P_C={params.P_C!r}")
        return self


@dataclass(frozen=True)
class QosTargets:
    """Target rates in bit/s/Hz; SINR thresholds are derived, never stored."""

    eta_B: float
    eta_D: float

    def __post_init__(self):
        if not (self.eta_B > 0 and self.eta_D > 0):
            raise ValueError("target rates must be positive")

    @property
    def xi_B(self) -> float:
        return 2.0 ** self.eta_B - 1.0

    @property
    def xi_D(self) -> float:
        return 2.0 ** self.eta_D - 1.0


@dataclass(frozen=True)
class RateBundle:
    R_B: float
    R_SC: float
    R_CDS: float
    R_D: float
    R_min: float

    def __post_init__(self):
        assert np.all(self.R_D == np.minimum(self.R_SC, self.R_CDS))
        assert np.all(self.R_min == np.minimum(self.R_B, self.R_D))

    @classmethod
    def from_links(cls, R_B, R_SC, R_CDS) -> "RateBundle":
        R_D = _scalar(np.minimum(R_SC, R_CDS))
        return cls(R_B, R_SC, R_CDS, R_D, _scalar(np.minimum(R_B, R_D)))

    @property
    def R_sum(self):
        return self.R_B + self.R_D


class SinrBundle(NamedTuple):
    gamma_SC: float
    gamma_CDC: float
    gamma_CDS: float
    gamma_CB: float


# ---------------------------------------------------------------- channels

def draw_channels(params: NetworkParams, rng: np.random.Generator, size=None) -> ChannelState:
    """Rayleigh power gains: |g|^2 ~ Exp(mean phi). Draw order is fixed."""
    return ChannelState(
        h_SB=_scalar(rng.exponential(params.phi_SB, size)),
        h_SC=_scalar(rng.exponential(params.phi_SC, size)),
        h_CB=_scalar(rng.exponential(params.phi_CB, size)),
        h_CD=_scalar(rng.exponential(params.phi_CD, size)),
    )


def sample_channels(params: NetworkParams, seed: int, size=None) -> ChannelState:
    return draw_channels(params, np.random.default_rng(seed), size)


# ------------------------------------------------------------- power laws

def _dt_power(theta, P_S, h_SB):
    h = np.asarray(h_SB, dtype=float)
    inverse = h * P_S >= theta
    safe = np.where(inverse, h, 1.0)
    return np.where(inverse, theta / safe, P_S)


def _dt_interference(theta, P_S, h_SB):
    """p_S * h_SB, taken as exactly theta on the channel-inversion branch."""
    h = np.asarray(h_SB, dtype=float)
    return np.where(h * P_S >= theta, theta, P_S * h)


def dt_transmit_power(params: NetworkParams, h_SB) -> float:
    """Truncated channel inversion, ``min(theta / h_SB, P_S)``."""
    return _scalar(_dt_power(params.theta, params.P_S, h_SB))


def dt_interference(params: NetworkParams, h_SB) -> float:
    return _scalar(_dt_interference(params.theta, params.P_S, h_SB))


def _rsi(beta, lam, p_C):
    # numpy already gives 0**0 == 1, which is the constant-RSI convention
    return beta * np.power(np.asarray(p_C, dtype=float), lam)


def rsi_variance(params: NetworkParams, p_C) -> float:
    return _scalar(_rsi(params.beta, params.lam, p_C))


def trr(params: NetworkParams, p_C: float) -> float:
    """Transmit power to residual self-interference ratio (linear)."""
    if p_C <= 0 or params.beta == 0:
        raise DegenerateInput("TRR needs p_C > 0 and beta > 0")
    return p_C ** (1.0 - params.lam) / params.beta


def trr_db(params: NetworkParams, p_C: float) -> float:
    return 10.0 * math.log10(trr(params, p_C))


def pc_for_trr(trr_lin: float, beta: float, lam: float) -> float:
    """CU power giving a prescribed TRR, ``(TRR * beta) ** (1 / (1 - lam))``."""
    if lam >= 1.0:
        raise DegenerateInput("TRR does not depend on p_C when lam = 1; inversion undefined")
    if trr_lin <= 0 or beta <= 0:
        raise DegenerateInput("TRR and beta must be positive")
    log_p = math.log(trr_lin * beta) / (1.0 - lam)
    if log_p > 709.0:
        raise DegenerateInput(f"p_C for TRR={trr_lin!r} overflows at lam={lam!r}")
    return math.exp(log_p)


# ------------------------------------------------------------- SINR / rate

def _sinrs(params: NetworkParams, h_SB, h_SC, h_CB, h_CD, alpha, p_C):
    alpha = np.asarray(alpha, dtype=float)
    p_C = np.asarray(p_C, dtype=float)
    p_S = _dt_power(params.theta, params.P_S, h_SB)
    interf = _dt_interference(params.theta, params.P_S, h_SB)
    s = _rsi(params.beta, params.lam, p_C) + params.sigma2_C
    rx_D = p_C * h_CD
    rx_B = p_C * h_CB
    g_SC = p_S * h_SC / s
    g_CDC = alpha * rx_D / ((1.0 - alpha) * rx_D + params.sigma2_D)
    g_CDS = (1.0 - alpha) * rx_D / params.sigma2_D
    g_CB = alpha * rx_B / (interf + (1.0 - alpha) * rx_B + params.sigma2_B)
    return g_SC, g_CDC, g_CDS, g_CB


def sinr_bundle(params: NetworkParams, ch: ChannelState, alloc: PowerAllocation) -> SinrBundle:
    alloc.check(params)
    g = _sinrs(params, ch.h_SB, ch.h_SC, ch.h_CB, ch.h_CD, alloc.alpha, alloc.p_C)
    return SinrBundle(*(_scalar(x) for x in g))


def rate(gamma):
    """Shannon rate log2(1 + gamma), accurate for small gamma."""
    return _scalar(np.log1p(gamma) / LN2)


def rate_bundle(params: NetworkParams, ch: ChannelState, alloc: PowerAllocation) -> RateBundle:
    g = sinr_bundle(params, ch, alloc)
    return RateBundle.from_links(rate(g.gamma_CB), rate(g.gamma_SC), rate(g.gamma_CDS))
