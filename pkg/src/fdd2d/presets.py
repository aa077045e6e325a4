"""Default parameter sets for the standard experiments."""
from __future__ import annotations

from dataclasses import replace

from .model import ChannelState, NetworkParams, QosTargets
from .scenario import RadioConfig, build_params, reference_geometry

UNIT_TARGETS = QosTargets(1.0, 1.0)


def reference_params(lam: float = 0.1, beta: float = 1.0, P_C_dBm: float = 23.0,
                     **radio) -> NetworkParams:
    """Reference geometry with default radio settings (beta relative to noise)."""
    cfg = RadioConfig(lam=lam, beta=beta, P_C_dBm=P_C_dBm, **radio)
    return build_params(reference_geometry(), cfg)


def fixed_gain_channels(h: float = 0.5) -> ChannelState:
    return ChannelState(h, h, h, h)


def fixed_gain_params(lam: float, beta: float = 1.0) -> NetworkParams:
    """Radio settings for the fixed-gain rate-region study. The average gains
    are irrelevant there (rates use the given instantaneous gains) and are set
    to the same 0.5."""
    p = reference_params(lam=lam, beta=beta)
    return replace(p, phi_SB=0.5, phi_SC=0.5, phi_CB=0.5, phi_CD=0.5)
