import numpy as np
import pytest
from hypothesis import settings

from fdd2d.model import ChannelState, NetworkParams, PowerAllocation, QosTargets
from fdd2d.scenario import CellLayout, RadioConfig, build_params, random_drop

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


def random_instance(rng: np.random.Generator):
    """A physically sane random network: random drop, random radio settings,
    random targets and a random feasible allocation."""
    geom = random_drop(CellLayout(), int(rng.integers(1 << 31)))
    radio = RadioConfig(
        P_S_dBm=float(rng.uniform(0, 30)),
        P_C_dBm=float(rng.uniform(0, 30)),
        theta_dBm=float(rng.uniform(-115, -85)),
        beta=float(10 ** rng.uniform(-4, 1)),
        lam=float(rng.uniform(0, 1)),
    )
    params = build_params(geom, radio)
    targets = QosTargets(float(rng.uniform(0.1, 2)), float(rng.uniform(0.1, 2)))
    alloc = PowerAllocation(float(rng.uniform(0, 1)), float(params.P_C * rng.uniform(0.01, 1)))
    return params, targets, alloc


def random_channels(params: NetworkParams, rng) -> ChannelState:
    return ChannelState(*(float(rng.exponential(getattr(params, f"phi_{k}")))
                          for k in ("SB", "SC", "CB", "CD")))


def unit_params(**kw) -> NetworkParams:
    """Normalised toy network (unit gains and noise), handy for exact arithmetic."""
    base = dict(phi_SB=1.0, phi_SC=1.0, phi_CB=1.0, phi_CD=1.0, sigma2_B=1.0, sigma2_C=1.0,
                sigma2_D=1.0, beta=1.0, lam=0.0, theta=0.1, P_S=1.0, P_C=10.0)
    base.update(kw)
    return NetworkParams(**base)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one verdict line per acceptance criterion, collected by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
