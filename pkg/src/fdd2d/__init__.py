"""Rate, outage and power-allocation analysis for a cooperative full-duplex
D2D link underlaying a cellular uplink."""
from .model import (ChannelState, NetworkParams, PowerAllocation, QosTargets, RateBundle,
                    dt_transmit_power, rate_bundle, rsi_variance, sample_channels, sinr_bundle, trr)
from .analysis import (OutageBreakdown, hd_baseline_outage, link_outages, outage_asymptotic,
                       outage_exact, outage_upper_bound)
from .rate_region import ParetoPoint, max_uplink_rate, pareto_boundary, pareto_point
from .maxmin import MaxMinCase, MaxMinSolution, pc_bar, solve_maxmin
from .outage_opt import OutageOptSolution, optimal_alpha, optimal_pc, solve_min_outage

__version__ = "0.1.0"
